"""Exact linear algebra over the rationals.

Matrices are numpy arrays of dtype ``object`` holding :class:`fractions.Fraction`
(or plain ``int``) entries; no floating point value is ever accepted.  The
elimination routine works on a sparse row representation and picks, for each
column, the candidate pivot row with the fewest nonzeros, which keeps fill-in
and coefficient growth small on the very sparse cochain matrices used by the
cohomology code.
"""

from __future__ import annotations

import numbers
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "rational",
    "as_matrix",
    "as_vector",
    "zeros",
    "identity",
    "rank",
    "kernel_basis",
    "solve",
    "rref",
    "inverse",
    "EchelonSpace",
]


def rational(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3"``, ``"-2/7"``.  Floats and
    bools are rejected so that no inexact value can leak into a computation.
    """
    if isinstance(x, bool):
        raise TypeError(f"booleans are not rationals: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise ValueError(f"not an exact rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"not an exact rational: {x!r} ({type(x).__name__})")


def _to_object_array(data) -> np.ndarray:
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for k, v in enumerate(flat):
        flat[k] = rational(v)
    return flat.reshape(arr.shape)


def as_matrix(data) -> np.ndarray:
    m = _to_object_array(data)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def as_vector(data) -> np.ndarray:
    v = _to_object_array(data)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    return v


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def _sparse_rows(m: np.ndarray) -> list[dict[int, Fraction]]:
    rows = []
    for row in m:
        rows.append({c: Fraction(v) for c, v in enumerate(row) if v != 0})
    return rows


def _entry_size(x: Fraction) -> int:
    return x.numerator.bit_length() + x.denominator.bit_length()


def _eliminate(rows: list[dict[int, Fraction]], ncols: int):
    """Reduce sparse ``rows`` in place to reduced row echelon form.

    Only columns ``0..ncols-1`` are eligible as pivots; any further columns
    (an augmented right-hand side) are carried along.  Returns the list of
    ``(pivot column, row index)`` pairs in column order.
    """
    col_rows: dict[int, set[int]] = defaultdict(set)
    for ri, r in enumerate(rows):
        for c in r:
            col_rows[c].add(ri)
    used = [False] * len(rows)
    pivots: list[tuple[int, int]] = []
    for c in range(ncols):
        candidates = [ri for ri in col_rows[c] if not used[ri]]
        if not candidates:
            continue
        p = min(candidates, key=lambda ri: (len(rows[ri]), _entry_size(rows[ri][c]), ri))
        prow = rows[p]
        lead = prow[c]
        if lead != 1:
            inv = Fraction(1) / lead
            for k in prow:
                prow[k] *= inv
        used[p] = True
        for ri in list(col_rows[c]):
            if ri == p:
                continue
            r = rows[ri]
            f = r[c]
            for k, v in prow.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    if k not in r:
                        col_rows[k].add(ri)
                    r[k] = nv
                elif k in r:
                    del r[k]
                    col_rows[k].discard(ri)
        pivots.append((c, p))
    return pivots


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns of ``m``."""
    m = as_matrix(m)
    nrows, ncols = m.shape
    rows = _sparse_rows(m)
    pivots = _eliminate(rows, ncols)
    out = zeros((len(pivots), ncols))
    for k, (_, p) in enumerate(pivots):
        for c, v in rows[p].items():
            out[k, c] = v
    return out, [c for c, _ in pivots]


def rank(m) -> int:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return 0
    return len(_eliminate(_sparse_rows(m), m.shape[1]))


def kernel_basis(m) -> list[np.ndarray]:
    """Basis of the right null space ``{v : m @ v == 0}``.

    One vector per free column; the free coordinate is 1 and the pivot
    coordinates are read off the reduced form, so every vector is exact.
    """
    m = np.asarray(m, dtype=object)
    nrows, ncols = m.shape
    if nrows == 0:
        basis = []
        for f in range(ncols):
            v = zeros(ncols)
            v[f] = Fraction(1)
            basis.append(v)
        return basis
    rows = _sparse_rows(m)
    pivots = _eliminate(rows, ncols)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = zeros(ncols)
        v[f] = Fraction(1)
        for c, p in pivots:
            x = rows[p].get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def solve(m, b) -> np.ndarray | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` if ``b`` is not in the column space."""
    m = np.asarray(m, dtype=object)
    nrows, ncols = m.shape
    b = np.asarray(b, dtype=object).reshape(-1)
    if len(b) != nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {nrows}")
    rows = _sparse_rows(m)
    for r, bv in zip(rows, b):
        if bv != 0:
            r[ncols] = Fraction(bv)
    pivots = _eliminate(rows, ncols)
    pivot_rows = {p for _, p in pivots}
    for ri, r in enumerate(rows):
        if ri not in pivot_rows and r.get(ncols, 0) != 0:
            return None
    x = zeros(ncols)
    for c, p in pivots:
        x[c] = rows[p].get(ncols, Fraction(0))
    return x


def inverse(m) -> np.ndarray | None:
    """Exact inverse of a square matrix, or ``None`` when it is singular."""
    m = as_matrix(m)
    n, k = m.shape
    if n != k:
        raise ValueError(f"inverse of a non-square {m.shape} matrix")
    rows = _sparse_rows(m)
    for i, r in enumerate(rows):
        r[n + i] = Fraction(1)
    pivots = _eliminate(rows, n)
    if len(pivots) < n:
        return None
    out = zeros((n, n))
    for c, p in pivots:
        for j in range(n):
            out[c, j] = rows[p].get(n + j, Fraction(0))
    return out


class EchelonSpace:
    """Incrementally grown subspace of ``Q^n`` kept in echelon form.

    Used to extend a basis of coboundaries to a basis of cocycles and to
    express vectors in terms of a chosen basis.
    """

    def __init__(self, n: int):
        self.n = n
        self._rows: dict[int, dict[int, Fraction]] = {}
        # Each stored row also records its expression in the added vectors.
        self._coords: dict[int, dict[int, Fraction]] = {}
        self.count = 0

    def __len__(self) -> int:
        return len(self._rows)

    def _reduce(self, vec) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
        r = {c: Fraction(v) for c, v in enumerate(vec) if v != 0}
        coords: dict[int, Fraction] = {}
        for c in sorted(self._rows):
            f = r.get(c)
            if not f:
                continue
            for k, v in self._rows[c].items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            for k, v in self._coords[c].items():
                nv = coords.get(k, 0) - f * v
                if nv:
                    coords[k] = nv
                else:
                    coords.pop(k, None)
        return r, coords

    def contains(self, vec) -> bool:
        r, _ = self._reduce(vec)
        return not r

    def add(self, vec) -> bool:
        """Add ``vec``; return True if it was independent of the space so far."""
        idx = self.count
        self.count += 1
        r, coords = self._reduce(vec)
        if not r:
            return False
        coords[idx] = coords.get(idx, 0) + 1
        lead = min(r)
        inv = Fraction(1) / r[lead]
        r = {k: v * inv for k, v in r.items()}
        coords = {k: v * inv for k, v in coords.items()}
        # keep other rows reduced against the new pivot
        for c, row in self._rows.items():
            f = row.get(lead)
            if not f:
                continue
            for k, v in r.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            crow = self._coords[c]
            for k, v in coords.items():
                nv = crow.get(k, 0) - f * v
                if nv:
                    crow[k] = nv
                else:
                    crow.pop(k, None)
        self._rows[lead] = r
        self._coords[lead] = coords
        return True

    def coordinates(self, vec) -> dict[int, Fraction] | None:
        """Express ``vec`` as a combination of the added vectors (by insertion index).

        Returns ``None`` when ``vec`` lies outside the space.  Vectors that were
        rejected by :meth:`add` as dependent never receive a coefficient.
        """
        r, coords = self._reduce(vec)
        if r:
            return None
        return {k: -v for k, v in coords.items() if v}


def matrix_from_columns(columns: Sequence[np.ndarray], nrows: int) -> np.ndarray:
    out = zeros((nrows, len(columns)))
    for j, col in enumerate(columns):
        out[:, j] = np.asarray(col, dtype=object).reshape(-1)
    return out


def is_zero(arr) -> bool:
    return all(v == 0 for v in np.asarray(arr, dtype=object).reshape(-1))


def iter_nonzero(arr) -> Iterable[tuple[tuple[int, ...], Fraction]]:
    arr = np.asarray(arr, dtype=object)
    for idx in np.ndindex(arr.shape):
        v = arr[idx]
        if v != 0:
            yield idx, v
