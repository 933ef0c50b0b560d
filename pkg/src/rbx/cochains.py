"""Dense multilinear maps stored as coefficient tensors.

A cochain of arity ``n`` from a space of dimension ``d`` to a space of
dimension ``e`` is an object array of shape ``(d,) * n + (e,)`` whose entry
``c[p1, ..., pn, k]`` is the ``k``-th coordinate of ``f(b_p1, ..., b_pn)``.
Arity-0 cochains are plain vectors.  Multi-indices are enumerated in
lexicographic (row-major) order, which fixes every matrix representation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import prod

import numpy as np

from .linalg import zeros


def arity(f: np.ndarray) -> int:
    return f.ndim - 1


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def involution_sign(n: int) -> int:
    """(-1)^((n-1)(n-2)/2); equals -1 at n = 0 which gives S_0(a) = -a*."""
    return sign((n - 1) * (n - 2) // 2)


def basis_cochain(shape, flat_index: int) -> np.ndarray:
    c = zeros(shape)
    c.reshape(-1)[flat_index] = Fraction(1)
    return c


def standard_basis(n: int, d_src: int, d_tgt: int) -> list[np.ndarray]:
    shape = (d_src,) * n + (d_tgt,)
    size = d_src**n * d_tgt
    return [basis_cochain(shape, k) for k in range(size)]


def insert(f: np.ndarray, i: int, g: np.ndarray) -> np.ndarray:
    """Plug the output of ``g`` into argument slot ``i`` (1-based) of ``f``.

    ``(f o_i g)(x_1, ..., x_{m+n-1}) = f(x_1, ..., g(x_i, ..., x_{i+n-1}), ..., x_{m+n-1})``
    where g's target must be the space of f's i-th argument.
    """
    m, n = arity(f), arity(g)
    if not 1 <= i <= m:
        raise IndexError(f"slot {i} out of range for arity {m}")
    d = f.shape[i - 1]
    nz_f, nz_g = np.nonzero(f), np.nonzero(g)
    nf, ng = len(nz_f[0]), len(nz_g[0])
    out_size = f.size // d * g.size // max(g.shape[-1], 1)
    # Basis cochains are one-hot; looping over the sparser operand avoids
    # multiplying long runs of exact zeros.
    cost_dense = out_size * d
    cost_f = nf * (g.size // d + _LOOP_COST)
    cost_g = ng * (f.size // d + _LOOP_COST)
    if min(cost_f, cost_g) < cost_dense:
        return _insert_sparse(f, i, g, nz_f if cost_f <= cost_g else None, nz_g)
    t = np.tensordot(g, f, axes=([n], [i - 1]))
    # t axes: g args (n), f args before slot (i-1), f args after slot (m-i), target
    order = (
        list(range(n, n + i - 1))
        + list(range(n))
        + list(range(n + i - 1, n + m - 1))
        + [n + m - 1]
    )
    return t.transpose(order)


_LOOP_COST = 8


def _insert_sparse(f: np.ndarray, i: int, g: np.ndarray, nz_f, nz_g) -> np.ndarray:
    m, n = arity(f), arity(g)
    shape = f.shape[: i - 1] + g.shape[:n] + f.shape[i:]
    out = zeros(shape)
    full = (slice(None),)
    if nz_f is not None:
        for idx in zip(*nz_f):
            c = f[idx]
            target = idx[: i - 1] + full * n + idx[i:]
            out[target] = out[target] + c * g[..., idx[i - 1]]
    else:
        for idy in zip(*nz_g):
            c = g[idy]
            target = full * (i - 1) + idy[:n] + full * (m - i + 1)
            out[target] = out[target] + c * np.take(f, idy[n], axis=i - 1)
    return out


def _monomial(linear: np.ndarray):
    """(rows, scales) if every column of ``linear`` has exactly one nonzero entry."""
    rows, scales = [], []
    for j in range(linear.shape[1]):
        nz = [r for r in range(linear.shape[0]) if linear[r, j] != 0]
        if len(nz) != 1:
            return None
        rows.append(nz[0])
        scales.append(linear[nz[0], j])
    return rows, scales


def _contract_axis(f: np.ndarray, linear: np.ndarray, axis: int) -> np.ndarray:
    """``out[..., j, ...] = sum_p f[..., p, ...] linear[p, j]`` along ``axis``."""
    mono = _monomial(linear)
    if mono is None:
        return np.moveaxis(np.tensordot(f, linear, axes=([axis], [0])), -1, axis)
    rows, scales = mono
    out = np.take(f, rows, axis=axis)
    if any(c != 1 for c in scales):
        shape = [1] * f.ndim
        shape[axis] = len(scales)
        out = out * np.asarray(scales, dtype=object).reshape(shape)
    return out


def postcompose(f: np.ndarray, linear: np.ndarray) -> np.ndarray:
    """``linear o f`` where ``linear`` is a matrix acting on f's target coordinates."""
    return _contract_axis(f, np.asarray(linear, dtype=object).T, f.ndim - 1)


def precompose_all(f: np.ndarray, linear: np.ndarray) -> np.ndarray:
    """``(x_1, ..., x_n) -> f(L x_1, ..., L x_n)``."""
    out = f
    for axis in range(arity(f)):
        out = _contract_axis(out, linear, axis)
    return out


def reverse_args(f: np.ndarray) -> np.ndarray:
    n = arity(f)
    return f.transpose(list(range(n - 1, -1, -1)) + [n])


def s_action(f: np.ndarray, src_inv: np.ndarray, tgt_inv: np.ndarray) -> np.ndarray:
    """``(S f)(x_1, ..., x_n) = (-1)^((n-1)(n-2)/2) f(x_n^*, ..., x_1^*)^*``."""
    n = arity(f)
    g = reverse_args(precompose_all(f, src_inv))
    return involution_sign(n) * postcompose(g, tgt_inv)


def evaluate(f: np.ndarray, *vectors) -> np.ndarray:
    out = f
    for v in vectors:
        out = np.tensordot(v, out, axes=([0], [0]))
    return out


def flatten(f: np.ndarray) -> np.ndarray:
    return f.reshape(-1)


def _nonzero_columns(mat: np.ndarray) -> list[list[tuple[int, Fraction]]]:
    """For each column j, the list of (row, value) with mat[row, j] != 0."""
    return [
        [(r, mat[r, j]) for r in range(mat.shape[0]) if mat[r, j] != 0]
        for j in range(mat.shape[1])
    ]


def s_matrix(n: int, src_inv: np.ndarray, tgt_inv: np.ndarray, labels: int = 0) -> np.ndarray:
    """Matrix of the involution-reversal operator on flattened cochains.

    With ``labels == 0`` this is S_n on Hom(V^n, W).  With ``labels == n`` the
    cochains carry a leading label axis of size n and the label ``r`` is sent
    to ``n - r + 1`` along with the argument reversal (dendriform cochains).
    """
    d, e = src_inv.shape[0], tgt_inv.shape[0]
    sgn = involution_sign(n)
    # row q of the source involution: x^* has e_q-coefficient src_inv[q, r] x_r
    src_rows = _nonzero_columns(src_inv.T)
    tgt_cols = _nonzero_columns(tgt_inv)
    label_range = range(labels) if labels else [None]
    shape = ((labels,) if labels else ()) + (d,) * n + (e,)
    size = prod(shape)
    out = zeros((size, size))
    flat = np.arange(size).reshape(shape)
    for lab in label_range:
        out_lab = () if lab is None else (labels - 1 - lab,)
        in_lab = () if lab is None else (lab,)
        for q in itertools.product(range(d), repeat=n):
            for combo in itertools.product(*(src_rows[qj] for qj in q)):
                coef = prod((c for _, c in combo), start=Fraction(1))
                p = tuple(r for r, _ in reversed(combo))
                for l in range(e):
                    col = flat[in_lab + q + (l,)]
                    for k, t in tgt_cols[l]:
                        out[flat[out_lab + p + (k,)], col] += sgn * coef * t
    return out
