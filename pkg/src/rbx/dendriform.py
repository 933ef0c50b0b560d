"""Involutive dendriform algebras and their operadic cochain complex.

An element of O(n) = Hom(K[C_n] (x) D^n, D) is an object array of shape
``(n,) + (d,) * n + (d,)``; position ``r - 1`` on the first axis holds the
component for the label [r].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .algebra import ShapeError, ValidationReport, _tensor
from .cochains import insert, involution_sign, s_action, s_matrix, sign
from .complexes import CohomologyReport, compute_cohomology
from .hochschild import default_max_degree
from .linalg import identity, kernel_basis, rational, zeros

if TYPE_CHECKING:
    from .rota_baxter import RBOperator


class InvalidDendriformError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        v = report.violations[0]
        super().__init__(f"not a dendriform algebra: {v.axiom} fails at {v.indices}")


@dataclass(frozen=True, eq=False)
class DendriformAlgebra:
    dim: int
    prec: np.ndarray
    succ: np.ndarray
    inv: np.ndarray | None = None
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        d = self.dim
        object.__setattr__(self, "prec", _tensor(self.prec, (d, d, d), "prec"))
        object.__setattr__(self, "succ", _tensor(self.succ, (d, d, d), "succ"))
        if self.inv is not None:
            object.__setattr__(self, "inv", _tensor(self.inv, (d, d), "involution"))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{p}" for p in range(d)))

    def lt(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.prec)

    def gt(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.succ)

    def star(self, x):
        return self.inv.dot(x)

    @property
    def pi(self) -> np.ndarray:
        """The Maurer-Cartan element of O(2): pi([1]; a, b) = a < b, pi([2]; a, b) = a > b."""
        return np.stack([self.prec, self.succ])


def validate_dendriform(d: DendriformAlgebra) -> ValidationReport:
    report = ValidationReport()
    e = [zeros(d.dim) for _ in range(d.dim)]
    for i in range(d.dim):
        e[i][i] = rational(1)
    for i, j, k in itertools.product(range(d.dim), repeat=3):
        a, b, c = e[i], e[j], e[k]
        report.check(
            "(a<b)<c = a<(b<c + b>c)", (i, j, k),
            d.lt(d.lt(a, b), c), d.lt(a, d.lt(b, c) + d.gt(b, c)),
        )
        report.check(
            "(a>b)<c = a>(b<c)", (i, j, k),
            d.lt(d.gt(a, b), c), d.gt(a, d.lt(b, c)),
        )
        report.check(
            "(a<b + a>b)>c = a>(b>c)", (i, j, k),
            d.gt(d.lt(a, b) + d.gt(a, b), c), d.gt(a, d.gt(b, c)),
        )
    if d.inv is not None:
        sq = d.inv.dot(d.inv)
        for i in range(d.dim):
            report.check("involution squares to identity", (i,), sq[:, i], e[i])
        for i, j in itertools.product(range(d.dim), repeat=2):
            report.check(
                "(a<b)* = b*>a*", (i, j),
                d.star(d.lt(e[i], e[j])), d.gt(d.star(e[j]), d.star(e[i])),
            )
    return report


def arity(f: np.ndarray) -> int:
    return f.ndim - 2


def operad_compose(f, i: int, g) -> np.ndarray:
    """Partial composition f o_i g in the dendriform operad.

    For label [r] of the result: r < i reads f at [r] with g summed over all
    labels; i <= r <= i+n-1 reads f at [i] with g at [r-i+1]; r >= i+n reads
    f at [r-n+1] with g summed over all labels.
    """
    f = np.asarray(f, dtype=object)
    g = np.asarray(g, dtype=object)
    m, n = arity(f), arity(g)
    if not 1 <= i <= m:
        raise IndexError(f"composition slot {i} out of range for arity {m}")
    g_sum = g.sum(axis=0)
    parts = []
    for r in range(1, m + n):
        if r <= i - 1:
            parts.append(insert(f[r - 1], i, g_sum))
        elif r <= i + n - 1:
            parts.append(insert(f[i - 1], i, g[r - i]))
        else:
            parts.append(insert(f[r - n], i, g_sum))
    return np.stack(parts)


def dend_bracket(f, g) -> np.ndarray:
    """Graded bracket on O(* + 1); f in O(m+1), g in O(n+1) have degrees m, n."""
    f = np.asarray(f, dtype=object)
    g = np.asarray(g, dtype=object)
    m, n = arity(f) - 1, arity(g) - 1
    d = f.shape[-1]
    out = zeros((m + n + 1,) + (d,) * (m + n + 1) + (d,))
    for i in range(1, m + 2):
        out = out + sign((i - 1) * n) * operad_compose(f, i, g)
    tail = zeros(out.shape)
    for i in range(1, n + 2):
        tail = tail + sign((i - 1) * m) * operad_compose(g, i, f)
    return out - sign(m * n) * tail


def _require_valid(d: DendriformAlgebra) -> None:
    report = validate_dendriform(d)
    if not report.ok:
        raise InvalidDendriformError(report)


def _differential(pi: np.ndarray, f: np.ndarray) -> np.ndarray:
    return sign(arity(f) - 1) * dend_bracket(pi, f)


def dend_differential(d: DendriformAlgebra, f) -> np.ndarray:
    """delta_pi(f) = (-1)^(n-1) [pi, f] for f in O(n)."""
    _require_valid(d)
    f = np.asarray(f, dtype=object)
    n = arity(f)
    if f.shape != (n,) + (d.dim,) * (n + 1):
        raise ShapeError(f"dendriform cochain shape {f.shape} does not match dimension {d.dim}")
    return _differential(d.pi, f)


def dend_s_action(f, inv) -> np.ndarray:
    """(S f)([r]; a_1..a_n) = (-1)^((n-1)(n-2)/2) f([n-r+1]; a_n*, ..., a_1*)*."""
    f = np.asarray(f, dtype=object)
    n = arity(f)
    return np.stack([s_action(f[n - r], inv, inv) for r in range(1, n + 1)])


def dend_eigen_basis(d: DendriformAlgebra, n: int, eigenvalue: int = 1) -> list[np.ndarray]:
    if d.inv is None:
        raise ValueError("dendriform algebra has no involution")
    smat = s_matrix(n, d.inv, d.inv, labels=n)
    shape = (n,) + (d.dim,) * (n + 1)
    return [v.reshape(shape) for v in kernel_basis(smat - eigenvalue * identity(smat.shape[0]))]


def dend_involutive_basis(d: DendriformAlgebra, n: int) -> list[np.ndarray]:
    return dend_eigen_basis(d, n, 1)


def is_dend_involutive(f, inv) -> bool:
    f = np.asarray(f, dtype=object)
    return bool(np.all(dend_s_action(f, inv) == f))


def dend_cohomology(d: DendriformAlgebra, max_degree: int | None = None, variant: str = "ordinary") -> CohomologyReport:
    """Cohomology of O(*) with differential delta_pi, arities 1..max_degree.

    ``variant`` is ``ordinary``, ``involutive`` (the complex iC_dend) or
    ``skew`` (the -1 eigenspace of the label-reversing involution).
    """
    _require_valid(d)
    if variant != "ordinary" and d.inv is None:
        raise ValueError(f"{variant} dendriform cohomology needs an involution")
    max_degree = default_max_degree() if max_degree is None else max_degree
    dim = d.dim
    pi = d.pi

    def spaces(n):
        if variant == "ordinary":
            size = n * dim ** (n + 1)
            shape = (n,) + (dim,) * (n + 1)
            out = []
            for k in range(size):
                c = zeros(shape)
                c.reshape(-1)[k] = rational(1)
                out.append(c)
            return out
        return dend_eigen_basis(d, n, 1 if variant == "involutive" else -1)

    member = None
    if variant != "ordinary":
        target = 1 if variant == "involutive" else -1

        def in_eigenspace(n, f):
            return bool(np.all(dend_s_action(f, d.inv) == target * f))

        member = in_eigenspace

    return compute_cohomology(
        "dendriform",
        variant,
        spaces=spaces,
        sizes=lambda n: n * dim ** (n + 1),
        differential=lambda f: _differential(pi, f),
        degrees=range(1, max_degree + 1),
        member=member,
        start=1,
    )


def theta(P, op: "RBOperator") -> np.ndarray:
    """Theta_n(P) in O(n+1) for an involutive P: M^n -> A, n >= 1.

    Label [1]: (-1)^(n+1) u_1 P(u_2, ..., u_{n+1}); label [n+1]:
    P(u_1, ..., u_n) u_{n+1}; all middle labels vanish.
    """
    from .rota_baxter import _act_after, _act_before, is_involutive_rb_cochain

    P = np.asarray(P, dtype=object)
    n = P.ndim - 1
    m_ = op.bimodule
    if n < 1:
        raise ValueError("theta is defined for cochains of arity >= 1")
    if P.shape != (m_.dim,) * n + (op.algebra.dim,):
        raise ShapeError(f"cochain shape {P.shape} does not match the operator's spaces")
    if not is_involutive_rb_cochain(op, P):
        raise ValueError("theta needs an involutive cochain")
    out = zeros((n + 1,) + (m_.dim,) * (n + 2))
    out[0] = sign(n + 1) * _act_before(m_.right, P)
    out[n] = _act_after(P, m_.left)
    return out


def theta_chain_sign(n: int) -> int:
    """Sign e(n) with delta_{pi_T}(Theta_n P) = e(n) Theta_{n+1}(d_T P).

    delta_pi on O(n+1) carries (-1)^n, and [pi_T, Theta_n P] = Theta_{n+1}[[T, P]]
    by bracket preservation with Theta_1(T) = pi_T, so e(n) = (-1)^n.
    """
    return sign(n)


__all__ = [
    "DendriformAlgebra",
    "InvalidDendriformError",
    "validate_dendriform",
    "operad_compose",
    "dend_bracket",
    "dend_differential",
    "dend_s_action",
    "dend_involutive_basis",
    "dend_eigen_basis",
    "is_dend_involutive",
    "dend_cohomology",
    "theta",
    "theta_chain_sign",
    "involution_sign",
]
