"""Relative Rota-Baxter operators on involutive algebras, the derived bracket,
the operator's cochain complex and gauge transformations.

An operator ``T: M -> A`` is stored as a ``dim(A) x dim(M)`` matrix; as a
cochain of arity 1 it is the transposed array ``c[p][k] = T[k][p]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    InvolutiveAlgebra,
    InvolutiveBimodule,
    ShapeError,
    ValidationReport,
    semidirect_product,
)
from .cochains import arity, insert, s_action, sign
from .complexes import CohomologyReport, compute_cohomology
from .hochschild import (
    default_max_degree,
    gerstenhaber_bracket,
    hochschild_coboundary,
    hochschild_differential,
    variant_basis,
    variant_member,
)
from .linalg import EchelonSpace, as_matrix, identity, inverse, kernel_basis, zeros


class NotRotaBaxterError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        first = report.violations[0]
        super().__init__(f"not an involutive relative Rota-Baxter operator: {first.axiom} fails at {first.indices}")


class BracketMismatchError(AssertionError):
    """The explicit derived bracket disagrees with the semidirect-product definition."""


class GaugeError(ValueError):
    def __init__(self, reason: str, certificate):
        self.reason = reason
        self.certificate = certificate
        super().__init__(reason)


@dataclass(frozen=True, eq=False)
class RBOperator:
    algebra: InvolutiveAlgebra
    bimodule: InvolutiveBimodule
    matrix: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.matrix)
        if mat.shape != (self.algebra.dim, self.bimodule.dim):
            raise ShapeError(f"operator matrix shape {mat.shape}, expected {(self.algebra.dim, self.bimodule.dim)}")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def checked(cls, a, m, matrix) -> "RBOperator":
        op = cls(a, m, matrix)
        report = check_relative_rb(a, m, op.matrix)
        if not report.ok:
            raise NotRotaBaxterError(report)
        return op

    @property
    def cochain(self) -> np.ndarray:
        return operator_cochain(self.matrix)


def operator_cochain(matrix) -> np.ndarray:
    return np.ascontiguousarray(as_matrix(matrix).T)


def cochain_matrix(f: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(f, dtype=object).T)


def check_relative_rb(a: InvolutiveAlgebra, m: InvolutiveBimodule, T) -> ValidationReport:
    T = as_matrix(T)
    if T.shape != (a.dim, m.dim):
        raise ShapeError(f"operator matrix shape {T.shape}, expected {(a.dim, m.dim)}")
    report = ValidationReport()
    em = [m.basis(p) for p in range(m.dim)]
    for p in range(m.dim):
        report.check("T(u*) = T(u)*", (p,), T.dot(m.star(em[p])), a.star(T.dot(em[p])))
    for p, q in itertools.product(range(m.dim), repeat=2):
        u, v = em[p], em[q]
        Tu, Tv = T.dot(u), T.dot(v)
        report.check(
            "T(u)T(v) = T(uT(v) + T(u)v)",
            (p, q),
            a.product(Tu, Tv),
            T.dot(m.act_right(u, Tv) + m.act_left(Tu, v)),
        )
    return report


def check_rb_on_algebra(a: InvolutiveAlgebra, R) -> ValidationReport:
    from .algebra import regular_bimodule

    return check_relative_rb(a, regular_bimodule(a), R)


def graph_check(a: InvolutiveAlgebra, m: InvolutiveBimodule, T) -> bool:
    """Whether {(Tu, u)} is an involutive subalgebra of the semidirect product."""
    T = as_matrix(T)
    s = semidirect_product(a, m)
    graph = []
    for p in range(m.dim):
        g = zeros(s.dim)
        g[: a.dim] = T[:, p]
        g[a.dim + p] = 1
        graph.append(g)
    space = EchelonSpace(s.dim)
    for g in graph:
        space.add(g)
    for g in graph:
        if not space.contains(s.star(g)):
            return False
    for g, h in itertools.product(graph, repeat=2):
        if not space.contains(s.product(g, h)):
            return False
    return True


@dataclass(frozen=True, eq=False)
class InducedStructures:
    prec: np.ndarray
    succ: np.ndarray
    star: np.ndarray
    l_T: np.ndarray
    r_T: np.ndarray


def _require_rb(op: RBOperator) -> None:
    report = check_relative_rb(op.algebra, op.bimodule, op.matrix)
    if not report.ok:
        raise NotRotaBaxterError(report)


def _structures(a: InvolutiveAlgebra, m: InvolutiveBimodule, T: np.ndarray) -> InducedStructures:
    # u_p < u_q = u_p T(u_q)
    prec = np.einsum("kq,pks->pqs", T, m.right)
    # u_p > u_q = T(u_p) u_q
    succ = np.einsum("kp,kqs->pqs", T, m.left)
    # l_T(u_p, e_i) = T(u_p) e_i - T(u_p e_i)
    l_T = np.einsum("kp,kis->pis", T, a.mul) - np.einsum("piq,sq->pis", m.right, T)
    # r_T(e_i, u_p) = e_i T(u_p) - T(e_i u_p)
    r_T = np.einsum("kp,iks->ips", T, a.mul) - np.einsum("ipq,sq->ips", m.left, T)
    return InducedStructures(prec, succ, prec + succ, l_T, r_T)


def induced_dendriform(a: InvolutiveAlgebra, m: InvolutiveBimodule, T):
    """The involutive dendriform algebra u < v = uT(v), u > v = T(u)v on M."""
    from .dendriform import DendriformAlgebra

    op = RBOperator(a, m, T)
    _require_rb(op)
    s = _structures(a, m, op.matrix)
    return DendriformAlgebra(m.dim, s.prec, s.succ, m.inv.copy(), m.names)


def induced_bimodule(a: InvolutiveAlgebra, m: InvolutiveBimodule, T) -> InducedStructures:
    op = RBOperator(a, m, T)
    _require_rb(op)
    return _structures(a, m, op.matrix)


def star_algebra(op: RBOperator) -> tuple[InvolutiveAlgebra, InvolutiveBimodule]:
    """(M, u*v = uT(v) + T(u)v) and A as an involutive bimodule over it via l_T, r_T."""
    s = _structures(op.algebra, op.bimodule, op.matrix)
    alg = InvolutiveAlgebra(op.bimodule.dim, s.star, op.bimodule.inv.copy(), op.bimodule.names)
    mod = InvolutiveBimodule(op.algebra.dim, s.l_T, s.r_T, op.algebra.inv.copy(), op.algebra.names)
    return alg, mod


def _act_after(f: np.ndarray, left: np.ndarray) -> np.ndarray:
    """(u_1, ..., u_{n+1}) -> f(u_1, ..., u_n) . u_{n+1}  (A-valued f acting on M)."""
    return np.tensordot(f, left, axes=([arity(f)], [0]))


def _act_before(right: np.ndarray, f: np.ndarray) -> np.ndarray:
    """(u_1, ..., u_{n+1}) -> u_1 . f(u_2, ..., u_{n+1})."""
    t = np.tensordot(right, f, axes=([1], [arity(f)]))
    return np.moveaxis(t, 1, -1)


def _product(f: np.ndarray, g: np.ndarray, mul: np.ndarray) -> np.ndarray:
    """(u_1, ..., u_{m+n}) -> f(u_1, ..., u_m) g(u_{m+1}, ..., u_{m+n})."""
    m = arity(f)
    t = np.tensordot(f, mul, axes=([m], [0]))
    t = np.tensordot(t, g, axes=([m], [arity(g)]))
    return np.moveaxis(t, m, -1)


def derived_bracket_explicit(mul, left, right, P, Q) -> np.ndarray:
    m, n = arity(P), arity(Q)
    XQ, YQ = _act_after(Q, left), _act_before(right, Q)
    XP, YP = _act_after(P, left), _act_before(right, P)
    out = sign(m * n) * (_product(P, Q, mul) - sign(m * n) * _product(Q, P, mul))
    for i in range(1, m + 1):
        out = out + sign((i - 1) * n) * insert(P, i, XQ)
        out = out - sign(i * n) * insert(P, i, YQ)
    inner = zeros(out.shape)
    for i in range(1, n + 1):
        inner = inner + sign((i - 1) * m) * insert(Q, i, XP)
        inner = inner - sign(i * m) * insert(Q, i, YP)
    return out - sign(m * n) * inner


def lift(a: InvolutiveAlgebra, m: InvolutiveBimodule, P: np.ndarray) -> np.ndarray:
    """P: M^n -> A viewed as a multilinear map on A + M (zero off M^n, landing in A)."""
    n = arity(P)
    d = a.dim + m.dim
    out = zeros((d,) * (n + 1))
    out[(slice(a.dim, None),) * n + (slice(0, a.dim),)] = P
    return out


def derived_bracket_semidirect(a: InvolutiveAlgebra, m: InvolutiveBimodule, P, Q) -> np.ndarray:
    """(-1)^m [[mu + l + r, P], Q] on A + M, restricted to M-arguments and A-values."""
    s = semidirect_product(a, m)
    P, Q = np.asarray(P, dtype=object), np.asarray(Q, dtype=object)
    outer = gerstenhaber_bracket(gerstenhaber_bracket(s.mul, lift(a, m, P)), lift(a, m, Q))
    k = arity(P) + arity(Q)
    return sign(arity(P)) * outer[(slice(a.dim, None),) * k + (slice(0, a.dim),)]


def _check_shape(a, m, P, what):
    P = np.asarray(P, dtype=object)
    expected = (m.dim,) * arity(P) + (a.dim,)
    if P.shape != expected:
        raise ShapeError(f"{what} has shape {P.shape}, expected {expected}")
    return P


def derived_bracket(a: InvolutiveAlgebra, m: InvolutiveBimodule, P, Q, crosscheck: bool = True) -> np.ndarray:
    """The derived bracket of A-valued cochains on M.

    Computed from the explicit expansion; with ``crosscheck`` the result is
    compared against the double Gerstenhaber bracket on the semidirect
    product and a :class:`BracketMismatchError` is raised on disagreement.
    """
    P = _check_shape(a, m, P, "P")
    Q = _check_shape(a, m, Q, "Q")
    out = derived_bracket_explicit(a.mul, m.left, m.right, P, Q)
    if crosscheck:
        other = derived_bracket_semidirect(a, m, P, Q)
        if not np.all(out == other):
            raise BracketMismatchError(f"derived bracket mismatch for arities {arity(P)}, {arity(Q)}")
    return out


def rb_differential(op: RBOperator, f) -> np.ndarray:
    """d_T f = [[T, f]]."""
    f = _check_shape(op.algebra, op.bimodule, f, "cochain")
    return derived_bracket_explicit(op.algebra.mul, op.bimodule.left, op.bimodule.right, op.cochain, f)


def delta_T_hochschild(op: RBOperator, f) -> np.ndarray:
    """Hochschild differential of (M, *) with coefficients in (A, l_T, r_T)."""
    f = _check_shape(op.algebra, op.bimodule, f, "cochain")
    s = _structures(op.algebra, op.bimodule, op.matrix)
    return hochschild_coboundary(s.star, s.l_T, s.r_T, f)


def rb_cohomology(op: RBOperator, max_degree: int | None = None, variant: str = "ordinary") -> CohomologyReport:
    _require_rb(op)
    max_degree = default_max_degree() if max_degree is None else max_degree
    a, m = op.algebra, op.bimodule
    return compute_cohomology(
        "rb",
        variant,
        spaces=lambda n: variant_basis(variant, n, m.inv, a.inv),
        sizes=lambda n: m.dim**n * a.dim,
        differential=lambda f: rb_differential(op, f),
        degrees=range(0, max_degree + 1),
        member=variant_member(variant, m.inv, a.inv),
    )


def is_involutive_rb_cochain(op: RBOperator, f) -> bool:
    return bool(np.all(s_action(np.asarray(f, dtype=object), op.bimodule.inv, op.algebra.inv) == f))


def gauge_transform(op: RBOperator, B) -> RBOperator:
    """T o (id_M + B o T)^{-1} for an involutive Hochschild 1-cocycle B: A -> M.

    ``B`` is a ``dim(M) x dim(A)`` matrix.  Raises :class:`GaugeError` with a
    certificate when B is not a cocycle, not involutive, or id + BT is singular.
    """
    a, m = op.algebra, op.bimodule
    B = as_matrix(B)
    if B.shape != (m.dim, a.dim):
        raise ShapeError(f"cocycle matrix shape {B.shape}, expected {(m.dim, a.dim)}")
    b_cochain = np.ascontiguousarray(B.T)
    dB = hochschild_differential(a, m, b_cochain)
    if not np.all(dB == 0):
        witness = next(idx for idx in np.ndindex(dB.shape) if dB[idx] != 0)
        raise GaugeError("B is not a Hochschild 1-cocycle", {"indices": witness[:2], "value": dB[witness[:2]]})
    sB = s_action(b_cochain, a.inv, m.inv)
    if not np.all(sB == b_cochain):
        witness = next(i for i in range(a.dim) if not np.all(sB[i] == b_cochain[i]))
        raise GaugeError("B is not involutive: B(a*) != B(a)*", {"indices": (witness,)})
    K = identity(m.dim) + B.dot(op.matrix)
    Kinv = inverse(K)
    if Kinv is None:
        raise GaugeError("id + B o T is singular", {"kernel": kernel_basis(K)})
    return RBOperator(a, m, op.matrix.dot(Kinv))
