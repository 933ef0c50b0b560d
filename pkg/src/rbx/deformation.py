"""Truncated one-parameter deformations of an involutive relative Rota-Baxter operator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import InvolutiveAlgebra, InvolutiveBimodule, ShapeError, ValidationReport
from .cochains import insert
from .hochschild import variant_basis
from .linalg import as_matrix, as_vector, identity, matrix_from_columns, solve, zeros
from .rota_baxter import (
    BracketMismatchError,
    NotRotaBaxterError,
    RBOperator,
    _act_after,
    _act_before,
    _product,
    check_relative_rb,
    cochain_matrix,
    derived_bracket_explicit,
    operator_cochain,
    rb_cohomology,
    rb_differential,
)

HALF = Fraction(1, 2)


class DeformationError(ValueError):
    pass


class EquivalenceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DeformationSeries:
    algebra: InvolutiveAlgebra
    bimodule: InvolutiveBimodule
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise DeformationError("a deformation series needs at least the base operator")
        shape = (self.algebra.dim, self.bimodule.dim)
        terms = []
        for k, t in enumerate(self.terms):
            t = as_matrix(t)
            if t.shape != shape:
                raise ShapeError(f"term T_{k} has shape {t.shape}, expected {shape}")
            terms.append(t)
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def base(self) -> RBOperator:
        return RBOperator(self.algebra, self.bimodule, self.terms[0])

    def cochain(self, k: int) -> np.ndarray:
        if k > self.order:
            return zeros((self.bimodule.dim, self.algebra.dim))
        return operator_cochain(self.terms[k])

    def extended(self, term) -> "DeformationSeries":
        return DeformationSeries(self.algebra, self.bimodule, self.terms + (as_matrix(term),))


def _pairs(k: int, lo: int = 0):
    return [(i, k - i) for i in range(lo, k - lo + 1)]


def equation_residual(s: DeformationSeries, k: int) -> np.ndarray:
    """sum_{i+j=k} [T_i(u)T_j(v) - T_i(uT_j(v) + T_j(u)v)] as an arity-2 cochain."""
    a, m = s.algebra, s.bimodule
    out = zeros((m.dim, m.dim, a.dim))
    for i, j in _pairs(k):
        Ti, Tj = s.cochain(i), s.cochain(j)
        out = out + _product(Ti, Tj, a.mul)
        out = out - insert(Ti, 1, _act_before(m.right, Tj) + _act_after(Tj, m.left))
    return out


def bracket_sum(s: DeformationSeries, k: int, lo: int = 1) -> np.ndarray:
    """sum_{i+j=k, i,j >= lo} [[T_i, T_j]]."""
    a, m = s.algebra, s.bimodule
    out = zeros((m.dim, m.dim, a.dim))
    for i, j in _pairs(k, lo):
        out = out + derived_bracket_explicit(a.mul, m.left, m.right, s.cochain(i), s.cochain(j))
    return out


@dataclass
class DeformationReport(ValidationReport):
    orders: list[bool] = field(default_factory=list)

    def valid_through(self) -> int:
        """Largest k such that the equations of orders 0..k all hold (-1 if none)."""
        k = -1
        for good in self.orders:
            if not good:
                break
            k += 1
        return k

    def as_dict(self) -> dict:
        out = super().as_dict()
        out["orders"] = self.orders
        return out


def check_deformation(s: DeformationSeries) -> DeformationReport:
    """Check T_k(u*) = T_k(u)* and the order-k equation for k = 0..N.

    The bilinear form of each equation is compared with its bracket form
    ``-1/2 sum_{i+j=k} [[T_i, T_j]]``; a disagreement raises BracketMismatchError.
    """
    base = check_relative_rb(s.algebra, s.bimodule, s.terms[0])
    if not base.ok:
        raise NotRotaBaxterError(base)
    a, m = s.algebra, s.bimodule
    report = DeformationReport()
    for k in range(s.order + 1):
        before = len(report.violations)
        Tk = s.terms[k]
        for p in range(m.dim):
            u = m.basis(p)
            report.check(f"order {k}: T_k(u*) = T_k(u)*", (k, p), Tk.dot(m.star(u)), a.star(Tk.dot(u)))
        residual = equation_residual(s, k)
        if not np.all(residual == -HALF * bracket_sum(s, k, lo=0)):
            raise BracketMismatchError(f"order-{k} equation: bilinear and bracket forms disagree")
        for p, q in itertools.product(range(m.dim), repeat=2):
            u, v = m.basis(p), m.basis(q)
            lhs = zeros(a.dim)
            rhs = zeros(a.dim)
            for i, j in _pairs(k):
                Ti, Tj = s.terms[i], s.terms[j]
                lhs = lhs + a.product(Ti.dot(u), Tj.dot(v))
                rhs = rhs + Ti.dot(m.act_right(u, Tj.dot(v)) + m.act_left(Tj.dot(u), v))
            report.check(f"order {k} deformation equation", (k, p, q), lhs, rhs)
        report.orders.append(len(report.violations) == before)
    return report


def _require_through(s: DeformationSeries, k: int) -> None:
    report = check_deformation(s)
    if report.valid_through() < k:
        v = next(v for v in report.violations)
        raise DeformationError(f"deformation equations fail: {v.axiom} at {v.indices}")


@dataclass
class ClassResult:
    cochain: np.ndarray
    is_cocycle: bool
    coordinates: list

    @property
    def trivial(self) -> bool:
        return all(c == 0 for c in self.coordinates)


def _class_in(op: RBOperator, degree: int, cocycle: np.ndarray) -> list:
    report = rb_cohomology(op, degree, "involutive")
    return report[degree].class_coordinates(cocycle)


def infinitesimal(s: DeformationSeries) -> ClassResult:
    """T_1 with the check d_T T_1 = 0 and its class in iH^1_T."""
    _require_through(s, min(1, s.order))
    op = s.base
    t1 = s.cochain(1)
    is_cocycle = bool(np.all(rb_differential(op, t1) == 0))
    if not is_cocycle:
        raise DeformationError("the linear term is not a d_T-cocycle")
    return ClassResult(t1, is_cocycle, _class_in(op, 1, t1))


def obstruction(s: DeformationSeries) -> ClassResult:
    """Ob = -1/2 sum_{i+j=N+1, i,j>=1} [[T_i, T_j]] and its class in iH^2_T."""
    _require_through(s, s.order)
    op = s.base
    ob = -HALF * bracket_sum(s, s.order + 1, lo=1)
    is_cocycle = bool(np.all(rb_differential(op, ob) == 0))
    if not is_cocycle:
        raise DeformationError("obstruction is not a 2-cocycle; input series is inconsistent")
    return ClassResult(ob, is_cocycle, _class_in(op, 2, ob))


@dataclass
class Extension:
    term: np.ndarray | None
    obstruction: ClassResult

    @property
    def extended(self) -> bool:
        return self.term is not None


def try_extend(s: DeformationSeries) -> Extension:
    """Solve d_T(T_{N+1}) = Ob inside iHom(M, A).

    Returns the new term (any solution; solutions differ by 1-cocycles) and
    re-validates the extended series, or ``term=None`` with the obstruction
    class as certificate.
    """
    ob = obstruction(s)
    op = s.base
    a, m = s.algebra, s.bimodule
    basis = variant_basis("involutive", 1, m.inv, a.inv)
    term = None
    if basis:
        dmat = matrix_from_columns([rb_differential(op, b).reshape(-1) for b in basis], m.dim**2 * a.dim)
        y = solve(dmat, ob.cochain.reshape(-1))
        if y is not None:
            x = zeros((m.dim, a.dim))
            for c, b in zip(y, basis):
                if c != 0:
                    x = x + c * b
            term = cochain_matrix(x)
    elif all(v == 0 for v in ob.cochain.reshape(-1)):
        term = zeros((a.dim, m.dim))
    if term is not None:
        report = check_deformation(s.extended(term))
        if report.valid_through() < s.order + 1:
            raise DeformationError("extension failed re-validation")
    return Extension(term, ob)


@dataclass(frozen=True, eq=False)
class EquivalenceData:
    """Data of a candidate equivalence: phi_t = id + t(l_a - r_a) + sum t^j phi_j, same for psi_t.

    ``phi`` and ``psi`` hold the terms of order 2, 3, ...
    """

    a: np.ndarray
    phi: tuple = ()
    psi: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", as_vector(self.a))
        object.__setattr__(self, "phi", tuple(as_matrix(x) for x in self.phi))
        object.__setattr__(self, "psi", tuple(as_matrix(x) for x in self.psi))

    @property
    def order(self) -> int:
        return 1 + max(len(self.phi), len(self.psi))


def _phi_terms(alg: InvolutiveAlgebra, e: EquivalenceData, k: int) -> list[np.ndarray]:
    ad = np.einsum("i,ijk->kj", e.a, alg.mul) - np.einsum("j,ijk->ki", e.a, alg.mul)
    terms = [identity(alg.dim), ad] + list(e.phi)
    return terms + [zeros((alg.dim, alg.dim))] * (k + 1 - len(terms))


def _psi_terms(alg: InvolutiveAlgebra, mod: InvolutiveBimodule, e: EquivalenceData, k: int) -> list[np.ndarray]:
    la_ra = np.einsum("i,ipq->qp", e.a, mod.left) - np.einsum("i,piq->qp", e.a, mod.right)
    terms = [identity(mod.dim), la_ra] + list(e.psi)
    return terms + [zeros((mod.dim, mod.dim))] * (k + 1 - len(terms))


@dataclass
class EquivalenceReport(ValidationReport):
    order: int = 0
    coboundary_identity: bool | None = None

    def as_dict(self) -> dict:
        out = super().as_dict()
        out["order"] = self.order
        out["coboundary_identity"] = self.coboundary_identity
        return out


def check_equivalence(s: DeformationSeries, s2: DeformationSeries, e: EquivalenceData) -> EquivalenceReport:
    """Check that (phi_t, psi_t) is a morphism from s to s2 modulo t^(K+1).

    K is the smallest of the two series orders and the equivalence order.
    At order 1 the identity T_1 - T'_1 = d_T(a) is also reported.
    """
    a_alg, m = s.algebra, s.bimodule
    if e.a.shape != (a_alg.dim,):
        raise ShapeError(f"element a has shape {e.a.shape}, expected {(a_alg.dim,)}")
    if not np.all(a_alg.star(e.a) == -e.a):
        raise EquivalenceError("the element a must satisfy a* = -a")
    for j, ph in enumerate(e.phi, start=2):
        if not np.all(ph.dot(a_alg.inv) == a_alg.inv.dot(ph)):
            raise EquivalenceError(f"phi_{j} does not commute with the involution")
    for j, ps in enumerate(e.psi, start=2):
        if not np.all(ps.dot(m.inv) == m.inv.dot(ps)):
            raise EquivalenceError(f"psi_{j} does not commute with the involution")
    for series in (s, s2):
        _require_through(series, series.order)
    if not np.all(s.terms[0] == s2.terms[0]):
        raise EquivalenceError("the two series deform different operators")
    K = min(s.order, s2.order, e.order)
    phi = _phi_terms(a_alg, e, K)
    psi = _psi_terms(a_alg, m, e, K)
    T = list(s.terms) + [zeros(s.terms[0].shape)] * (K + 1 - len(s.terms))
    T2 = list(s2.terms) + [zeros(s.terms[0].shape)] * (K + 1 - len(s2.terms))
    report = EquivalenceReport(order=K)
    ea = [a_alg.basis(i) for i in range(a_alg.dim)]
    em = [m.basis(p) for p in range(m.dim)]
    for k in range(K + 1):
        pairs = _pairs(k)
        for i, j in itertools.product(range(a_alg.dim), repeat=2):
            lhs = sum((a_alg.product(phi[x].dot(ea[i]), phi[y].dot(ea[j])) for x, y in pairs), zeros(a_alg.dim))
            report.check(f"order {k}: phi(a)phi(b) = phi(ab)", (k, i, j), lhs, phi[k].dot(a_alg.product(ea[i], ea[j])))
        lhs = sum((T2[x].dot(psi[y]) for x, y in pairs), zeros(T[0].shape))
        rhs = sum((phi[x].dot(T[y]) for x, y in pairs), zeros(T[0].shape))
        for p in range(m.dim):
            report.check(f"order {k}: T' psi = phi T", (k, p), lhs[:, p], rhs[:, p])
        for i, p in itertools.product(range(a_alg.dim), range(m.dim)):
            x_, u = ea[i], em[p]
            left = sum((m.act_left(phi[x].dot(x_), psi[y].dot(u)) for x, y in pairs), zeros(m.dim))
            report.check(f"order {k}: psi(au) = phi(a)psi(u)", (k, i, p), psi[k].dot(m.act_left(x_, u)), left)
            right = sum((m.act_right(psi[x].dot(u), phi[y].dot(x_)) for x, y in pairs), zeros(m.dim))
            report.check(f"order {k}: psi(ua) = psi(u)phi(a)", (k, p, i), psi[k].dot(m.act_right(u, x_)), right)
    if K >= 1:
        d_a = cochain_matrix(rb_differential(s.base, e.a))
        report.coboundary_identity = bool(np.all(T[1] - T2[1] == d_a))
    return report


def shift_by_coboundary(s: DeformationSeries, a) -> tuple[DeformationSeries, EquivalenceData]:
    """The order-1 series [T, T_1 - d_T(a)] together with the equivalence built from ``a``."""
    if s.order != 1:
        raise DeformationError("coboundary shifts are constructed for order-1 series")
    a = as_vector(a)
    d_a = cochain_matrix(rb_differential(s.base, a))
    s2 = DeformationSeries(s.algebra, s.bimodule, (s.terms[0], s.terms[1] - d_a))
    return s2, EquivalenceData(a)
