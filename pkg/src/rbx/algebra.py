"""Involutive associative algebras and involutive bimodules given by structure constants.

Conventions used throughout the package:

* ``mul[i][j][k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
* ``left[i][p][q]`` is the coefficient of ``f_q`` in ``e_i . f_p``.
* ``right[p][i][q]`` is the coefficient of ``f_q`` in ``f_p . e_i``.
* Matrices act on column coordinate vectors: ``inv[k][i]`` is the coefficient
  of ``e_k`` in ``e_i^*``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import identity, rational, zeros


class ShapeError(ValueError):
    """Tensor or matrix dimensions are inconsistent with the declared dims."""


def _tensor(data, shape, what) -> np.ndarray:
    arr = np.array(data, dtype=object)
    if arr.shape != tuple(shape):
        raise ShapeError(f"{what}: expected shape {tuple(shape)}, got {arr.shape}")
    flat = arr.reshape(-1)
    for k, v in enumerate(flat):
        flat[k] = rational(v)
    return flat.reshape(arr.shape)


@dataclass(frozen=True, eq=False)
class InvolutiveAlgebra:
    dim: int
    mul: np.ndarray
    inv: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "mul", _tensor(self.mul, (self.dim,) * 3, "mul"))
        object.__setattr__(self, "inv", _tensor(self.inv, (self.dim,) * 2, "involution"))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"e{i}" for i in range(self.dim)))
        elif len(self.names) != self.dim:
            raise ShapeError(f"{len(self.names)} basis names for dimension {self.dim}")

    def product(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mul)

    def star(self, x) -> np.ndarray:
        return self.inv.dot(x)

    def basis(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = rational(1)
        return v


@dataclass(frozen=True, eq=False)
class InvolutiveBimodule:
    dim: int
    left: np.ndarray
    right: np.ndarray
    inv: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        d = self.dim
        left = np.asarray(self.left, dtype=object)
        if left.ndim != 3:
            raise ShapeError(f"left action must be a 3-index tensor, got shape {left.shape}")
        a = left.shape[0]
        object.__setattr__(self, "left", _tensor(self.left, (a, d, d), "left action"))
        object.__setattr__(self, "right", _tensor(self.right, (d, a, d), "right action"))
        object.__setattr__(self, "inv", _tensor(self.inv, (d, d), "module involution"))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"f{p}" for p in range(d)))

    @property
    def algebra_dim(self) -> int:
        return self.left.shape[0]

    def act_left(self, a, u) -> np.ndarray:
        return np.einsum("i,p,ipq->q", a, u, self.left)

    def act_right(self, u, a) -> np.ndarray:
        return np.einsum("p,i,piq->q", u, a, self.right)

    def star(self, u) -> np.ndarray:
        return self.inv.dot(u)

    def basis(self, p: int) -> np.ndarray:
        v = zeros(self.dim)
        v[p] = rational(1)
        return v


def regular_bimodule(a: InvolutiveAlgebra) -> InvolutiveBimodule:
    """A as a bimodule over itself, with the algebra's involution."""
    return InvolutiveBimodule(a.dim, a.mul.copy(), a.mul.copy(), a.inv.copy(), a.names)


def zero_bimodule(a: InvolutiveAlgebra, dim: int, inv=None) -> InvolutiveBimodule:
    inv = identity(dim) if inv is None else inv
    return InvolutiveBimodule(dim, zeros((a.dim, dim, dim)), zeros((dim, a.dim, dim)), inv)


@dataclass(frozen=True)
class Violation:
    axiom: str
    indices: tuple[int, ...]
    lhs: tuple
    rhs: tuple

    def as_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "indices": list(self.indices),
            "lhs": [str(x) for x in self.lhs],
            "rhs": [str(x) for x in self.rhs],
        }


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def check(self, axiom: str, indices, lhs, rhs) -> None:
        lhs = np.asarray(lhs, dtype=object).reshape(-1)
        rhs = np.asarray(rhs, dtype=object).reshape(-1)
        if any(x != y for x, y in zip(lhs, rhs)):
            self.violations.append(Violation(axiom, tuple(indices), tuple(lhs), tuple(rhs)))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.as_dict() for v in self.violations]}


def validate_algebra(a: InvolutiveAlgebra) -> ValidationReport:
    report = ValidationReport()
    n = a.dim
    e = [a.basis(i) for i in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        report.check(
            "associativity",
            (i, j, k),
            a.product(a.product(e[i], e[j]), e[k]),
            a.product(e[i], a.product(e[j], e[k])),
        )
    sq = a.inv.dot(a.inv)
    for i in range(n):
        report.check("involution squares to identity", (i,), sq[:, i], e[i])
    for i, j in itertools.product(range(n), repeat=2):
        report.check(
            "(ab)* = b* a*",
            (i, j),
            a.star(a.product(e[i], e[j])),
            a.product(a.star(e[j]), a.star(e[i])),
        )
    return report


def validate_bimodule(a: InvolutiveAlgebra, m: InvolutiveBimodule) -> ValidationReport:
    if m.algebra_dim != a.dim:
        raise ShapeError(f"bimodule is over a {m.algebra_dim}-dim algebra, algebra has dim {a.dim}")
    report = ValidationReport()
    ea = [a.basis(i) for i in range(a.dim)]
    em = [m.basis(p) for p in range(m.dim)]
    for i, j, p in itertools.product(range(a.dim), range(a.dim), range(m.dim)):
        x, y, u = ea[i], ea[j], em[p]
        report.check(
            "(ab)u = a(bu)", (i, j, p),
            m.act_left(a.product(x, y), u), m.act_left(x, m.act_left(y, u)),
        )
        report.check(
            "u(ab) = (ua)b", (p, i, j),
            m.act_right(u, a.product(x, y)), m.act_right(m.act_right(u, x), y),
        )
        report.check(
            "(au)b = a(ub)", (i, p, j),
            m.act_right(m.act_left(x, u), y), m.act_left(x, m.act_right(u, y)),
        )
    sq = m.inv.dot(m.inv)
    for p in range(m.dim):
        report.check("module involution squares to identity", (p,), sq[:, p], em[p])
    for i, p in itertools.product(range(a.dim), range(m.dim)):
        x, u = ea[i], em[p]
        report.check("(au)* = u* a*", (i, p), m.star(m.act_left(x, u)), m.act_right(m.star(u), a.star(x)))
        report.check("(ua)* = a* u*", (p, i), m.star(m.act_right(u, x)), m.act_left(a.star(x), m.star(u)))
    return report


def semidirect_product(a: InvolutiveAlgebra, m: InvolutiveBimodule) -> InvolutiveAlgebra:
    """The algebra A + M with (a, u)(b, v) = (ab, av + ub) and (a, u)* = (a*, u*).

    Coordinates of A come first, then those of M.
    """
    if m.algebra_dim != a.dim:
        raise ShapeError("bimodule and algebra dimensions disagree")
    na, nm = a.dim, m.dim
    n = na + nm
    mul = zeros((n, n, n))
    mul[:na, :na, :na] = a.mul
    mul[:na, na:, na:] = m.left
    mul[na:, :na, na:] = m.right
    inv = zeros((n, n))
    inv[:na, :na] = a.inv
    inv[na:, na:] = m.inv
    return InvolutiveAlgebra(n, mul, inv, tuple(a.names) + tuple(m.names))
