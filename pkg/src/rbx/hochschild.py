"""Hochschild cochains of an involutive algebra, the Gerstenhaber bracket and the
involutive/skew splitting of the complex."""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from .algebra import InvolutiveAlgebra, InvolutiveBimodule, ShapeError
from .cochains import arity, insert, s_action, s_matrix, sign, standard_basis
from .complexes import CohomologyReport, compute_cohomology
from .linalg import identity, kernel_basis, zeros

VARIANTS = ("ordinary", "involutive", "skew")
HALF = Fraction(1, 2)


def default_max_degree() -> int:
    return int(os.environ.get("RBX_MAX_DEGREE", "3"))


def left_first(left: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``(x_1, ..., x_{n+1}) -> x_1 . f(x_2, ..., x_{n+1})`` for a left action tensor."""
    n = arity(f)
    t = np.tensordot(left, f, axes=([1], [n]))  # (x1, out, x2..)
    return np.moveaxis(t, 1, -1)


def right_last(f: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``(x_1, ..., x_{n+1}) -> f(x_1, ..., x_n) . x_{n+1}`` for a right action tensor."""
    n = arity(f)
    return np.tensordot(f, right, axes=([n], [0]))


def hochschild_coboundary(mul: np.ndarray, left: np.ndarray, right: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Hochschild differential of ``f`` for an algebra ``mul`` acting on the target.

    ``left[i][p][q]`` and ``right[p][i][q]`` are the actions of the algebra on
    the target space; ``mul`` is the algebra whose tensor powers are the inputs.
    """
    n = arity(f)
    out = left_first(left, f)
    for i in range(1, n + 1):
        out = out + sign(i) * insert(f, i, mul)
    out = out + sign(n + 1) * right_last(f, right)
    return out


def hochschild_differential(a: InvolutiveAlgebra, m: InvolutiveBimodule, f) -> np.ndarray:
    f = np.asarray(f, dtype=object)
    n = arity(f)
    expected = (a.dim,) * n + (m.dim,)
    if f.shape != expected:
        raise ShapeError(f"cochain shape {f.shape}, expected {expected}")
    return hochschild_coboundary(a.mul, m.left, m.right, f)


def gerstenhaber_bracket(f, g) -> np.ndarray:
    """``[f, g] = sum_i (-1)^((i-1)(n-1)) f o_i g - (-1)^((m-1)(n-1)) sum_i (-1)^((i-1)(m-1)) g o_i f``.

    Arity-0 arguments (vectors) are allowed; inserting them evaluates a slot.
    """
    f = np.asarray(f, dtype=object)
    g = np.asarray(g, dtype=object)
    m, n = arity(f), arity(g)
    if f.shape[-1] != g.shape[-1] or (m and f.shape[0] != f.shape[-1]) or (n and g.shape[0] != g.shape[-1]):
        raise ShapeError("Gerstenhaber bracket needs cochains from a space to itself")
    shape = (f.shape[-1],) * (m + n - 1) + (f.shape[-1],) if m + n >= 1 else None
    if shape is None:
        raise ShapeError("bracket of two arity-0 cochains has arity -1")
    out = zeros(shape)
    for i in range(1, m + 1):
        out = out + sign((i - 1) * (n - 1)) * insert(f, i, g)
    tail = zeros(shape)
    for i in range(1, n + 1):
        tail = tail + sign((i - 1) * (m - 1)) * insert(g, i, f)
    return out - sign((m - 1) * (n - 1)) * tail


def split_cochain(f, src_inv, tgt_inv) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(f, dtype=object)
    sf = s_action(f, src_inv, tgt_inv)
    return (f + sf) * HALF, (f - sf) * HALF


def is_involutive(f, src_inv, tgt_inv) -> bool:
    f = np.asarray(f, dtype=object)
    return bool(np.all(s_action(f, src_inv, tgt_inv) == f))


def eigen_basis(n: int, src_inv, tgt_inv, eigenvalue: int = 1) -> list[np.ndarray]:
    """Basis of the ``eigenvalue`` eigenspace of S_n on Hom(V^n, W)."""
    d, e = src_inv.shape[0], tgt_inv.shape[0]
    smat = s_matrix(n, src_inv, tgt_inv)
    shape = (d,) * n + (e,)
    vecs = kernel_basis(smat - eigenvalue * identity(smat.shape[0]))
    return [v.reshape(shape) for v in vecs]


def involutive_basis(n: int, src_inv, tgt_inv) -> list[np.ndarray]:
    return eigen_basis(n, src_inv, tgt_inv, 1)


def variant_basis(variant: str, n: int, src_inv, tgt_inv) -> list[np.ndarray]:
    if variant == "ordinary":
        return standard_basis(n, src_inv.shape[0], tgt_inv.shape[0])
    if variant == "involutive":
        return eigen_basis(n, src_inv, tgt_inv, 1)
    if variant == "skew":
        return eigen_basis(n, src_inv, tgt_inv, -1)
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def variant_member(variant: str, src_inv, tgt_inv):
    if variant == "ordinary":
        return None
    target = 1 if variant == "involutive" else -1

    def member(n, f):
        return bool(np.all(s_action(f, src_inv, tgt_inv) == target * f))

    return member


def hochschild_cohomology(
    a: InvolutiveAlgebra,
    m: InvolutiveBimodule,
    max_degree: int | None = None,
    variant: str = "ordinary",
) -> CohomologyReport:
    max_degree = default_max_degree() if max_degree is None else max_degree
    return compute_cohomology(
        "hochschild",
        variant,
        spaces=lambda n: variant_basis(variant, n, a.inv, m.inv),
        sizes=lambda n: a.dim**n * m.dim,
        differential=lambda f: hochschild_differential(a, m, f),
        degrees=range(0, max_degree + 1),
        member=variant_member(variant, a.inv, m.inv),
    )
