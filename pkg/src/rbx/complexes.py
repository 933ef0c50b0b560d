"""Cohomology of finite cochain complexes given by a basis per degree and a differential."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import EchelonSpace, kernel_basis, matrix_from_columns, zeros


class ComplexError(RuntimeError):
    """The differential leaves the chosen subspace (inconsistent involution data)."""


@dataclass
class DegreeReport:
    degree: int
    cochains: int
    cocycles: int
    coboundaries: int
    representatives: list[np.ndarray] = field(default_factory=list, repr=False)
    _space: EchelonSpace | None = field(default=None, repr=False)
    _rep_indices: list[int] = field(default_factory=list, repr=False)

    @property
    def cohomology(self) -> int:
        return self.cocycles - self.coboundaries

    def class_coordinates(self, cocycle: np.ndarray) -> list:
        """Coordinates of the class of ``cocycle`` against ``representatives``.

        Raises ValueError if ``cocycle`` is not in the cocycle space spanned by
        the coboundaries and representatives.
        """
        coords = self._space.coordinates(np.asarray(cocycle, dtype=object).reshape(-1))
        if coords is None:
            raise ValueError(f"not a cocycle in degree {self.degree}")
        return [coords.get(k, 0) for k in self._rep_indices]

    def as_dict(self, with_representatives: bool = True) -> dict:
        out = {
            "degree": self.degree,
            "cochains": self.cochains,
            "cocycles": self.cocycles,
            "coboundaries": self.coboundaries,
            "cohomology": self.cohomology,
        }
        if with_representatives:
            out["representatives"] = [
                [str(x) for x in r.reshape(-1)] for r in self.representatives
            ]
        return out


@dataclass
class CohomologyReport:
    complex: str
    variant: str
    degrees: list[DegreeReport]
    notes: dict = field(default_factory=dict)

    def __getitem__(self, n: int) -> DegreeReport:
        for d in self.degrees:
            if d.degree == n:
                return d
        raise KeyError(n)

    def dims(self) -> dict[int, int]:
        return {d.degree: d.cohomology for d in self.degrees}

    def as_dict(self, with_representatives: bool = True) -> dict:
        return {
            "complex": self.complex,
            "variant": self.variant,
            "degrees": [d.as_dict(with_representatives) for d in self.degrees],
            **({"notes": self.notes} if self.notes else {}),
        }


def combine(basis: list[np.ndarray], coeffs) -> np.ndarray:
    out = zeros(basis[0].shape)
    for c, b in zip(coeffs, basis):
        if c != 0:
            out = out + c * b
    return out


def differential_matrix(basis: list[np.ndarray], differential: Callable, target_size: int) -> np.ndarray:
    cols = [differential(b).reshape(-1) for b in basis]
    return matrix_from_columns(cols, target_size)


def compute_cohomology(
    name: str,
    variant: str,
    spaces: Callable[[int], list[np.ndarray]],
    sizes: Callable[[int], int],
    differential: Callable[[np.ndarray], np.ndarray],
    degrees: range,
    member: Callable[[int, np.ndarray], bool] | None = None,
    start: int = 0,
) -> CohomologyReport:
    """Exact cohomology dimensions and representatives.

    Args:
        spaces: degree -> basis (list of cochain tensors) of the cochain space.
        sizes: degree -> dimension of the ambient full cochain space.
        differential: cochain -> cochain of the next degree.
        degrees: degrees to report.
        member: optional check that an image cochain stays in the subspace.
        start: lowest degree of the complex; lower degrees are zero.
    """
    bases: dict[int, list[np.ndarray]] = {}
    dmats: dict[int, np.ndarray] = {}

    def basis(n):
        if n not in bases:
            bases[n] = spaces(n) if n >= start else []
        return bases[n]

    def dmat(n):
        if n not in dmats:
            b = basis(n)
            images = [differential(x) for x in b]
            if member is not None:
                for x, y in zip(b, images):
                    if not member(n + 1, y):
                        raise ComplexError(f"differential leaves the {variant} subspace in degree {n + 1}")
            dmats[n] = matrix_from_columns([y.reshape(-1) for y in images], sizes(n + 1))
        return dmats[n]

    reports = []
    for n in degrees:
        b = basis(n)
        dn = dmat(n) if b else zeros((sizes(n + 1), 0))
        cocycle_coeffs = kernel_basis(dn) if b else []
        cocycles = [combine(b, c) for c in cocycle_coeffs]
        if basis(n - 1):
            prev = dmat(n - 1)
            boundary_cols = [prev[:, j] for j in range(prev.shape[1])]
        else:
            boundary_cols = []
        space = EchelonSpace(sizes(n))
        for col in boundary_cols:
            space.add(col)
        n_bound = len(space)
        reps, rep_indices = [], []
        for z in cocycles:
            idx = space.count
            if space.add(z.reshape(-1)):
                reps.append(z)
                rep_indices.append(idx)
        reports.append(
            DegreeReport(
                degree=n,
                cochains=len(b),
                cocycles=len(cocycles),
                coboundaries=n_bound,
                representatives=reps,
                _space=space,
                _rep_indices=rep_indices,
            )
        )
    return CohomologyReport(name, variant, reports)
