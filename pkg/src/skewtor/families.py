"""Manifold descriptions and the built-in Lie group families."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping

import numpy as np

from .lie import FrameError, LieFrame, antisymmetry_violations, jacobi_residual
from .scalar import ZERO, Scalar
from .structures import (
    ContactBStructure,
    HyperStructure,
    NordenStructure,
    StructureError,
    StructurePack,
    structures_equal,
    validate_structure,
)
from .tensor import MetricData, Tensor


class SpecValidationError(ValueError):
    """A manifold description violates one of its axioms."""


@dataclass(frozen=True, eq=False)
class ManifoldSpec:
    name: str
    params: tuple
    c: Tensor                 # structure constants [k, i, j]
    metric: MetricData
    structure: StructurePack
    note: str = ""
    bindings: Mapping = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.c.dim

    @property
    def free_params(self) -> tuple:
        return tuple(p for p in self.params if p not in self.bindings)

    def frame(self) -> LieFrame:
        return LieFrame(self.c.subs(self.bindings), self.metric, self.free_params)

    def bind(self, point: Mapping) -> "ManifoldSpec":
        unknown = [p for p in point if p not in self.params]
        if unknown:
            raise SpecValidationError(f"unknown parameter {unknown[0]!r}")
        merged = dict(self.bindings)
        merged.update({k: Fraction(v) for k, v in point.items()})
        return replace(self, bindings=merged)

    def validation_issues(self) -> list:
        """(axiom, 1-based witness) pairs for every violated axiom; empty when valid."""
        issues = [("antisymmetry of [.,.]", w) for w in antisymmetry_violations(self.c)]
        if issues:
            return issues
        f = self.frame()
        hit = jacobi_residual(f).first_nonzero()
        if hit is not None:
            issues.append(("Jacobi identity", tuple(i + 1 for i in hit[0])))
        try:
            report = validate_structure(f, self.structure)
        except StructureError as exc:
            return issues + [(str(exc), None)]
        issues += [(c.name, c.witness) for c in report.failures()]
        return issues

    def validate(self) -> "ManifoldSpec":
        issues = self.validation_issues()
        if issues:
            axiom, witness = issues[0]
            at = f" at {witness}" if witness else ""
            raise SpecValidationError(f"{self.name}: {axiom} fails{at}")
        return self

    def same_geometry(self, other: "ManifoldSpec") -> bool:
        """Equal brackets, metric and structure (names and bindings ignored)."""
        return (self.c == other.c and self.metric == other.metric
                and structures_equal(self.structure, other.structure))

    def __eq__(self, other):
        if not isinstance(other, ManifoldSpec):
            return NotImplemented
        return (self.name == other.name and self.params == other.params
                and dict(self.bindings) == dict(other.bindings) and self.same_geometry(other))

    __hash__ = None


def brackets_to_tensor(dim: int, table: Mapping) -> Tensor:
    """``{(i, j): {k: coeff}}`` with 1-based labels -> antisymmetric c[k, i, j]."""
    c = np.empty((dim,) * 3, dtype=object)
    c.fill(ZERO)
    for (i, j), vec in table.items():
        for k, v in vec.items():
            c[k - 1, i - 1, j - 1] = c[k - 1, i - 1, j - 1] + v
            c[k - 1, j - 1, i - 1] = c[k - 1, j - 1, i - 1] - v
    return Tensor(c, 1, 2)


def endomorphism(dim: int, images: Mapping) -> Tensor:
    """``{i: {k: coeff}}`` meaning op(X_i) = sum coeff X_k (1-based)."""
    m = np.zeros((dim, dim), dtype=int).astype(object)
    for i, vec in images.items():
        for k, v in vec.items():
            m[k - 1, i - 1] = v
    return Tensor(m, 1, 1)


def _params(*names):
    return tuple(Scalar.var(n) for n in names)


def build_example_4d() -> ManifoldSpec:
    """Quasi-Kähler Norden Lie group of dimension 4 with parameters l1..l4."""
    l1, l2, l3, l4 = _params("l1", "l2", "l3", "l4")
    c = brackets_to_tensor(4, {
        (1, 2): {1: l1, 2: l2},
        (1, 3): {2: l3, 4: -l1},
        (1, 4): {1: -l3, 4: -l2},
        (2, 3): {2: l4, 3: l1},
        (2, 4): {1: -l4, 3: l2},
        (3, 4): {3: l3, 4: l4},
    })
    J = endomorphism(4, {1: {3: 1}, 2: {4: 1}, 3: {1: -1}, 4: {2: -1}})
    return ManifoldSpec("norden4d", ("l1", "l2", "l3", "l4"), c,
                        MetricData.diagonal([1, 1, -1, -1]), NordenStructure(J),
                        "4-dimensional quasi-Kaehler Lie group with Killing associated Norden metric")


def build_example_5d() -> ManifoldSpec:
    """F7 contact B-metric Lie group of dimension 5 with parameters l1..l4, m1, m2."""
    l1, l2, l3, l4, m1, m2 = _params("l1", "l2", "l3", "l4", "m1", "m2")
    v12 = {1: -l1, 2: -l2, 3: l3, 4: l4, 5: 2 * m1}
    v14 = {1: -l3, 2: -l4, 3: -l1, 4: -l2, 5: 2 * m2}
    c = brackets_to_tensor(5, {
        (1, 2): v12,
        (3, 4): {k: -v for k, v in v12.items()},
        (1, 4): v14,
        (2, 3): {k: -v for k, v in v14.items()},
    })
    phi = endomorphism(5, {1: {3: 1}, 2: {4: 1}, 3: {1: -1}, 4: {2: -1}})
    xi = Tensor([0, 0, 0, 0, 1], 1, 0)
    eta = Tensor([0, 0, 0, 0, 1], 0, 1)
    return ManifoldSpec("contact5d", ("l1", "l2", "l3", "l4", "m1", "m2"), c,
                        MetricData.diagonal([1, 1, -1, -1, 1]), ContactBStructure(phi, xi, eta),
                        "5-dimensional F7 Lie group with B-metric")


def standard_hyper(dim: int) -> HyperStructure:
    """Standard (J1, J2, J3) acting on consecutive quadruples of basis vectors."""
    if dim % 4:
        raise StructureError("hypercomplex structures need dimension divisible by 4")
    maps = {1: {}, 2: {}, 3: {}}
    for k in range(0, dim, 4):
        a, b, c, d = k + 1, k + 2, k + 3, k + 4
        maps[1].update({a: {b: 1}, b: {a: -1}, c: {d: -1}, d: {c: 1}})
        maps[2].update({a: {c: 1}, b: {d: 1}, c: {a: -1}, d: {b: -1}})
        maps[3].update({a: {d: -1}, b: {c: 1}, c: {b: -1}, d: {a: 1}})
    return HyperStructure(*(endomorphism(dim, maps[i]) for i in (1, 2, 3)))


def build_flat_hyper(k: int = 2) -> ManifoldSpec:
    """Abelian 4k-dimensional (H,G)-manifold with the standard structure."""
    if k < 2:
        raise ValueError("the flat hyper example needs k >= 2 (dimension at least 8)")
    dim = 4 * k
    spec = ManifoldSpec(f"flat{dim}d", (), Tensor.zeros(dim, 1, 2),
                        MetricData.diagonal([1, 1, -1, -1] * k), standard_hyper(dim),
                        f"abelian {dim}-dimensional almost (H,G)-manifold")
    return spec.validate()


BUILTIN = {
    "norden4d": build_example_4d,
    "contact5d": build_example_5d,
    "flat8d": lambda: build_flat_hyper(2),
}
