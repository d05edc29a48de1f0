"""Norden, B-metric contact and (H,G) hypercomplex structures on a frame.

Each structure is a small dataclass of constant tensors.  The checks here
return residual tensors; a condition holds identically in the parameters
exactly when all its residuals are the zero tensor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .lie import Connection, LieFrame, covariant_derivative, exterior_derivative, square_norm
from .scalar import Scalar
from .tensor import Tensor, apply_endomorphism, cyclic_sum, einsum, reorder


class StructureError(ValueError):
    """Structure does not fit the frame, or a precondition on its class fails."""


@dataclass(frozen=True, eq=False)
class NordenStructure:
    J: Tensor
    kind: str = field(default="norden", init=False)

    def operators(self) -> dict:
        return {"J": self.J}


@dataclass(frozen=True, eq=False)
class ContactBStructure:
    phi: Tensor
    xi: Tensor
    eta: Tensor
    kind: str = field(default="contact", init=False)

    def operators(self) -> dict:
        return {"phi": self.phi, "xi": self.xi, "eta": self.eta}


@dataclass(frozen=True, eq=False)
class HyperStructure:
    J1: Tensor
    J2: Tensor
    J3: Tensor
    eps: tuple = (1, -1, -1)
    kind: str = field(default="hyper", init=False)

    @property
    def Js(self) -> tuple:
        return (self.J1, self.J2, self.J3)

    def operators(self) -> dict:
        return {"J1": self.J1, "J2": self.J2, "J3": self.J3}


StructurePack = Union[NordenStructure, ContactBStructure, HyperStructure]


def structures_equal(a: StructurePack, b: StructurePack) -> bool:
    if a.kind != b.kind:
        return False
    if isinstance(a, HyperStructure) and a.eps != b.eps:
        return False
    oa, ob = a.operators(), b.operators()
    return all(oa[k] == ob[k] for k in oa)


# -- small algebra helpers -------------------------------------------------

def compose(a: Tensor, b: Tensor) -> Tensor:
    """Endomorphism a o b."""
    return einsum("ik,kj->ij", a, b, up=1, down=1)


def pullback2(g: Tensor, a: Tensor, b: Tensor | None = None) -> Tensor:
    """(x, y) -> g(a x, b y) for a (0,2) tensor g."""
    b = a if b is None else b
    return einsum("kl,ki,lj->ij", g, a, b, up=0, down=2)


def outer(v: Tensor, w: Tensor, up: int, down: int) -> Tensor:
    return einsum("i,j->ij", v, w, up=up, down=down)


def horizontal(phi: Tensor) -> Tensor:
    """h = -phi^2."""
    return -compose(phi, phi)


def vertical(xi: Tensor, eta: Tensor) -> Tensor:
    """v = eta(.) xi as an endomorphism."""
    return outer(xi, eta, 1, 1)


def associated_forms(f: LieFrame, s: HyperStructure) -> tuple:
    """g_alpha(x, y) = g(J_alpha x, y)."""
    g = f.metric.lower
    return tuple(einsum("ki,kj->ij", J, g, up=0, down=2) for J in s.Js)


# -- validation ------------------------------------------------------------

@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: tuple | None = None  # 1-based index tuple of a failing component


@dataclass
class ValidationReport:
    kind: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]


def _axiom(name: str, residual: Tensor) -> AxiomCheck:
    hit = residual.first_nonzero()
    return AxiomCheck(name, hit is None, None if hit is None else tuple(i + 1 for i in hit[0]))


def _require_dim(f: LieFrame, s: StructurePack):
    n = f.dim
    ok = {"norden": n % 2 == 0, "contact": n % 2 == 1, "hyper": n % 4 == 0}[s.kind]
    if not ok:
        raise StructureError(f"a {s.kind} structure cannot live in dimension {n}")
    for name, t in s.operators().items():
        if t.dim != n:
            raise StructureError(f"{name} has dimension {t.dim}, frame has {n}")


def validate_structure(f: LieFrame, s: StructurePack) -> ValidationReport:
    _require_dim(f, s)
    n = f.dim
    I = Tensor.identity(n)
    g = f.metric.lower
    checks = []
    if isinstance(s, NordenStructure):
        checks.append(_axiom("J^2 = -I", compose(s.J, s.J) + I))
        checks.append(_axiom("g(Jx,Jy) = -g(x,y)", pullback2(g, s.J) + g))
    elif isinstance(s, ContactBStructure):
        phi, xi, eta = s.phi, s.xi, s.eta
        checks.append(_axiom("phi xi = 0", einsum("ij,j->i", phi, xi, up=1, down=0)))
        checks.append(_axiom("phi^2 = -I + eta (x) xi",
                             compose(phi, phi) + I - vertical(xi, eta)))
        checks.append(_axiom("eta o phi = 0", einsum("i,ij->j", eta, phi, up=0, down=1)))
        checks.append(_axiom("eta(xi) = 1",
                             Tensor(einsum("i,i->", eta, xi, up=0, down=0).scalar() - 1, 0, 0, n)))
        checks.append(_axiom("g(phi x, phi y) = -g(x,y) + eta(x) eta(y)",
                             pullback2(g, phi) + g - outer(eta, eta, 0, 2)))
    elif isinstance(s, HyperStructure):
        Js = s.Js
        for a in range(3):
            b, c = (a + 1) % 3, (a + 2) % 3
            checks.append(_axiom(f"J{a + 1}^2 = -I", compose(Js[a], Js[a]) + I))
            checks.append(_axiom(f"J{a + 1} = J{b + 1} o J{c + 1}", Js[a] - compose(Js[b], Js[c])))
            checks.append(_axiom(f"J{a + 1} = -J{c + 1} o J{b + 1}", Js[a] + compose(Js[c], Js[b])))
            checks.append(_axiom(f"g(x,y) = eps{a + 1} g(J{a + 1}x, J{a + 1}y)",
                                 g - pullback2(g, Js[a]) * s.eps[a]))
    else:
        raise StructureError(f"unknown structure {type(s).__name__}")
    return ValidationReport(s.kind, checks)


# -- fundamental tensors -----------------------------------------------------

def nabla_endomorphism(conn: Connection, op: Tensor) -> Tensor:
    """(nabla_{X_i} op)^a_b as a (1,2) tensor ``[a, i, b]``."""
    return covariant_derivative(conn, op)


def fundamental_of(conn: Connection, op: Tensor) -> Tensor:
    """F(x, y, z) = g((nabla_x op) y, z)."""
    return einsum("aib,az->ibz", nabla_endomorphism(conn, op), conn.frame.metric.lower, up=0, down=3)


def fundamental_tensor(f: LieFrame, conn: Connection, s: StructurePack):
    """F for Norden and contact structures; the triple (F1, F2, F3) for hyper ones."""
    if isinstance(s, NordenStructure):
        return fundamental_of(conn, s.J)
    if isinstance(s, ContactBStructure):
        return fundamental_of(conn, s.phi)
    return tuple(fundamental_of(conn, J) for J in s.Js)


def nabla_vector(conn: Connection, v: Tensor) -> Tensor:
    """(nabla_{X_i} v)^m as a (1,1) tensor ``[m, i]``."""
    return covariant_derivative(conn, v)


def nabla_covector(conn: Connection, w: Tensor) -> Tensor:
    """(nabla_x w) y as a (0,2) tensor ``[x, y]``."""
    return covariant_derivative(conn, w)


def killing_residual(f: LieFrame, conn: Connection, v: Tensor) -> Tensor:
    low = einsum("mi,mj->ij", nabla_vector(conn, v), f.metric.lower, up=0, down=2)
    return low + reorder(low, "ba", "ab")


def killing_check(f: LieFrame, conn: Connection, v: Tensor) -> bool:
    return killing_residual(f, conn, v).is_zero()


def class_conditions(f: LieFrame, conn: Connection, s: StructurePack) -> dict:
    """Class name -> list of residual tensors; membership means all vanish."""
    if isinstance(s, NordenStructure):
        F = fundamental_of(conn, s.J)
        return {"W0": [F], "W3": [cyclic_sum(F)]}
    if isinstance(s, ContactBStructure):
        F = fundamental_of(conn, s.phi)
        phi, xi = s.phi, s.xi
        cyc = cyclic_sum(F)
        f_xi_first = einsum("a,ayz->yz", xi, F, up=0, down=2)
        f_xi_last = einsum("xya,a->xy", F, xi, up=0, down=2)
        phix = apply_endomorphism(F, 0, phi)
        f7 = F + apply_endomorphism(phix, 1, phi) + apply_endomorphism(phix, 2, phi)
        return {
            "F0": [F],
            "F3": [cyc, f_xi_first, f_xi_last],
            "F7": [cyc, f7],
            "F3+F7": [cyc],
            "xi-Killing": [killing_residual(f, conn, xi)],
        }
    F1, F2, F3 = (fundamental_of(conn, J) for J in s.Js)
    J1 = s.J1
    sym = F1 + reorder(F1, "yxz")
    sym_j = apply_endomorphism(apply_endomorphism(sym, 0, J1), 1, J1)
    nk = [F1 + reorder(F1, "yxz")]
    w2, w3 = [cyclic_sum(F2)], [cyclic_sum(F3)]
    return {
        "G1(J1)": [sym - sym_j],
        "NK(J1)": nk,
        "W3(J2)": w2,
        "W3(J3)": w3,
        "W133": nk + w2 + w3,
    }


def classify(f: LieFrame, conn: Connection, s: StructurePack) -> dict:
    return {name: all(r.is_zero() for r in res) for name, res in class_conditions(f, conn, s).items()}


def fundamental_identity_residuals(f: LieFrame, conn: Connection, s: StructurePack) -> dict:
    """Residuals of the symmetry identities every fundamental tensor obeys."""
    if isinstance(s, NordenStructure):
        F, J = fundamental_of(conn, s.J), s.J
        Fjj = apply_endomorphism(apply_endomorphism(F, 1, J), 2, J)
        return {
            "F(x,y,z) = F(x,z,y)": F - reorder(F, "xzy"),
            "F(x,y,z) = F(x,Jy,Jz)": F - Fjj,
            "F(x,Jy,z) = -F(x,y,Jz)": apply_endomorphism(F, 1, J) + apply_endomorphism(F, 2, J),
        }
    if isinstance(s, ContactBStructure):
        F, phi, xi, eta = fundamental_of(conn, s.phi), s.phi, s.xi, s.eta
        Fpp = apply_endomorphism(apply_endomorphism(F, 1, phi), 2, phi)
        a = einsum("y,a,xaz->xyz", eta, xi, F, up=0, down=3)
        b = einsum("z,a,xya->xyz", eta, xi, F, up=0, down=3)
        return {
            "F(x,y,z) = F(x,z,y)": F - reorder(F, "xzy"),
            "F(x,y,z) = F(x,phi y,phi z) + eta(y)F(x,xi,z) + eta(z)F(x,y,xi)": F - Fpp - a - b,
        }
    out = {}
    g = f.metric.lower
    for k, (J, gk) in enumerate(zip(s.Js, associated_forms(f, s)), start=1):
        out[f"g{k}(x,y) = -eps{k} g(x, J{k} y)"] = gk + einsum("xa,ay->xy", g, J, up=0, down=2) * s.eps[k - 1]
        out[f"F{k} = nabla g{k}"] = fundamental_of(conn, J) - covariant_derivative(conn, gk)
    return out


# -- Nijenhuis ---------------------------------------------------------------

def nijenhuis(f: LieFrame, conn: Connection, s: StructurePack, mode: str = "complex") -> Tensor:
    """Nijenhuis tensor as a (1,2) tensor ``[a, x, y]``."""
    if mode == "complex":
        if isinstance(s, NordenStructure):
            J = s.J
        elif isinstance(s, HyperStructure):
            J = s.J1
        else:
            raise StructureError("complex Nijenhuis tensor needs an almost complex structure")
        DJ = nabla_endomorphism(conn, J)  # [a, i, b]
        t1 = np.einsum("axb,by->axy", DJ.comps, J.comps)   # (nabla_x J) J y
        t3 = np.einsum("ix,aiy->axy", J.comps, DJ.comps)   # (nabla_{Jx} J) y
        n = t1 - np.einsum("axy->ayx", t1) + t3 - np.einsum("axy->ayx", t3)
        return Tensor(n, 1, 2)
    if mode == "contact":
        if not isinstance(s, ContactBStructure):
            raise StructureError("contact Nijenhuis tensor needs a contact B-metric structure")
        phi, xi, eta, c = s.phi.comps, s.xi.comps, s.eta.comps, f.c.comps
        phi2 = np.einsum("ab,bc->ac", phi, phi)
        t1 = np.einsum("ak,kxy->axy", phi2, c)                      # phi^2 [x, y]
        t2 = np.einsum("akl,kx,ly->axy", c, phi, phi)               # [phi x, phi y]
        t3 = np.einsum("ab,bky,kx->axy", phi, c, phi)               # phi [phi x, y]
        t4 = np.einsum("ab,bxl,ly->axy", phi, c, phi)               # phi [x, phi y]
        deta = exterior_derivative(f, s.eta).comps
        t5 = np.einsum("xy,a->axy", deta, xi)
        return Tensor(t1 + t2 - t3 - t4 + t5, 1, 2)
    raise StructureError(f"unknown Nijenhuis mode {mode!r}")


# -- isotropy ----------------------------------------------------------------

def primitive_part(p: Scalar) -> Scalar:
    """p divided by a rational so that its leading coefficient is 1."""
    if p.is_zero():
        return p
    lead = p.sorted_terms()[0][1]
    return p / lead


def isotropy(f: LieFrame, s: StructurePack, gradF: Tensor) -> tuple:
    """Square norm of ``gradF`` and its normalized isotropy polynomial.

    ``gradF`` is the (0,3) lowering of nabla J, nabla phi or a torsion; the
    manifold is isotropic exactly on the zero set of the returned polynomial.
    """
    norm = square_norm(f.metric, gradF)
    return norm, primitive_part(norm)
