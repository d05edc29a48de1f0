"""Left-invariant geometry on a Lie group, computed in a frame of the Lie algebra.

All tensors are invariant, so covariant derivatives reduce to the algebraic
connection-coefficient terms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .scalar import ZERO
from .tensor import MetricData, SlotError, Tensor, _LETTERS, einsum


class FrameError(ValueError):
    pass


def antisymmetry_violations(c: Tensor) -> list:
    """1-based (i, j, k) with c^k_ij != -c^k_ji."""
    bad = []
    n = c.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        if i <= j and not (c[k, i, j] + c[k, j, i]).is_zero():
            bad.append((i + 1, j + 1, k + 1))
    return bad


@dataclass(frozen=True, eq=False)
class LieFrame:
    """Structure constants ``c[k, i, j]`` with ``[X_i, X_j] = c^k_ij X_k`` and a constant metric."""

    c: Tensor
    metric: MetricData
    params: tuple = ()

    def __post_init__(self):
        if self.c.valence != (1, 2):
            raise FrameError("structure constants must form a (1,2) tensor")
        if self.c.dim != self.metric.dim:
            raise FrameError("structure constants and metric disagree on dimension")
        bad = antisymmetry_violations(self.c)
        if bad:
            raise FrameError(f"structure constants not antisymmetric at (i,j,k)={bad[0]}")

    @property
    def dim(self) -> int:
        return self.c.dim

    def bracket(self, i: int, j: int) -> np.ndarray:
        """Components of [X_i, X_j] (0-based indices)."""
        return self.c.comps[:, i, j]

    def subs(self, point) -> "LieFrame":
        params = tuple(p for p in self.params if p not in point)
        return LieFrame(self.c.subs(point), self.metric, params)


def jacobi_residual(f: LieFrame) -> Tensor:
    """Cyclic sum ``[[X_i,X_j],X_k] + ...`` as a (1,3) tensor ``[m, i, j, k]``."""
    # [[X_i, X_j], X_k] = c^s_ij c^m_sk
    t = einsum("sij,msk->mijk", f.c, f.c, up=1, down=3)
    return (t + Tensor(np.einsum("mjki->mijk", t.comps), 1, 3)
            + Tensor(np.einsum("mkij->mijk", t.comps), 1, 3))


def jacobi_check(f: LieFrame) -> bool:
    return jacobi_residual(f).is_zero()


@dataclass(frozen=True, eq=False)
class Connection:
    """Invariant affine connection: ``nabla_{X_i} X_j = gamma[k, i, j] X_k``."""

    frame: LieFrame
    gamma: Tensor
    name: str = field(default="")

    def __post_init__(self):
        if self.gamma.valence != (1, 2) or self.gamma.dim != self.frame.dim:
            raise FrameError("connection coefficients must be a (1,2) tensor on the frame")

    def torsion(self) -> Tensor:
        """T(X_i, X_j) as a (1,2) tensor ``[k, i, j]``."""
        swapped = Tensor(np.einsum("kji->kij", self.gamma.comps), 1, 2)
        return self.gamma - swapped - self.frame.c

    def shifted(self, lowered_shift: Tensor, name: str = "") -> "Connection":
        """Connection with ``g(D_x y - nabla_x y, z) = lowered_shift(x, y, z)``."""
        from .tensor import raise_lower
        shift = raise_lower(lowered_shift, 2, "raise", self.frame.metric, position=0)
        return Connection(self.frame, self.gamma + shift, name)


def lowered_bracket(f: LieFrame) -> Tensor:
    """``g([X_i, X_j], X_k)`` as a (0,3) tensor."""
    return einsum("mij,mk->ijk", f.c, f.metric.lower, up=0, down=3)


def levi_civita(f: LieFrame) -> Connection:
    """Koszul formula for a left-invariant metric.

    2 g(nabla_i X_j, X_k) = g([X_i,X_j],X_k) - g([X_j,X_k],X_i) + g([X_k,X_i],X_j)
    """
    cl = lowered_bracket(f).comps
    low = (cl - np.einsum("jki->ijk", cl) + np.einsum("kij->ijk", cl))
    gamma_low = Tensor(low, 0, 3) / 2
    from .tensor import raise_lower
    gamma = raise_lower(gamma_low, 2, "raise", f.metric, position=0)
    return Connection(f, gamma, "levi-civita")


def covariant_derivative(conn: Connection, t: Tensor) -> Tensor:
    """nabla of an invariant tensor; the new covariant slot comes first.

    For a (p, q) tensor the result is (p, q+1) with components
    ``[a_1..a_p, i, b_1..b_q] = (nabla_{X_i} t)^{a..}_{b..}``.
    """
    if t.dim != conn.frame.dim:
        raise FrameError("tensor and connection live on different frames")
    p, q = t.valence
    letters = _LETTERS[:t.rank]
    out = "".join(letters[:p]) + "I" + "".join(letters[p:])
    acc = np.empty((t.dim,) * (t.rank + 1), dtype=object)
    acc.fill(ZERO)
    for s in range(t.rank):
        src = letters[:s] + "K" + letters[s + 1:]
        if s < p:
            term = np.einsum(f"{letters[s]}IK,{src}->{out}", conn.gamma.comps, t.comps)
            acc = acc + term
        else:
            term = np.einsum(f"KI{letters[s]},{src}->{out}", conn.gamma.comps, t.comps)
            acc = acc - term
    return Tensor(acc, p, q + 1, t.dim)


def curvature(conn: Connection, *, upper: bool = False) -> Tensor:
    """R(X_i,X_j)X_k = nabla_i nabla_j X_k - nabla_j nabla_i X_k - nabla_[X_i,X_j] X_k.

    Returned lowered, ``R[i,j,k,l] = g(R(X_i,X_j)X_k, X_l)``, unless ``upper``
    is set, in which case the (1,3) tensor ``[l, i, j, k]`` is returned.
    """
    G = conn.gamma.comps
    c = conn.frame.c.comps
    a = np.einsum("mjk,lim->lijk", G, G)
    b = np.einsum("mik,ljm->lijk", G, G)
    d = np.einsum("mij,lmk->lijk", c, G)
    r13 = Tensor(a - b - d, 1, 3)
    if upper:
        return r13
    return einsum("lijk,lw->ijkw", r13, conn.frame.metric.lower, up=0, down=4)


def ricci_scalar(R: Tensor, m: MetricData):
    """rho(y,z) = g^{ij} R(e_i, y, z, e_j) and tau = g^{yz} rho(y, z)."""
    if R.valence != (0, 4):
        raise SlotError("ricci_scalar expects a (0,4) tensor")
    rho = einsum("ij,iyzj->yz", m.upper, R, up=0, down=2)
    tau = einsum("yz,yz->", m.upper, rho, up=0, down=0).scalar()
    return rho, tau


def _require_skew(omega: Tensor):
    from .tensor import is_skew
    if omega.up:
        raise SlotError("expected a covariant form")
    if not is_skew(omega):
        raise SlotError("form is not skew-symmetric")


def exterior_derivative(f: LieFrame, omega: Tensor) -> Tensor:
    """d of an invariant p-form.

    d w(x_0..x_p) = sum_{i<j} (-1)^{i+j} w([x_i, x_j], x_0..^i..^j..x_p);
    in particular d eta(x, y) = -eta([x, y]).
    """
    _require_skew(omega)
    p = omega.down
    rest = _LETTERS[2:2 + p - 1]
    # W[a, b, r...] = w([X_a, X_b], r...)
    W = np.einsum(f"m{rest},mab->ab{rest}", omega.comps, f.c.comps)
    acc = np.empty((f.dim,) * (p + 1), dtype=object)
    acc.fill(ZERO)
    for i, j in itertools.combinations(range(p + 1), 2):
        others = [k for k in range(p + 1) if k not in (i, j)]
        src = [None] * (p + 1)
        src[i], src[j] = 0, 1
        for pos, k in enumerate(others):
            src[k] = 2 + pos
        # axes argument: output axis k takes W axis src[k]
        acc = acc + (-1) ** (i + j) * np.transpose(W, src)
    return Tensor(acc, 0, p + 1, f.dim)


def codifferential_3form(f: LieFrame, conn: Connection, T: Tensor) -> Tensor:
    """delta T(y, z) = -g^{ij} (nabla_{e_i} T)(e_j, y, z)."""
    _require_skew(T)
    if T.down != 3:
        raise SlotError("expected a 3-form")
    dT = covariant_derivative(conn, T)
    return -einsum("ij,ijyz->yz", f.metric.upper, dT, up=0, down=2)


def square_norm(m: MetricData, S: Tensor) -> "Scalar":
    """Full metric contraction g^{ij} g^{ks} g^{lt} S_ikl S_jst."""
    if S.valence != (0, 3):
        raise SlotError("square_norm expects a (0,3) tensor")
    gi = m.upper
    return einsum("ij,ks,lt,ikl,jst->", gi, gi, gi, S, S, up=0, down=0).scalar()
