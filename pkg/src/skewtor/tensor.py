"""Dense tensors of exact scalars over a fixed frame.

Components live in a numpy object array of shape ``(n,) * (up + down)``,
contravariant indices first.  Numpy only provides storage and index
gymnastics (``einsum``/``transpose``); every entry is a :class:`Scalar`.
Indices are 0-based in code; :meth:`Tensor.at` takes the 1-based frame
labels used for display.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .scalar import ZERO, Scalar, as_scalar

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class SlotError(ValueError):
    """Slot index out of range or of the wrong kind."""


def _as_array(value) -> np.ndarray:
    if isinstance(value, np.ndarray) and value.ndim:
        return value
    if isinstance(value, np.ndarray):
        value = value[()]
    out = np.empty((), dtype=object)
    out[()] = as_scalar(value)
    return out


def _scalar_array(values) -> np.ndarray:
    arr = values if isinstance(values, np.ndarray) else _as_array(values) if isinstance(values, Scalar) else np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = as_scalar(v)
    return out


class Tensor:
    """A (up, down)-valent tensor with :class:`Scalar` components."""

    __slots__ = ("comps", "up", "down", "dim")

    def __init__(self, comps, up: int, down: int, dim: int | None = None):
        arr = _scalar_array(comps)
        rank = up + down
        if arr.ndim != rank:
            raise ValueError(f"expected {rank} indices, got array of rank {arr.ndim}")
        if rank:
            n = arr.shape[0]
            if any(s != n for s in arr.shape):
                raise ValueError(f"non-square component array {arr.shape}")
        else:
            if dim is None:
                raise ValueError("dim is required for a rank-0 tensor")
            n = dim
        if dim is not None and n != dim:
            raise ValueError(f"dimension mismatch: {n} != {dim}")
        self.comps = arr
        self.up = up
        self.down = down
        self.dim = n

    @classmethod
    def zeros(cls, dim: int, up: int, down: int) -> "Tensor":
        arr = np.empty((dim,) * (up + down), dtype=object)
        arr.fill(ZERO)
        return cls(arr, up, down, dim)

    @classmethod
    def identity(cls, dim: int) -> "Tensor":
        return cls(np.eye(dim, dtype=int).astype(object), 1, 1)

    @property
    def valence(self) -> tuple:
        return (self.up, self.down)

    @property
    def rank(self) -> int:
        return self.up + self.down

    def scalar(self) -> Scalar:
        if self.rank:
            raise ValueError("not a rank-0 tensor")
        return self.comps[()]

    def __getitem__(self, idx):
        return self.comps[idx]

    def at(self, *labels: int) -> Scalar:
        """Component by 1-based frame labels, e.g. ``T.at(1, 3, 4)``."""
        if len(labels) != self.rank or not all(1 <= i <= self.dim for i in labels):
            raise SlotError(f"index {labels} out of range for rank {self.rank}, dim {self.dim}")
        return self.comps[tuple(i - 1 for i in labels)]

    def items(self):
        """Yield ``(index_tuple, Scalar)`` over all components (0-based)."""
        return np.ndenumerate(self.comps)

    def nonzero(self) -> dict:
        return {idx: v for idx, v in np.ndenumerate(self.comps) if not v.is_zero()}

    # -- algebra --------------------------------------------------------
    def _check_same(self, other: "Tensor"):
        if not isinstance(other, Tensor) or other.valence != self.valence or other.dim != self.dim:
            raise ValueError("tensors must share dimension and valence")

    def __add__(self, other):
        self._check_same(other)
        return Tensor(self.comps + other.comps, self.up, self.down, self.dim)

    def __sub__(self, other):
        self._check_same(other)
        return Tensor(self.comps - other.comps, self.up, self.down, self.dim)

    def __neg__(self):
        return Tensor(-self.comps, self.up, self.down, self.dim)

    def __mul__(self, k):
        if isinstance(k, Tensor):
            return NotImplemented
        k = as_scalar(k)
        return Tensor(self.comps * k, self.up, self.down, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.valence == other.valence and self.dim == other.dim
                and bool(np.all(self.comps == other.comps)))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.comps.flat)

    def first_nonzero(self):
        """(0-based index, value) of the first nonzero component, or None."""
        for idx, v in np.ndenumerate(self.comps):
            if not v.is_zero():
                return idx, v
        return None

    def variables(self) -> set:
        out = set()
        for v in self.comps.flat:
            out |= v.variables()
        return out

    def subs(self, point: Mapping) -> "Tensor":
        return self.map(lambda v: v.subs(point))

    def map(self, fn) -> "Tensor":
        out = np.empty(self.comps.shape, dtype=object)
        for idx, v in np.ndenumerate(self.comps):
            out[idx] = fn(v)
        return Tensor(out, self.up, self.down, self.dim)

    def __repr__(self):
        return f"Tensor(dim={self.dim}, valence=({self.up},{self.down}), nonzero={len(self.nonzero())})"


def einsum(spec: str, *operands, up: int, down: int) -> Tensor:
    """``np.einsum`` over tensor components, wrapped back into a Tensor."""
    arrays = [op.comps if isinstance(op, Tensor) else op for op in operands]
    dims = {op.dim for op in operands if isinstance(op, Tensor)}
    out = _as_array(np.einsum(spec, *arrays))
    return Tensor(out, up, down, dims.pop() if len(dims) == 1 else None)


def reorder(t: Tensor, args: str, out: str | None = None) -> Tensor:
    """Covariant tensor with permuted arguments.

    ``reorder(F, "yzx")`` is the tensor ``(x, y, z) -> F(y, z, x)``.
    """
    if t.up:
        raise SlotError("reorder expects a covariant tensor")
    out = out or "".join(sorted(args))
    return Tensor(np.einsum(f"{args}->{out}", t.comps), 0, t.down, t.dim)


def cyclic_sum(t: Tensor) -> Tensor:
    """Cyclic sum over the first three covariant arguments."""
    extra = _LETTERS[3:3 + t.down - 3]
    base = "xyz" + extra
    return (t + reorder(t, "yzx" + extra, base) + reorder(t, "zxy" + extra, base))


def apply_endomorphism(t: Tensor, slot: int, op: Tensor) -> Tensor:
    """Replace covariant argument ``slot`` by ``op`` applied to it.

    Returns ``t(..., op(x), ...)`` for a (1,1) tensor ``op``.
    """
    if op.valence != (1, 1):
        raise SlotError("op must be a (1,1) tensor")
    if not 0 <= slot < t.down:
        raise SlotError(f"covariant slot {slot} out of range")
    axis = t.up + slot
    letters = _LETTERS[:t.rank]
    src = letters[:axis] + "z" + letters[axis + 1:]
    return einsum(f"{src},z{letters[axis]}->{letters}", t, op, up=t.up, down=t.down)


def contract(t: Tensor, up_slot: int, down_slot: int) -> Tensor:
    """Trace a contravariant slot against a covariant slot (0-based within each group)."""
    if not 0 <= up_slot < t.up:
        raise SlotError(f"contravariant slot {up_slot} out of range for valence {t.valence}")
    if not 0 <= down_slot < t.down:
        raise SlotError(f"covariant slot {down_slot} out of range for valence {t.valence}")
    out = _as_array(np.trace(t.comps, axis1=up_slot, axis2=t.up + down_slot))
    return Tensor(out, t.up - 1, t.down - 1, t.dim)


# -- metric ---------------------------------------------------------------

def _exact_inverse(rows: list) -> list:
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("metric is degenerate")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def exact_rank(rows: list) -> int:
    """Rank of a rational matrix by fraction-exact row reduction."""
    a = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, len(a)):
            if a[r][col] != 0:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def _signature(rows: list) -> tuple:
    # congruence diagonalization (Sylvester's law of inertia)
    a = [list(r) for r in rows]
    n = len(a)
    diag = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for r in a:
                    r[k], r[j] = r[j], r[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    raise ValueError("metric is degenerate")
                # e_k <- e_k + e_j makes the pivot 2*a[k][j] (a[j][j] == 0 here)
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        p = a[k][k]
        diag.append(p)
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
    return (sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0))


@dataclass(frozen=True)
class MetricData:
    """Constant nondegenerate symmetric metric with its exact inverse."""

    g: tuple
    g_inv: tuple
    signature: tuple

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence]) -> "MetricData":
        rows = [[Fraction(v) for v in row] for row in matrix]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("metric matrix must be square")
        for i, j in itertools.combinations(range(n), 2):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"metric is not symmetric at ({i + 1},{j + 1})")
        inv = _exact_inverse(rows)
        return cls(tuple(map(tuple, rows)), tuple(map(tuple, inv)), _signature(rows))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "MetricData":
        n = len(entries)
        return cls.from_matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.g)

    @property
    def lower(self) -> Tensor:
        """g as a (0,2) tensor."""
        return Tensor(self.g, 0, 2)

    @property
    def upper(self) -> Tensor:
        """g^{-1} as a (2,0) tensor."""
        return Tensor(self.g_inv, 2, 0)


def raise_lower(t: Tensor, slot: int, direction: str, m: MetricData,
                position: int | None = None) -> Tensor:
    """Musical isomorphism on one slot.

    ``direction="lower"`` turns contravariant slot ``slot`` into a covariant
    slot inserted at ``position`` of the covariant group (default: last);
    ``"raise"`` does the converse.
    """
    if m.dim != t.dim:
        raise ValueError("metric and tensor dimensions differ")
    letters = _LETTERS[:t.rank]
    if direction == "lower":
        if not 0 <= slot < t.up:
            raise SlotError(f"cannot lower: no contravariant slot {slot} in valence {t.valence}")
        ups = [letters[i] for i in range(t.up) if i != slot]
        downs = list(letters[t.up:])
        pos = len(downs) if position is None else position
        downs.insert(pos, "Z")
        spec = f"{letters},{letters[slot]}Z->{''.join(ups + downs)}"
        return einsum(spec, t, m.lower, up=t.up - 1, down=t.down + 1)
    if direction == "raise":
        if not 0 <= slot < t.down:
            raise SlotError(f"cannot raise: no covariant slot {slot} in valence {t.valence}")
        ax = t.up + slot
        ups = list(letters[:t.up])
        downs = [letters[i] for i in range(t.up, t.rank) if i != ax]
        pos = len(ups) if position is None else position
        ups.insert(pos, "Z")
        spec = f"{letters},{letters[ax]}Z->{''.join(ups + downs)}"
        return einsum(spec, t, m.upper, up=t.up + 1, down=t.down - 1)
    raise ValueError(f"direction must be 'raise' or 'lower', not {direction!r}")


# -- skew-symmetry ----------------------------------------------------------

def _perm_sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def alternate(t: Tensor) -> Tensor:
    """Full antisymmetrization with the 1/k! normalization."""
    if t.up:
        raise SlotError("alternate expects a fully covariant tensor")
    k = t.down
    acc = np.empty(t.comps.shape, dtype=object)
    acc.fill(ZERO)
    for perm in itertools.permutations(range(k)):
        acc = acc + _perm_sign(perm) * np.transpose(t.comps, perm)
    return Tensor(acc, 0, k, t.dim) / math.factorial(k)


def is_skew(t: Tensor) -> bool:
    return alternate(t) == t
