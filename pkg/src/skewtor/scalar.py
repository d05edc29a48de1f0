"""Exact multivariate polynomials over the rationals.

A :class:`Scalar` is a finite sum of rational coefficients times monomials in
named parameters.  Instances are immutable and always kept in normal form, so
``==`` decides polynomial identity.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple  # tuple[tuple[str, int], ...], sorted by parameter name
Number = Union[int, Fraction]


class MissingParameterError(KeyError):
    """Raised when evaluation leaves a parameter unbound."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no value bound for parameter {self.name!r}"


class PolynomialSyntaxError(ValueError):
    pass


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Scalar:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, value: Number) -> "Scalar":
        return cls({(): value})

    @classmethod
    def var(cls, name: str) -> "Scalar":
        return cls({((name, 1),): 1})

    @classmethod
    def _raw(cls, terms: dict) -> "Scalar":
        # terms already normalized
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> set:
        return {name for m in self._terms for name, _ in m}

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self._terms), default=0)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = as_scalar(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Scalar._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-as_scalar(other))

    def __rsub__(self, other):
        return as_scalar(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return Scalar._raw({m: c * other for m, c in self._terms.items()})
        other = as_scalar(other)
        if not self._terms or not other._terms:
            return ZERO
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Scalar({m: c for m, c in out.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        # only division by nonzero rationals is meaningful here
        if isinstance(other, Scalar):
            other = other.constant_value()
        other = Fraction(other)
        if not other:
            raise ZeroDivisionError("division of a Scalar by zero")
        return self * (1 / other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- evaluation ---------------------------------------------------
    def eval(self, point: Mapping[str, Number]) -> Fraction:
        """Exact value at ``point``; every occurring parameter must be bound."""
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for name, e in m:
                if name not in point:
                    raise MissingParameterError(name)
                v *= Fraction(point[name]) ** e
            total += v
        return total

    def subs(self, point: Mapping[str, Number]) -> "Scalar":
        """Substitute the bound parameters, leaving the rest symbolic."""
        if not point:
            return self
        out = {}
        for m, c in self._terms.items():
            rest = []
            for name, e in m:
                if name in point:
                    c = c * Fraction(point[name]) ** e
                else:
                    rest.append((name, e))
            key = tuple(rest)
            out[key] = out.get(key, 0) + c
        return Scalar(out)

    # -- formatting ---------------------------------------------------
    def sorted_terms(self, order: Iterable[str] | None = None) -> list:
        """Terms in graded lexicographic order over ``order`` (default: by name)."""
        names = sorted(self.variables())
        if order is not None:
            order = list(order)
            names = [n for n in order if n in names] + [n for n in names if n not in order]
        rank = {n: i for i, n in enumerate(names)}

        def key(item):
            m, _ = item
            exps = [0] * len(names)
            for name, e in m:
                exps[rank[name]] = e
            return (-_mono_degree(m), [-e for e in exps])

        return sorted(self._terms.items(), key=key)

    def format(self, order: Iterable[str] | None = None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in m]
            mag = abs(c)
            if not factors:
                body = _fmt_fraction(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_fmt_fraction(mag)] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Scalar({self.format()!r})"


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


ZERO = Scalar()
ONE = Scalar.const(1)


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.const(x) if x else ZERO
    if isinstance(x, str):
        return Scalar.const(Fraction(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Scalar")


def scalar_arith(a, b, op: str) -> Scalar:
    """Dispatch form of the ring operations; ``op`` is add, sub, mul or neg."""
    a = as_scalar(a)
    if op == "neg":
        return -a
    b = as_scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def scalar_eval(a, point: Mapping[str, Number]) -> Fraction:
    return as_scalar(a).eval(point)


# -- parsing ------------------------------------------------------------

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_GREEK = {"λ": "l", "μ": "m"}


def canonical_name(name: str) -> str:
    """ASCII spelling of a parameter name: ``λ₁`` becomes ``l1``, ``μ₂`` becomes ``m2``."""
    name = name.translate(_SUBSCRIPTS)
    if name[:1] in _GREEK and name[1:].isdigit():
        return _GREEK[name[0]] + name[1:]
    return name


def parse_scalar(text: str, params: Iterable[str] | None = None) -> Scalar:
    """Parse an arithmetic expression in the declared parameters.

    Accepts ``+ - *``, integer powers written ``^`` or ``**``, division by a
    nonzero rational and parentheses.  Names are canonicalized with
    :func:`canonical_name`; a name outside ``params`` raises
    :class:`PolynomialSyntaxError` naming it.
    """
    allowed = None if params is None else set(params)
    try:
        tree = ast.parse(text.translate(_SUBSCRIPTS).replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise PolynomialSyntaxError(f"cannot parse {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Scalar.const(node.value)
        if isinstance(node, ast.Name):
            name = canonical_name(node.id)
            if allowed is not None and name not in allowed:
                raise PolynomialSyntaxError(f"undeclared parameter {node.id!r}")
            return Scalar.var(name)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise PolynomialSyntaxError(f"exponent must be a nonnegative integer in {text!r}")
                return left ** node.right.value
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise PolynomialSyntaxError(f"division only by nonzero rationals in {text!r}")
                return left / right
        raise PolynomialSyntaxError(f"unsupported syntax in {text!r}")

    return walk(tree)
