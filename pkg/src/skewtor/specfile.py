"""Line-oriented manifold description files.

Layout::

    name = norden4d
    dim = 4

    [params]
    l1 l2 l3 l4

    [algebra]
    bracket 1 2 = l1*X1 + l2*X2

    [metric]
    diag 1 1 -1 -1          # or one "g i j = q" line per entry

    [structure]
    kind = norden           # norden | contact | hyper
    J 1 = X3                # image of X1; contact uses phi, xi = X5, eta = e5
                            # hyper uses J1/J2/J3 lines or the word "standard"
    [bindings]              # optional
    l1 = 1/2

Only ``bracket i j`` lines are needed for i < j; the opposite entry is filled
in antisymmetrically unless given explicitly, in which case it is checked.
"""

from __future__ import annotations

import re
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .families import BUILTIN, ManifoldSpec, SpecValidationError, standard_hyper
from .scalar import ZERO, PolynomialSyntaxError, Scalar, canonical_name, parse_scalar
from .structures import ContactBStructure, HyperStructure, NordenStructure, structures_equal
from .tensor import MetricData, Tensor

SECTIONS = ("params", "algebra", "metric", "structure", "bindings")


class SpecParseError(ValueError):
    """Malformed spec file; the message carries the line number and section."""

    def __init__(self, msg: str, line: int | None = None, section: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if section:
            where.append(f"[{section}]")
        super().__init__(f"{' '.join(where)}: {msg}" if where else msg)
        self.line, self.section, self.detail = line, section, msg


def _linear(text: str, prefix: str, dim: int, params, exact: bool) -> dict:
    """Parse ``sum coeff * <prefix>k`` into {k: coeff} (1-based k)."""
    basis = [f"{prefix}{k}" for k in range(1, dim + 1)]
    poly = parse_scalar(text, tuple(params) + tuple(basis))
    out = {}
    for mono, c in poly.terms.items():
        hits = [(n, e) for n, e in mono if n in basis]
        if len(hits) != 1 or hits[0][1] != 1:
            raise PolynomialSyntaxError(f"{text!r} is not a linear combination of {prefix}1..{prefix}{dim}")
        k = int(hits[0][0][len(prefix):])
        rest = tuple(m for m in mono if m[0] != hits[0][0])
        out[k] = out.get(k, ZERO) + Scalar({rest: c})
    if exact:
        for k, v in out.items():
            if not v.is_constant():
                raise PolynomialSyntaxError(f"structure entries must be rational, got {v}")
    return {k: v for k, v in out.items() if not v.is_zero()}


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise PolynomialSyntaxError(f"expected a rational number, got {text.strip()!r}") from None


def _label(text: str, dim: int) -> int:
    if not text.isdigit() or not 1 <= int(text) <= dim:
        raise PolynomialSyntaxError(f"basis label {text!r} outside 1..{dim}")
    return int(text)


def parse_text(text: str, source: str = "<spec>", validate: bool = True) -> ManifoldSpec:
    """Parse spec text and, unless told otherwise, validate the resulting manifold."""
    spec = _parse(text)
    if not validate:
        return spec
    issues = spec.validation_issues()
    if issues:
        axiom, where = issues[0]
        at = f" at {where}" if where else ""
        raise SpecValidationError(f"{source}: {axiom} fails{at}")
    return spec


def parse_spec(path, validate: bool = True) -> ManifoldSpec:
    path = Path(path)
    return parse_text(path.read_text(encoding="utf-8"), str(path), validate)


def _parse(text: str) -> ManifoldSpec:
    header, params, brackets, metric_lines, struct, bindings = {}, [], {}, [], [], {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise SpecParseError(f"unknown section [{section}]", no)
            continue
        try:
            if section is None:
                key, sep, value = line.partition("=")
                if not sep or key.strip() not in ("name", "dim", "note"):
                    raise PolynomialSyntaxError(f"expected name/dim/note = value, got {line!r}")
                header[key.strip()] = (value.strip(), no)
            elif section == "params":
                for p in line.replace(",", " ").split():
                    name = canonical_name(p)
                    if not name.isidentifier() or re.fullmatch(r"[Xe]\d+", name):
                        raise PolynomialSyntaxError(f"invalid parameter name {p!r}")
                    if name in params:
                        raise PolynomialSyntaxError(f"parameter {p!r} declared twice")
                    params.append(name)
            elif section == "bindings":
                key, sep, value = line.partition("=")
                if not sep:
                    raise PolynomialSyntaxError(f"expected name = rational, got {line!r}")
                bindings[canonical_name(key.strip())] = (_rational(value), no)
            elif section == "algebra":
                m = re.fullmatch(r"bracket\s+(\S+)\s+(\S+)\s*=\s*(.+)", line)
                if not m:
                    raise PolynomialSyntaxError(f"expected 'bracket i j = ...', got {line!r}")
                key = (m.group(1), m.group(2))
                if key in brackets:
                    raise PolynomialSyntaxError(f"bracket {key[0]} {key[1]} given twice")
                brackets[key] = (m.group(3), no)
            elif section == "metric":
                metric_lines.append((line, no))
            else:
                struct.append((line, no))
        except PolynomialSyntaxError as exc:
            raise SpecParseError(str(exc), no, section or "header") from None

    if "dim" not in header:
        raise SpecParseError("missing 'dim = n'", None, "header")
    dim_text, dim_line = header["dim"]
    if not dim_text.isdigit() or int(dim_text) < 1:
        raise SpecParseError(f"invalid dimension {dim_text!r}", dim_line, "header")
    dim = int(dim_text)
    name = header.get("name", ("unnamed", None))[0]
    note = header.get("note", ("", None))[0]

    c = _build_brackets(brackets, dim, params)
    metric = _build_metric(metric_lines, dim)
    structure = _build_structure(struct, dim)
    for p, (_, no) in bindings.items():
        if p not in params:
            raise SpecParseError(f"binding for undeclared parameter {p!r}", no, "bindings")
    return ManifoldSpec(name, tuple(params), c, metric, structure, note,
                        {p: v for p, (v, _) in bindings.items()})


def _build_brackets(brackets: dict, dim: int, params) -> Tensor:
    c = np.empty((dim,) * 3, dtype=object)
    c.fill(ZERO)
    given = set()
    for (a, b), (text, no) in brackets.items():
        try:
            i, j = _label(a, dim), _label(b, dim)
            vec = _linear(text, "X", dim, params, exact=False)
        except PolynomialSyntaxError as exc:
            raise SpecParseError(str(exc), no, "algebra") from None
        given.add((i, j))
        for k, v in vec.items():
            c[k - 1, i - 1, j - 1] = v
    for i, j in list(given):
        if (j, i) not in given and i != j:
            c[:, j - 1, i - 1] = [-v for v in c[:, i - 1, j - 1]]
    return Tensor(c, 1, 2)


def _build_metric(lines: list, dim: int) -> MetricData:
    if not lines:
        raise SpecParseError("missing metric", None, "metric")
    g = [[Fraction(0)] * dim for _ in range(dim)]
    for line, no in lines:
        try:
            if line.startswith("diag"):
                vals = [_rational(v) for v in line.split()[1:]]
                if len(vals) != dim:
                    raise PolynomialSyntaxError(f"diag needs {dim} entries, got {len(vals)}")
                for k, v in enumerate(vals):
                    g[k][k] = v
                continue
            m = re.fullmatch(r"g\s+(\S+)\s+(\S+)\s*=\s*(.+)", line)
            if not m:
                raise PolynomialSyntaxError(f"expected 'diag ...' or 'g i j = q', got {line!r}")
            i, j = _label(m.group(1), dim) - 1, _label(m.group(2), dim) - 1
            g[i][j] = g[j][i] = _rational(m.group(3))
        except PolynomialSyntaxError as exc:
            raise SpecParseError(str(exc), no, "metric") from None
    try:
        return MetricData.from_matrix(g)
    except ValueError as exc:
        raise SpecParseError(str(exc), lines[0][1], "metric") from None


def _build_structure(lines: list, dim: int):
    kind, images, vectors, standard = None, {}, {}, False
    for line, no in lines:
        try:
            key, sep, value = (s.strip() for s in line.partition("="))
            if key == "kind":
                if value not in ("norden", "contact", "hyper"):
                    raise PolynomialSyntaxError(f"unknown structure kind {value!r}")
                kind = value
            elif line == "standard":
                standard = True
            elif key in ("xi", "eta"):
                prefix = "X" if key == "xi" else "e"
                vectors[key] = _linear(value, prefix, dim, (), exact=True)
            else:
                m = re.fullmatch(r"(J|phi|J1|J2|J3)\s+(\S+)", key)
                if not sep or not m:
                    raise PolynomialSyntaxError(f"unrecognized structure line {line!r}")
                op, i = m.group(1), _label(m.group(2), dim)
                if i in images.setdefault(op, {}):
                    raise PolynomialSyntaxError(f"{op} {i} given twice")
                images[op][i] = _linear(value, "X", dim, (), exact=True)
        except PolynomialSyntaxError as exc:
            raise SpecParseError(str(exc), no, "structure") from None

    def op(name):
        m = np.zeros((dim, dim), dtype=int).astype(object)
        for i, vec in images.get(name, {}).items():
            for k, v in vec.items():
                m[k - 1, i - 1] = v
        return Tensor(m, 1, 1)

    def vec(name, up):
        v = np.zeros(dim, dtype=int).astype(object)
        for k, x in vectors.get(name, {}).items():
            v[k - 1] = x
        return Tensor(v, 1 if up else 0, 0 if up else 1)

    if kind is None:
        raise SpecParseError("missing 'kind = ...'", None, "structure")
    if kind == "norden":
        return NordenStructure(op("J"))
    if kind == "contact":
        if "xi" not in vectors or "eta" not in vectors:
            raise SpecParseError("contact structures need xi and eta", None, "structure")
        return ContactBStructure(op("phi"), vec("xi", True), vec("eta", False))
    if standard:
        if images:
            raise SpecParseError("'standard' cannot be combined with explicit J lines", None, "structure")
        if dim % 4:
            raise SpecParseError("hypercomplex structures need dimension divisible by 4", None, "structure")
        return standard_hyper(dim)
    return HyperStructure(op("J1"), op("J2"), op("J3"))


# -- serialization ---------------------------------------------------------------

def _combo(vec: dict, prefix: str, order) -> str:
    """{k: Scalar} -> ``-l1*X1 + (l2 - l3)*X2``; empty -> ``0``."""
    parts = []
    for k in sorted(vec):
        v = vec[k]
        terms = v.sorted_terms(order)
        if len(terms) == 1:
            body = Scalar(dict([terms[0]])).format(order)
            sign = "-" if body.startswith("-") else "+"
            body = body.lstrip("-")
            text = f"{prefix}{k}" if body == "1" else f"{body}*{prefix}{k}"
        else:
            sign, text = "+", f"({v.format(order)})*{prefix}{k}"
        parts.append((sign, text))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


def _op_lines(name: str, t: Tensor, order) -> list:
    out = []
    for i in range(t.dim):
        vec = {k + 1: t[k, i] for k in range(t.dim) if not t[k, i].is_zero()}
        if vec:
            out.append(f"{name} {i + 1} = {_combo(vec, 'X', order)}")
    return out


def serialize(spec: ManifoldSpec) -> str:
    """Canonical text form; :func:`parse_text` of it gives back an equal spec."""
    n, order = spec.dim, spec.params
    lines = [f"name = {spec.name}", f"dim = {n}"]
    if spec.note:
        lines.append(f"note = {spec.note}")
    lines += ["", "[params]", " ".join(spec.params)] if spec.params else []
    lines += ["", "[algebra]"]
    for i in range(n):
        for j in range(i, n):
            col = {k + 1: spec.c[k, i, j] for k in range(n) if not spec.c[k, i, j].is_zero()}
            anti = all((spec.c[k, i, j] + spec.c[k, j, i]).is_zero() for k in range(n))
            if col or not anti:
                lines.append(f"bracket {i + 1} {j + 1} = {_combo(col, 'X', order)}")
            if not anti and i != j:
                back = {k + 1: spec.c[k, j, i] for k in range(n) if not spec.c[k, j, i].is_zero()}
                lines.append(f"bracket {j + 1} {i + 1} = {_combo(back, 'X', order)}")
    lines += ["", "[metric]"]
    g = spec.metric.g
    if all(g[i][j] == 0 for i in range(n) for j in range(n) if i != j):
        lines.append("diag " + " ".join(str(g[i][i]) for i in range(n)))
    else:
        lines += [f"g {i + 1} {j + 1} = {g[i][j]}" for i in range(n) for j in range(i, n) if g[i][j] != 0]
    s = spec.structure
    lines += ["", "[structure]", f"kind = {s.kind}"]
    if isinstance(s, NordenStructure):
        lines += _op_lines("J", s.J, order)
    elif isinstance(s, ContactBStructure):
        lines += _op_lines("phi", s.phi, order)
        lines.append("xi = " + _combo({k + 1: s.xi[k] for k in range(n) if not s.xi[k].is_zero()}, "X", order))
        lines.append("eta = " + _combo({k + 1: s.eta[k] for k in range(n) if not s.eta[k].is_zero()}, "e", order))
    elif n % 4 == 0 and structures_equal(s, standard_hyper(n)):
        lines.append("standard")
    else:
        for k, J in enumerate(s.Js, start=1):
            lines += _op_lines(f"J{k}", J, order)
    if spec.bindings:
        lines += ["", "[bindings]"] + [f"{p} = {v}" for p, v in spec.bindings.items()]
    return "\n".join(lines) + "\n"


# -- lookup ----------------------------------------------------------------------

def shipped_spec_text(name: str) -> str:
    return resources.files("skewtor").joinpath("specs", f"{name}.spec").read_text(encoding="utf-8")


def resolve_spec(ref: str, validate: bool = True) -> ManifoldSpec:
    """Load a spec from a path; fall back to a shipped spec with the same stem.

    ``examples/norden4d.spec`` therefore works from any directory, as does the
    bare name ``norden4d``.
    """
    path = Path(ref)
    if path.is_file():
        return parse_spec(path, validate)
    stem = path.name[:-5] if path.name.endswith(".spec") else path.name
    if stem in BUILTIN:
        return parse_text(shipped_spec_text(stem), f"{stem}.spec", validate)
    raise FileNotFoundError(f"no such spec file: {ref}")
