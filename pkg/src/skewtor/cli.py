"""Command-line front end.

    skewtor <check|classify|connection|curvature|verify|eval> <spec-path>
            [--type kt|phikt|phkt] [--id ID | --all] [--param name=rational ...]
            [--format text|machine] [--seed N]

Exit status: 0 when no item failed, 1 when some item failed, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .connections import (
    ClassViolation,
    connection_curvature,
    is_natural,
    kaehler_tensor_check,
    kt_build,
    naturality_residuals,
    phikt_build,
    phkt_build,
    torsion_analysis,
    torsion_is_skew,
)
from .families import ManifoldSpec, SpecValidationError
from .lie import antisymmetry_violations, curvature, jacobi_residual, levi_civita, ricci_scalar, square_norm
from .scalar import PolynomialSyntaxError, canonical_name
from .specfile import SpecParseError, resolve_spec
from .structures import (
    HyperStructure,
    NordenStructure,
    StructureError,
    classify,
    fundamental_tensor,
    nijenhuis,
    validate_structure,
)
from .verify import DEFAULT_SEED, REGISTRY, exact, independent_components, verify

COMMANDS = ("check", "classify", "connection", "curvature", "verify", "eval")
CONNECTION_FOR = {"norden": "kt", "contact": "phikt", "hyper": "phkt"}


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


def item(name: str, status, **fields) -> dict:
    if isinstance(status, bool):
        status = "true" if status else "false"
    out = {"name": name, "status": status}
    out.update({k: exact(v) for k, v in fields.items() if v is not None})
    return out


def check_item(name: str, residual) -> dict:
    hit = residual.first_nonzero()
    if hit is None:
        return item(name, "pass")
    return item(name, "failed", witness=[i + 1 for i in hit[0]], value=hit[1])


# -- commands ----------------------------------------------------------------

def run_check(spec: ManifoldSpec, opts) -> list:
    items = [item("metric signature", "info", value=list(spec.metric.signature))]
    bad = antisymmetry_violations(spec.c.subs(spec.bindings))
    items.append(item("antisymmetry of [.,.]", "failed", witness=list(bad[0])) if bad
                 else item("antisymmetry of [.,.]", "pass"))
    if bad:
        return [{"title": "validation", "items": items}]
    f = spec.frame()
    items.append(check_item("Jacobi identity", jacobi_residual(f)))
    try:
        report = validate_structure(f, spec.structure)
    except StructureError as exc:
        items.append(item("structure fits the frame", "failed", witness=str(exc)))
    else:
        for c in report.checks:
            items.append(item(c.name, "pass") if c.passed
                         else item(c.name, "failed", witness=list(c.witness)))
    return [{"title": "validation", "items": items}]


def run_classify(spec: ManifoldSpec, opts) -> list:
    f = spec.frame()
    lc = levi_civita(f)
    s = spec.structure
    items = [item(name, flag) for name, flag in classify(f, lc, s).items()]
    if isinstance(s, (NordenStructure, HyperStructure)):
        items.append(item("integrable (N = 0)", nijenhuis(f, lc, s, "complex").is_zero()))
    else:
        items.append(item("normal ([phi,phi] + d eta (x) xi = 0)", nijenhuis(f, lc, s, "contact").is_zero()))
    F = fundamental_tensor(f, lc, s)
    for k, Fk in enumerate(F if isinstance(F, tuple) else (F,), start=1):
        label = {"norden": "J", "contact": "phi"}.get(s.kind, f"J{k}")
        items.append(item(f"|nabla {label}|^2", "info", value=square_norm(f.metric, Fk)))
    return [{"title": "classification", "items": items}]


def _build(spec: ManifoldSpec, kind: str | None):
    s = spec.structure
    kind = kind or CONNECTION_FOR[s.kind]
    if CONNECTION_FOR[s.kind] != kind:
        raise InputError(f"--type {kind} does not apply to a {s.kind} structure")
    f = spec.frame()
    lc = levi_civita(f)
    builder = {"kt": kt_build, "phikt": phikt_build, "phkt": phkt_build}[kind]
    return f, lc, builder(f, s, lc), kind


def run_connection(spec: ManifoldSpec, opts) -> list:
    f, lc, tp, kind = _build(spec, opts.type)
    items = [item(f"T{k}", "info", value=v) for k, v in independent_components(tp.T3).items()]
    if not items:
        items.append(item("T", "info", value="0"))
    checks = [item("torsion is a 3-form", "pass" if torsion_is_skew(tp) else "failed")]
    for name, r in naturality_residuals(tp.conn, spec.structure).items():
        checks.append(check_item(f"{name} = 0", r))
    if kind == "phikt":
        diff = tp.conn.gamma - tp.extra["explicit"].gamma
        checks.append(check_item("explicit formula gives the same connection", diff))
    flags = [item(k, v) for k, v in torsion_analysis(f, lc, tp).items()]
    flags.append(item("|T|^2", "info", value=square_norm(f.metric, tp.T3)))
    if kind == "phkt":
        for name in ("D1", "D2", "D3"):
            flags.append(item(f"{name} = D", tp.extra[name].gamma == tp.conn.gamma))
            flags.append(item(f"{name} natural", is_natural(tp.extra[name], spec.structure)))
    return [
        {"title": f"{kind} torsion", "items": items},
        {"title": "naturality", "items": checks},
        {"title": "torsion properties", "items": flags},
    ]


def _components(R) -> dict:
    """Nonzero R_ijkl with i < j and k < l, keyed "i,j,k,l"."""
    out = {}
    n = R.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for l in range(k + 1, n):
                    v = R[i, j, k, l]
                    if not v.is_zero():
                        out[f"{i + 1},{j + 1},{k + 1},{l + 1}"] = v
    return out


def run_curvature(spec: ManifoldSpec, opts) -> list:
    f, lc, tp, kind = _build(spec, opts.type)
    R = curvature(lc)
    rho, tau = ricci_scalar(R, f.metric)
    rep = connection_curvature(tp)
    lc_items = [
        item("tau", "info", value=tau),
        item("rho", "info", value={f"{i + 1},{j + 1}": v for (i, j), v in rho.nonzero().items()}),
        item("R", "info", value=_components(R)),
    ]
    d_items = [
        item("tau(D)", "info", value=rep.tau),
        item("rho(D)", "info", value={f"{i + 1},{j + 1}": v for (i, j), v in rep.ricci.nonzero().items()}),
        item("K", "info", value=_components(rep.R4)),
        item("D flat", rep.flags["flat"]),
        item("tau(D) = tau", (rep.tau - tau).is_zero()),
        item("rho(D) = rho", (rep.ricci - rho).is_zero()),
    ]
    for name, op in spec.structure.operators().items():
        if op.valence == (1, 1):
            d_items.append(item(f"K of Kaehler type for {name}", kaehler_tensor_check(rep.R4, op)))
    return [
        {"title": "Levi-Civita curvature", "items": lc_items},
        {"title": f"{kind} curvature", "items": d_items},
    ]


def run_verify(spec: ManifoldSpec, opts) -> list:
    if opts.id and opts.all:
        raise InputError("--id and --all are mutually exclusive")
    target = opts.id or "all"
    if target != "all" and target not in REGISTRY:
        raise InputError(f"unknown theorem id {target!r}; known: {', '.join(REGISTRY)}")
    results = verify(spec, target, opts.seed)
    items = []
    for r in results:
        d = r.to_dict()
        items.append(item(d["id"], d["status"], statement=d["statement"], witness=d["witness"],
                          details=d["details"] or None))
    return [{"title": "verification", "items": items}]


def run_eval(spec: ManifoldSpec, opts) -> list:
    if not spec.bindings:
        raise InputError("eval needs at least one --param name=rational")
    f = spec.frame()
    brackets = {}
    for i in range(f.dim):
        for j in range(i + 1, f.dim):
            col = {f"X{k + 1}": f.c[k, i, j] for k in range(f.dim) if not f.c[k, i, j].is_zero()}
            if col:
                brackets[f"[X{i + 1},X{j + 1}]"] = col
    head = [{"title": "point", "items": [
        item("parameters", "info", value=dict(spec.bindings)),
        item("free parameters", "info", value=list(spec.free_params)),
        item("brackets", "info", value=brackets),
    ]}]
    return head + RUNNERS[opts.command_for_eval](spec, opts)


RUNNERS = {
    "check": run_check,
    "classify": run_classify,
    "connection": run_connection,
    "curvature": run_curvature,
    "verify": run_verify,
    "eval": run_eval,
}


# -- plumbing ----------------------------------------------------------------

def parse_point(pairs) -> dict:
    point = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise InputError(f"--param expects name=rational, got {pair!r}")
        try:
            point[canonical_name(name.strip())] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"--param {name}: {value!r} is not a rational number") from None
    return point


def resolve_seed(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("SKEWTOR_SEED")
    if env is None or not env.strip():
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise InputError(f"SKEWTOR_SEED must be an integer, got {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skewtor",
                                description="Natural connections with skew torsion on Lie groups.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", help="spec file, or the name of a shipped example (norden4d, contact5d, flat8d)")
    p.add_argument("--type", choices=("kt", "phikt", "phkt"), help="connection (default: by structure kind)")
    p.add_argument("--id", help="theorem id for verify")
    p.add_argument("--all", action="store_true", help="run every registry entry (the default)")
    p.add_argument("--param", nargs="+", action="extend", metavar="NAME=Q",
                   help="bind parameters, e.g. --param l1=1 l2=1/2")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--seed", type=int, help="sampling seed (default: $SKEWTOR_SEED or 1)")
    p.add_argument("--command", dest="command_for_eval", metavar="CMD", default="classify",
                   choices=tuple(c for c in COMMANDS if c != "eval"),
                   help="command that eval re-runs at the point (default: classify)")
    return p


def render_text(doc: dict) -> str:
    out = [f"skewtor {doc['engine']['version']} | {doc['command']} {doc['spec']['name']} | seed {doc['seed']}"]
    if doc["spec"]["bindings"]:
        out.append("point: " + " ".join(f"{k}={v}" for k, v in doc["spec"]["bindings"].items()))
    for sec in doc["sections"]:
        out.append(f"\n[{sec['title']}]")
        width = max((len(it["name"]) for it in sec["items"]), default=0)
        for it in sec["items"]:
            if it["status"] == "info":
                value = it.get("value")
                text = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
                out.append(f"  {it['name']:<{width}}  {text}")
                continue
            out.append(f"  {it['name']:<{width}}  {it['status']}")
            for key in ("statement", "witness", "value", "details"):
                if key in it:
                    v = it[key]
                    v = v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)
                    out.append(f"      {key}: {v}")
    out.append(f"\n{doc['failed']} failed of {doc['items']} items")
    return "\n".join(out)


def run(argv=None) -> tuple:
    """Parse arguments and build the report; returns (document, exit status)."""
    argv = sys.argv[1:] if argv is None else list(argv)
    opts = build_parser().parse_args(argv)
    opts.seed = resolve_seed(opts.seed)
    command = opts.command
    # check reports axiom failures as items instead of refusing the spec
    validate = "check" not in (command, opts.command_for_eval if command == "eval" else None)
    point = parse_point(opts.param)
    spec = resolve_spec(opts.spec, validate=validate)
    if point:
        unknown = [p for p in point if p not in spec.params]
        if unknown:
            raise InputError(f"unknown parameter {unknown[0]!r}; declared: {' '.join(spec.params)}")
        spec = spec.bind(point)
        if validate:
            spec.validate()
    sections = RUNNERS[command](spec, opts)
    items = [it for sec in sections for it in sec["items"]]
    failed = sum(it["status"] == "failed" for it in items)
    doc = {
        "command": command,
        "argv": argv,
        "engine": {"name": "skewtor", "version": __version__},
        "seed": opts.seed,
        "spec": {"name": spec.name, "dim": spec.dim, "params": list(spec.params),
                 "bindings": exact(dict(spec.bindings))},
        "sections": sections,
        "items": len(items),
        "failed": failed,
    }
    return doc, 1 if failed else 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    fmt = build_parser().parse_args(argv).format   # argparse exits with 2 on bad usage
    try:
        doc, code = run(argv)
    except (InputError, SpecParseError, SpecValidationError, PolynomialSyntaxError,
            ClassViolation, StructureError, FileNotFoundError, OSError) as exc:
        msg = f"{type(exc).__name__}: {exc}"
        if fmt == "machine":
            print(json.dumps({"error": msg}, ensure_ascii=False))
        else:
            print(f"skewtor: error: {msg}", file=sys.stderr)
        return 2
    if fmt == "machine":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(render_text(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
