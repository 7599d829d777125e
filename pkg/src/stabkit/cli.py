"""Command-line front end: ingest JSON, run the checks, emit audit reports.

Commands: validate-ring, hilbert, coeffs, cascade, hn, abel-check,
slope-equiv, example.  Inputs are JSON documents; reports are emitted as
aligned human text (default) or machine JSON (--json), and are byte-identical
across runs on identical inputs.  All values in reports are exact "p/q"
strings; --float appends decimal approximations to the human text only.

Exit codes: 0 when every requested check holds (with or without equality),
2 when any check is violated (a mathematically meaningful outcome: the data
cannot come from a semistable object), 1 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .cascade import CascadeVerdict, linear_cascade, quadratic_cascade
from .exact import format_rational, parse_rational
from .grr import (
    CoeffVector,
    SheafData,
    ToddData,
    coeff_vector_to_json,
    coefficients,
    hilbert_poly,
    sheaf_from_json,
    todd_from_json,
    z_s,
)
from .hn import (
    ChargedPoset,
    FactorEntry,
    abel_chain_check,
    factor_entries_from_json,
    hn_filtration,
    poset_from_json,
    slope_equivalence,
)
from .ring import BigradedRing, build_preset, ring_from_json, validate_ring

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VIOLATED = 2


class DocumentError(ValueError):
    """An input problem, carrying the offending path for the error message."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Options:
    orientation: str = "standard"
    t: Fraction = Fraction(1)
    m1: int = 1
    m2: int = 1
    genuine_stability: bool = False


@dataclass
class InputDocument:
    ring: BigradedRing
    todd: Optional[ToddData]
    sheaves: list[SheafData] = field(default_factory=list)
    posets: list[ChargedPoset] = field(default_factory=list)
    factor_vectors: list[list[FactorEntry]] = field(default_factory=list)
    options: Options = field(default_factory=Options)
    ring_label: str = "custom"


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise DocumentError(path, f"cannot read file ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(path, f"malformed JSON ({exc})") from exc


def _build_ring(spec: Mapping, path: str) -> tuple[BigradedRing, Optional[ToddData], str]:
    if "preset" in spec:
        params = dict(spec.get("params", {}))
        try:
            ring, todd = build_preset(spec["preset"], **params)
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"{path}.ring.preset", str(exc)) from exc
        label = spec["preset"] + "(" + ", ".join(f"{k}={v}" for k, v in sorted(params.items())) + ")"
        return ring, todd, label
    if "custom" in spec:
        try:
            ring = ring_from_json(spec["custom"])
        except ValueError as exc:
            raise DocumentError(f"{path}.ring.custom", str(exc)) from exc
        report = validate_ring(ring)
        if not report.ok:
            raise DocumentError(f"{path}.ring.custom", "; ".join(report.failures))
        return ring, None, "custom"
    raise DocumentError(f"{path}.ring", "expected a 'preset' or 'custom' ring")


def load_document(path: str) -> InputDocument:
    data = _load_json(path)
    if "ring" not in data:
        raise DocumentError(path, "document is missing 'ring'")
    ring, preset_todd, label = _build_ring(data["ring"], path)

    todd_spec = data.get("todd", "preset")
    if todd_spec == "preset":
        todd = preset_todd  # None for custom rings; checked where required
    else:
        try:
            todd = todd_from_json(ring, todd_spec)
        except ValueError as exc:
            raise DocumentError(f"{path}.todd", str(exc)) from exc

    sheaves = []
    for i, entry in enumerate(data.get("sheaves", [])):
        try:
            sheaves.append(sheaf_from_json(ring, entry))
        except ValueError as exc:
            raise DocumentError(f"{path}.sheaves[{i}]", str(exc)) from exc

    posets = []
    for i, entry in enumerate(data.get("posets", [])):
        try:
            posets.append(poset_from_json(entry))
        except ValueError as exc:
            raise DocumentError(f"{path}.posets[{i}]", str(exc)) from exc

    factor_vectors = []
    for i, entry in enumerate(data.get("factor_vectors", [])):
        try:
            factor_vectors.append(factor_entries_from_json(entry))
        except ValueError as exc:
            raise DocumentError(f"{path}.factor_vectors[{i}]", str(exc)) from exc

    options = Options()
    raw = data.get("options", {})
    if "orientation" in raw:
        options.orientation = raw["orientation"]
    if "t" in raw:
        options.t = parse_rational(raw["t"])
    if "m1" in raw:
        options.m1 = int(raw["m1"])
    if "m2" in raw:
        options.m2 = int(raw["m2"])
    if "genuine_stability" in raw:
        options.genuine_stability = bool(raw["genuine_stability"])

    return InputDocument(
        ring=ring,
        todd=todd,
        sheaves=sheaves,
        posets=posets,
        factor_vectors=factor_vectors,
        options=options,
        ring_label=label,
    )


def _require_todd(doc: InputDocument, path: str) -> ToddData:
    if doc.todd is None:
        raise DocumentError(f"{path}.todd", "custom rings need inline Todd data")
    return doc.todd


def _sheaf_name(E: SheafData, i: int) -> str:
    return E.name if E.name is not None else f"sheaf[{i}]"


def _verdict_code(verdict: CascadeVerdict) -> int:
    return EXIT_VIOLATED if verdict.is_violation else EXIT_OK


# -- commands -------------------------------------------------------------------


def _cmd_validate_ring(args: argparse.Namespace) -> tuple[dict, int]:
    data = _load_json(args.input)
    spec = data["ring"] if "ring" in data and isinstance(data["ring"], Mapping) else {"custom": data}
    if "custom" not in spec and "preset" not in spec:
        spec = {"custom": data}
    try:
        if "preset" in spec:
            ring, _, label = _build_ring(spec, args.input)
        else:
            ring = ring_from_json(spec["custom"])
            label = "custom"
    except DocumentError:
        raise
    except ValueError as exc:
        raise DocumentError(args.input, str(exc)) from exc
    report = validate_ring(ring)
    out = {
        "command": "validate-ring",
        "ring": label,
        "ok": report.ok,
        "failures": list(report.failures),
    }
    return out, EXIT_OK if report.ok else EXIT_INPUT_ERROR


def _cmd_hilbert(args: argparse.Namespace) -> tuple[dict, int]:
    doc = load_document(args.input)
    todd = _require_todd(doc, args.input)
    results = []
    for i, E in enumerate(doc.sheaves):
        poly = hilbert_poly(E, todd, doc.options.orientation)
        charge = z_s(E, todd)
        results.append(
            {
                "sheaf": _sheaf_name(E, i),
                "degree": poly.degree,
                "coefficients": [
                    {"re": format_rational(c.re), "im": format_rational(c.im)}
                    for c in poly.coefficients
                ],
                "display": str(poly),
                "z_s": {"re": format_rational(charge.re), "im": format_rational(charge.im)},
            }
        )
    out = {
        "command": "hilbert",
        "ring": doc.ring_label,
        "orientation": doc.options.orientation,
        "results": results,
    }
    return out, EXIT_OK


def _cmd_coeffs(args: argparse.Namespace) -> tuple[dict, int]:
    doc = load_document(args.input)
    todd = _require_todd(doc, args.input)
    results = []
    for i, E in enumerate(doc.sheaves):
        vec = coefficients(E, todd, doc.options.orientation)
        results.append({"sheaf": _sheaf_name(E, i), "coefficients": coeff_vector_to_json(vec)})
    out = {
        "command": "coeffs",
        "ring": doc.ring_label,
        "orientation": doc.options.orientation,
        "results": results,
    }
    return out, EXIT_OK


def _cascade_result(vec: CoeffVector, genuine_stability: bool) -> tuple[dict, int]:
    linear = linear_cascade(vec, genuine_stability)
    quadratic = quadratic_cascade(vec)
    entry = {
        "coefficients": coeff_vector_to_json(vec),
        "linear": linear.to_json(),
        "quadratic": quadratic.to_json(),
    }
    code = max(_verdict_code(linear), _verdict_code(quadratic))
    return entry, code


def _cmd_cascade(args: argparse.Namespace) -> tuple[dict, int]:
    if args.example is not None:
        if args.input is not None:
            raise DocumentError(args.input, "give either a document or --example, not both")
        return _run_example(args.example, args)
    if args.input is None:
        raise DocumentError("cascade", "a document path or --example is required")
    doc = load_document(args.input)
    todd = _require_todd(doc, args.input)
    results = []
    code = EXIT_OK
    for i, E in enumerate(doc.sheaves):
        vec = coefficients(E, todd, doc.options.orientation)
        entry, entry_code = _cascade_result(vec, doc.options.genuine_stability)
        entry["sheaf"] = _sheaf_name(E, i)
        results.append(entry)
        code = max(code, entry_code)
    out = {
        "command": "cascade",
        "ring": doc.ring_label,
        "orientation": doc.options.orientation,
        "genuine_stability": doc.options.genuine_stability,
        "results": results,
    }
    return out, code


def _cmd_hn(args: argparse.Namespace) -> tuple[dict, int]:
    doc = load_document(args.input)
    results = []
    for i, poset in enumerate(doc.posets):
        try:
            filtration = hn_filtration(poset)
        except ValueError as exc:
            raise DocumentError(f"{args.input}.posets[{i}]", str(exc)) from exc
        results.append(
            {
                "poset": i,
                "elements": len(poset),
                "filtration": filtration.to_json(),
                "problems": filtration.validate(),
            }
        )
    out = {"command": "hn", "results": results}
    return out, EXIT_OK


def _cmd_abel_check(args: argparse.Namespace) -> tuple[dict, int]:
    doc = load_document(args.input)
    results = []
    code = EXIT_OK
    for i, factors in enumerate(doc.factor_vectors):
        try:
            report = abel_chain_check(factors, doc.options.t)
        except ValueError as exc:
            raise DocumentError(f"{args.input}.factor_vectors[{i}]", str(exc)) from exc
        results.append(
            {
                "factor_vector": i,
                "factors": [list(q.to_tuple()) for q in factors],
                "report": report.to_json(),
            }
        )
        if not report.ok:
            code = EXIT_VIOLATED
    out = {"command": "abel-check", "t": format_rational(Fraction(doc.options.t)), "results": results}
    return out, code


def _cmd_slope_equiv(args: argparse.Namespace) -> tuple[dict, int]:
    doc = load_document(args.input)
    t, report = slope_equivalence(doc.ring.n, doc.ring.r, doc.options.m1, doc.options.m2, doc.ring)
    out = {
        "command": "slope-equiv",
        "ring": doc.ring_label,
        "n": doc.ring.n,
        "r": doc.ring.r,
        "m1": doc.options.m1,
        "m2": doc.options.m2,
        "report": report.to_json(),
    }
    return out, EXIT_OK if report.ok else EXIT_VIOLATED


# -- built-in examples -------------------------------------------------------------


def _example_p1xp1_line_bundles(args: argparse.Namespace) -> tuple[dict, int]:
    span = args.span
    ring, todd = build_preset("proj_product", n=1, r=1)
    h1 = ring.basis_element("h1")
    h2 = ring.basis_element("h2")
    h1h2 = ring.basis_element("h1h2")
    results = []
    code = EXIT_OK
    for a in range(-span, span + 1):
        for b in range(-span, span + 1):
            E = SheafData(
                ring=ring,
                ch=(ring.one(), h1.scale(a) + h2.scale(b), h1h2.scale(a * b)),
                name=f"O({a},{b})",
            )
            vec = coefficients(E, todd)
            entry, entry_code = _cascade_result(vec, genuine_stability=False)
            entry["sheaf"] = E.name
            entry["D_0"] = format_rational(vec.b[1] * vec.a[0] - vec.b[0] * vec.a[1])
            results.append(entry)
            code = max(code, entry_code)
    out = {
        "command": "example",
        "example": "p1xp1-line-bundles",
        "ring": "proj_product(n=1, r=1)",
        "span": span,
        "results": results,
    }
    return out, code


def _example_curve_x_elliptic(args: argparse.Namespace) -> tuple[dict, int]:
    rank = parse_rational(args.rank)
    n1 = parse_rational(args.n1)
    n2 = parse_rational(args.n2)
    v = parse_rational(args.v)
    delta_sq = parse_rational(args.delta_sq)
    try:
        ring, todd = build_preset("curve_product", g_x=0, delta_sq=delta_sq, deg_h1=1, deg_h2=1)
    except ValueError as exc:
        raise DocumentError("curve-x-elliptic.delta-sq", str(exc)) from exc

    ch1 = ring.basis_element("f1").scale(n1) + ring.basis_element("f2").scale(n2) + ring.basis_element("delta")
    E = SheafData(
        ring=ring,
        ch=(ring.one().scale(rank), ch1, ring.basis_element("pt").scale(v)),
        name="E",
    )
    vec = coefficients(E, todd)
    d0 = vec.b[1] * vec.a[0] - vec.b[0] * vec.a[1]
    direct = n1 * n2 - rank * v
    delta_part = ch1.component_of_bidegree(Fraction(1, 2), Fraction(1, 2))
    bogomolov = (ring.integrate(ch1 * ch1) - ring.integrate(delta_part * delta_part) - 2 * rank * v) / 2
    entry, code = _cascade_result(vec, genuine_stability=False)
    entry["sheaf"] = E.name
    out = {
        "command": "example",
        "example": "curve-x-elliptic",
        "ring": "curve_product(g_x=0, delta_sq=%s, deg_h1=1, deg_h2=1)" % format_rational(delta_sq),
        "parameters": {
            "rank": format_rational(rank),
            "n1": format_rational(n1),
            "n2": format_rational(n2),
            "v": format_rational(v),
            "delta_sq": format_rational(delta_sq),
        },
        "identity": {
            "D_0": format_rational(d0),
            "n1*n2 - rank*v": format_rational(direct),
            "(ch1^2 - delta^2 - 2 ch0 ch2)/2": format_rational(bogomolov),
            "ok": d0 == direct == bogomolov,
        },
        "results": [entry],
    }
    if not (d0 == direct == bogomolov):
        code = max(code, EXIT_VIOLATED)
    return out, code


def _example_binomial_identities(args: argparse.Namespace) -> tuple[dict, int]:
    results = []
    code = EXIT_OK
    for n in range(1, 4):
        for r in range(1, 4):
            ring, _ = build_preset("proj_product", n=n, r=r)
            for m1 in range(1, 4):
                for m2 in range(1, 4):
                    t, report = slope_equivalence(n, r, m1, m2, ring)
                    results.append(
                        {
                            "n": n,
                            "r": r,
                            "m1": m1,
                            "m2": m2,
                            "t": format_rational(t),
                            "ok": report.ok,
                        }
                    )
                    if not report.ok:
                        code = EXIT_VIOLATED
    out = {"command": "example", "example": "binomial-identities", "results": results}
    return out, code


_EXAMPLES: dict[str, Callable[[argparse.Namespace], tuple[dict, int]]] = {
    "p1xp1-line-bundles": _example_p1xp1_line_bundles,
    "curve-x-elliptic": _example_curve_x_elliptic,
    "binomial-identities": _example_binomial_identities,
}


def _run_example(name: str, args: argparse.Namespace) -> tuple[dict, int]:
    if name not in _EXAMPLES:
        raise DocumentError(f"example.{name}", f"unknown example; choose from {sorted(_EXAMPLES)}")
    return _EXAMPLES[name](args)


def _cmd_example(args: argparse.Namespace) -> tuple[dict, int]:
    return _run_example(args.name, args)


# -- rendering -----------------------------------------------------------------


def _fmt(value: str, float_mode: bool) -> str:
    if not float_mode:
        return value
    try:
        q = parse_rational(value)
    except ValueError:
        return value
    if q.denominator == 1:
        return value
    return f"{value} (~{float(q):.6g})"


def _render_verdict(v: Mapping) -> str:
    status = v["status"]
    if status == "violated":
        return f"VIOLATED at index {v['index']} (value {v['offending_value']})"
    if status == "holds_with_equality":
        return f"HOLDS_WITH_EQUALITY depth={v['depth']}"
    return status.upper()


def render_text(report: Mapping, float_mode: bool = False) -> str:
    lines: list[str] = []
    command = report.get("command", "?")
    header = command if "example" not in report else f"{command} {report['example']}"
    lines.append(f"stabkit {header}")
    for key in ("ring", "orientation", "t", "n", "r", "m1", "m2", "span"):
        if key in report:
            lines.append(f"  {key}: {report[key]}")

    if command == "validate-ring":
        lines.append(f"  ok: {report['ok']}")
        for failure in report["failures"]:
            lines.append(f"  failure: {failure}")
        return "\n".join(lines) + "\n"

    if "identity" in report:
        lines.append("  identity check:")
        for key, value in report["identity"].items():
            lines.append(f"    {key} = {_fmt(str(value), float_mode)}")

    if "report" in report:
        for key, value in sorted(report["report"].items()):
            lines.append(f"  {key}: {value}")

    results = report.get("results", [])
    if results and command == "hilbert":
        width = max(len(entry["sheaf"]) for entry in results)
        for entry in results:
            z = entry["z_s"]
            lines.append(
                f"  {entry['sheaf']:<{width}}  L(n) = {entry['display']}"
                f"  Z_S = {_fmt(z['re'], float_mode)} + {_fmt(z['im'], float_mode)} i"
            )
    elif results and command in ("cascade", "coeffs", "example"):
        named = [entry for entry in results if "sheaf" in entry]
        if named:
            width = max(len(entry["sheaf"]) for entry in named)
            for entry in named:
                parts = [f"  {entry['sheaf']:<{width}}"]
                if "coefficients" in entry:
                    coeffs = entry["coefficients"]
                    parts.append(
                        "a=[" + ", ".join(_fmt(x, float_mode) for x in coeffs["a"]) + "]"
                    )
                    parts.append(
                        "b=[" + ", ".join(_fmt(x, float_mode) for x in coeffs["b"]) + "]"
                    )
                if "D_0" in entry:
                    parts.append(f"D_0={_fmt(entry['D_0'], float_mode)}")
                if "linear" in entry:
                    parts.append(f"linear={_render_verdict(entry['linear'])}")
                if "quadratic" in entry:
                    parts.append(f"quadratic={_render_verdict(entry['quadratic'])}")
                lines.append("  ".join(parts))
        else:
            for entry in results:
                lines.append(f"  {json.dumps(entry, sort_keys=True)}")
    elif results and command == "hn":
        for entry in results:
            filtration = entry["filtration"]
            factor_bits = ", ".join(
                f"(({f['charge']['re']})+({f['charge']['im']})i, slope {f['slope']}, {{{', '.join(f['members'])}}})"
                for f in filtration["factors"]
            )
            lines.append(
                f"  poset {entry['poset']} ({entry['elements']} elements): "
                f"{len(filtration['factors'])} factor(s): {factor_bits}"
            )
            if filtration["semistable"]:
                lines.append("    semistable")
            for problem in entry["problems"]:
                lines.append(f"    problem: {problem}")
    elif results and command == "abel-check":
        for entry in results:
            rep = entry["report"]
            lines.append(
                f"  factor_vector {entry['factor_vector']}: ok={rep['ok']}"
                f" lhs={rep['lhs']} rhs={rep['rhs']}"
            )
            for failure in rep["hypothesis_failures"]:
                lines.append(f"    {failure}")
    elif results:
        for entry in results:
            lines.append(f"  {json.dumps(entry, sort_keys=True)}")

    if command == "example" and report.get("example") == "binomial-identities":
        ok = all(entry["ok"] for entry in results)
        lines.append(f"  all identities verified: {ok}")

    return "\n".join(lines) + "\n"


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabkit",
        description="Exact checks of stability inequality cascades on product varieties.",
    )
    parser.add_argument("--json", action="store_true", help="emit the machine JSON report")
    parser.add_argument("--out", metavar="FILE", help="also write the JSON report to FILE")
    parser.add_argument(
        "--float", action="store_true", dest="float_mode",
        help="append decimal approximations in the human report (display only)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-ring", help="validate a ring JSON file")
    p.add_argument("input")

    for name, doc in (
        ("hilbert", "complexified Hilbert polynomials of the document's sheaves"),
        ("coeffs", "coefficient arrays of the document's sheaves"),
        ("hn", "HN filtrations of the document's posets"),
        ("abel-check", "Abel-summation chain checks of the document's factor vectors"),
        ("slope-equiv", "binomial identities for the document's ring and (m1, m2)"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("input")

    p = sub.add_parser("cascade", help="linear and quadratic cascades of the document's sheaves")
    p.add_argument("input", nargs="?")
    p.add_argument("--example", choices=sorted(_EXAMPLES))

    p = sub.add_parser("example", help="run a built-in reproduction scenario")
    p.add_argument("name", choices=sorted(_EXAMPLES))

    for p in sub.choices.values():
        if p.prog.endswith("cascade") or p.prog.endswith("example"):
            p.add_argument("--rank", default="2", help="curve-x-elliptic: ch_0")
            p.add_argument("--n1", default="1", help="curve-x-elliptic: ch_1 . l2")
            p.add_argument("--n2", default="1", help="curve-x-elliptic: ch_1 . l1")
            p.add_argument("--v", default="0", help="curve-x-elliptic: ch_2")
            p.add_argument("--delta-sq", dest="delta_sq", default="0",
                           help="curve-x-elliptic: delta^2 (must be <= 0)")
            p.add_argument("--span", type=int, default=2,
                           help="p1xp1-line-bundles: check O(a,b) for |a|,|b| <= span")

    return parser


_COMMANDS = {
    "validate-ring": _cmd_validate_ring,
    "hilbert": _cmd_hilbert,
    "coeffs": _cmd_coeffs,
    "cascade": _cmd_cascade,
    "hn": _cmd_hn,
    "abel-check": _cmd_abel_check,
    "slope-equiv": _cmd_slope_equiv,
    "example": _cmd_example,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = _COMMANDS[args.command](args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    report["exit_code"] = code
    serialized = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(serialized + "\n")
    if args.json:
        print(serialized)
    else:
        print(render_text(report, args.float_mode), end="")
    return code


if __name__ == "__main__":
    sys.exit(main())
