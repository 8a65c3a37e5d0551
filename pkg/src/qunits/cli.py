"""Command-line front end.

Every subcommand builds a plain payload plus one or more tables, and the same
numbers are then rendered as an aligned text table, JSON or CSV. Floats are
rounded to 12 significant digits before rendering so the three formats carry
identical values and repeated runs are byte-identical.

Exit codes: 0 success, 1 usage, 2 state-file parse error, 3 validation or
resource error, 4 ``verify --strict`` with a claim that was not reproduced.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .claims import NOT_REPRODUCED, structural_checks, verify_claims_three_qubit
from .entanglement import (
    dicke_entropy_profile,
    generate_mes_basis,
    pairwise_concurrences,
    product_structure,
    single_particle_entropies,
    spin_flip_concurrence,
)
from .errors import InvalidArgumentError, QunitError
from .partitions import conjugacy_classes, decomposition_table
from .schur_weyl import MAX_SYMMETRIZER_N, build_decomposition, couple_spins, sector_projections
from .statespace import StateVector, SystemShape, format_label, normalize

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID, EXIT_STRICT = 0, 1, 2, 3, 4
SIG_DIGITS = 12
NORM_WARN_TOL = 1e-6

CONVENTIONS = {
    "labels": "1-based digits, particle 1 leftmost",
    "qubit_levels": "level 1 is m=+1/2",
    "symmetrizer_phase": "first non-zero amplitude real and positive",
    "coupling_phase": "Condon-Shortley, particles coupled right to left",
    "entropy_units": "bits",
    "float_digits": SIG_DIGITS,
}


class StateFileError(Exception):
    """Malformed state-file syntax (exit 2)."""


def _num(x: float) -> float:
    r = float(format(float(x), f".{SIG_DIGITS}g"))
    return 0.0 if r == 0 else r


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(_num(x), f".{SIG_DIGITS}g")
    return str(x)


def _jsonable(x: Any) -> Any:
    """Recursively convert payload values to JSON types with rounded floats."""
    if isinstance(x, dict):
        return {_key(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return _num(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _num(x.real), "im": _num(x.imag)}
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if x is None:
        return None
    return str(x)


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(p) for p in k)
    return str(k)


@dataclass
class Table:
    title: str
    headers: list[str]
    rows: list[list[Any]]


@dataclass
class Result:
    payload: dict[str, Any]
    tables: list[Table]
    exit_code: int = EXIT_OK
    warnings: list[str] = field(default_factory=list)


# --- state files ----------------------------------------------------------


def _load_json(source: str) -> Any:
    text = source
    if not source.lstrip().startswith("{"):
        try:
            text = sys.stdin.read() if source == "-" else Path(source).read_text()
        except OSError as exc:
            raise StateFileError(f"cannot read state file {source!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"state file is not valid JSON: {exc}") from exc


def _int_field(obj: dict, name: str) -> int:
    if name not in obj:
        raise StateFileError(f"state file is missing {name!r}")
    val = obj[name]
    if isinstance(val, bool) or not isinstance(val, int):
        raise StateFileError(f"{name!r} must be an integer, got {val!r}")
    return val


def _real_field(term: dict, name: str) -> float:
    val = term.get(name, 0.0)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise StateFileError(f"term field {name!r} must be a number, got {val!r}")
    return float(val)


def parse_state_file(source: str) -> tuple[StateVector, bool]:
    """Read a state file (path, ``-`` for stdin, or inline JSON).

    Returns the normalized state and whether the input norm was off by more
    than 1e-6. Syntax problems raise :class:`StateFileError`; out-of-range
    digits, an empty term list or a zero vector raise library errors.
    """
    data = _load_json(source)
    if not isinstance(data, dict):
        raise StateFileError("state file must be a JSON object")
    N, n = _int_field(data, "N"), _int_field(data, "n")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise StateFileError("'terms' must be a list")
    parsed = []
    for t in terms:
        if not isinstance(t, dict) or not isinstance(t.get("digits"), list):
            raise StateFileError(f"each term needs a 'digits' list, got {t!r}")
        digits = t["digits"]
        if any(isinstance(d, bool) or not isinstance(d, int) for d in digits):
            raise StateFileError(f"digits must be integers, got {digits!r}")
        parsed.append((complex(_real_field(t, "re"), _real_field(t, "im")), digits))
    shape = SystemShape(N, n)
    if not parsed:
        raise InvalidArgumentError("state file has no terms")
    raw = StateVector.from_terms(shape, parsed)
    v = normalize(raw)
    return v, abs(raw.norm() - 1.0) > NORM_WARN_TOL


# --- payload helpers ------------------------------------------------------


def _terms_payload(v: StateVector) -> list[dict[str, Any]]:
    return [{"digits": list(lab), "re": a.real, "im": a.imag} for lab, a in v.terms()]


def _term_rows(prefix: list[Any], v: StateVector) -> list[list[Any]]:
    return [prefix + [format_label(lab), a.real, a.imag] for lab, a in v.terms()]


def _frac(x: Fraction | None) -> str:
    return "" if x is None else str(x)


# --- commands -------------------------------------------------------------


def cmd_decompose(N: int, n: int) -> Result:
    rows = decomposition_table(N, n)
    classes = conjugacy_classes(N)
    table = [[str(r.lam), r.f, r.d, r.product] for r in rows]
    total = sum(r.product for r in rows)
    payload = {
        "rows": [{"lambda": list(r.lam), "f": r.f, "d": r.d, "f_times_d": r.product} for r in rows],
        "total": total,
        "n_pow_N": n**N,
        "sum_f_squared": sum(r.f**2 for r in rows),
        "classes": [{"cycle_type": list(c.cycle_type), "size": c.size} for c in classes],
    }
    return Result(
        payload,
        [
            Table("decomposition", ["lambda", "f", "d", "f*d"], table + [["total", "", "", total]]),
            Table("classes", ["cycle_type", "size"], [[str(c.cycle_type), c.size] for c in classes]),
        ],
    )


def cmd_classes(N: int) -> Result:
    classes = conjugacy_classes(N)
    payload = {
        "classes": [{"cycle_type": list(c.cycle_type), "size": c.size} for c in classes],
        "total": sum(c.size for c in classes),
    }
    return Result(payload, [Table("classes", ["cycle_type", "size"], [[str(c.cycle_type), c.size] for c in classes])])


def cmd_basis(N: int, n: int, coupled: bool) -> Result:
    if coupled:
        if n != 2:
            raise InvalidArgumentError("--coupled needs n = 2")
        sectors = couple_spins(N)
    else:
        sectors = build_decomposition(SystemShape(N, n))
    states, rows = [], []
    for sec in sectors:
        for mem in sec.members:
            label = f"|{mem.j},{mem.m};{sec.d}>" if coupled else f"{sec.lam}:{sec.d}:{format_label(mem.weight)}"
            states.append(
                {
                    "label": label,
                    "lambda": list(sec.lam),
                    "d": sec.d,
                    "weight": list(mem.weight),
                    "j": _frac(mem.j),
                    "m": _frac(mem.m),
                    "tableau": "" if sec.tableau is None else str(sec.tableau),
                    "terms": _terms_payload(mem.state),
                }
            )
            rows += _term_rows([label, str(sec.lam), sec.d], mem.state)
    payload = {"N": N, "n": n, "coupled": coupled, "count": len(states), "states": states}
    return Result(payload, [Table("basis", ["state", "lambda", "d", "digits", "re", "im"], rows)])


def cmd_mes(N: int) -> Result:
    basis = generate_mes_basis(N)
    states, rows = [], []
    for s in basis.states:
        states.append(
            {
                "label": s.label,
                "sign": s.sign,
                "sources": [{"j": str(j), "m": str(m), "d": d} for j, m, d in s.sources],
                "terms": _terms_payload(s.state),
            }
        )
        rows += _term_rows([s.label, s.sign], s.state)
    q = basis.matrix()
    gram_err = float(np.max(np.abs(q.conj().T @ q - np.eye(q.shape[1]))))
    payload = {"N": N, "count": len(states), "max_gram_error": gram_err, "states": states}
    return Result(payload, [Table("mes", ["state", "sign", "digits", "re", "im"], rows)])


def cmd_measure(source: str, bipartitions: str | None) -> Result:
    v, warn = parse_state_file(source)
    warnings = ["input was not normalized; renormalized"] if warn else []
    tables = []
    rep = single_particle_entropies(v, bipartitions)
    entropy = {"per_particle": rep.per_particle, "bipartitions": {_key(k): s for k, s in rep.bipartitions.items()}}
    ent_rows = [[str(k), e] for k, e in enumerate(rep.per_particle, start=1)]
    ent_rows += [["{" + _key(k) + "}", s] for k, s in rep.bipartitions.items()]
    tables.append(Table("entropy", ["subset", "entropy_bits"], ent_rows))

    concurrence: dict[str, Any] = {}
    if v.n == 2:
        concurrence["spin_flip"] = spin_flip_concurrence(v)
        conc_rows = [["spin_flip", concurrence["spin_flip"]]]
        if v.N >= 2:
            pw = pairwise_concurrences(v)
            concurrence["pairwise"] = {_key(k): c for k, c in pw.items()}
            conc_rows += [[f"wootters({_key(k)})", c] for k, c in pw.items()]
        tables.append(Table("concurrence", ["measure", "value"], conc_rows))

    sectors: dict[str, Any]
    if v.n < 2 or v.N > MAX_SYMMETRIZER_N:
        sectors = {"skipped": f"needs n >= 2 and N <= {MAX_SYMMETRIZER_N}"}
    else:
        proj = sector_projections(v, build_decomposition(v.shape))
        sectors = {f"{lam}:{d}": w for (lam, d), w in proj.items()}
        tables.append(Table("sectors", ["lambda", "d", "weight"], [[str(lam), d, w] for (lam, d), w in proj.items()]))

    ps = product_structure(v)
    structure = [{"block": list(b), "terms": _terms_payload(f)} for b, f in zip(ps.blocks, ps.factors)]
    ps_rows = []
    for b, f in zip(ps.blocks, ps.factors):
        ps_rows += _term_rows(["{" + _key(b) + "}"], f)
    tables.append(Table("product_structure", ["block", "digits", "re", "im"], ps_rows))

    payload = {
        "N": v.N,
        "n": v.n,
        "renormalized": warn,
        "entropy": entropy,
        "concurrence": concurrence,
        "sector_projections": sectors,
        "product_structure": structure,
    }
    return Result(payload, tables, warnings=warnings)


def cmd_dicke_profile(N: int) -> Result:
    prof = dicke_entropy_profile(N)
    payload = {"N": N, "profile": [{"m": str(m), "entropy": e} for m, e in prof.items()]}
    return Result(payload, [Table("dicke_profile", ["m", "entropy_bits"], [[str(m), e] for m, e in prof.items()])])


def _conv_text(conv: dict[str, Any]) -> str:
    return "; ".join(f"{k}={v}" for k, v in conv.items())


def cmd_verify(strict: bool) -> Result:
    claims = verify_claims_three_qubit()
    checks = structural_checks()
    claim_payload, summary, sweep_rows = [], [], []
    for c in claims:
        claim_payload.append(
            {
                "id": c.claim_id,
                "statement": c.statement,
                "status": c.status,
                "best": {"convention": c.best.convention, "residual": c.best.residual, "evidence": c.best.evidence},
                "sweep": [
                    {"convention": r.convention, "residual": r.residual, "passed": r.passed, "evidence": r.evidence}
                    for r in c.sweep
                ],
            }
        )
        summary.append([c.claim_id, c.status, c.best.residual, _conv_text(c.best.convention)])
        sweep_rows += [[c.claim_id, _conv_text(r.convention), r.residual, r.passed] for r in c.sweep]
    check_payload = [{"name": s.name, "passed": s.passed, "detail": s.detail} for s in checks]
    code = EXIT_OK
    if not all(s.passed for s in checks):
        code = EXIT_INVALID
    elif strict and any(c.status == NOT_REPRODUCED for c in claims):
        code = EXIT_STRICT
    payload = {"strict": strict, "claims": claim_payload, "structural": check_payload}
    return Result(
        payload,
        [
            Table("claims", ["claim", "status", "best_residual", "best_convention"], summary),
            Table("sweep", ["claim", "convention", "residual", "passed"], sweep_rows),
            Table("structural", ["check", "passed", "detail"], [[s.name, s.passed, s.detail] for s in checks]),
        ],
        exit_code=code,
    )


# --- rendering ------------------------------------------------------------


def _render_text(command: str, result: Result) -> str:
    out = [f"# {command} (qunits {__version__})"]
    for w in result.warnings:
        out.append(f"# warning: {w}")
    for t in result.tables:
        cells = [t.headers] + [[_fmt(c) for c in row] for row in t.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(t.headers))]
        out.append("")
        out.append(f"[{t.title}]")
        for r in cells:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(out) + "\n"


def _render_csv(result: Result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for i, t in enumerate(result.tables):
        if i:
            w.writerow([])
        w.writerow(["section"] + t.headers)
        for row in t.rows:
            w.writerow([t.title] + [_fmt(c) for c in row])
    return buf.getvalue()


def render(command: str, inputs: dict[str, Any], result: Result, fmt: str) -> str:
    if fmt == "json":
        envelope = {
            "command": command,
            "input": inputs,
            "payload": result.payload,
            "warnings": result.warnings,
            "version": __version__,
            "conventions": CONVENTIONS,
        }
        return json.dumps(_jsonable(envelope), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    if fmt == "csv":
        return _render_csv(result)
    return _render_text(command, result)


# --- argument parsing -----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS, help="write the report here instead of stdout")

    p = _Parser(prog="qunits", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"qunits {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("decompose", parents=[common], help="symmetric/unitary duality table")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s = sub.add_parser("classes", parents=[common], help="conjugacy classes of S_N")
    s.add_argument("--N", type=int, required=True)
    s = sub.add_parser("basis", parents=[common], help="symmetry-adapted orthonormal basis")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--coupled", action="store_true", help="qubit |j,m;d> basis by spin coupling")
    s = sub.add_parser("mes", parents=[common], help="entangled basis from conjugate pairs")
    s.add_argument("--N", type=int, required=True)
    s = sub.add_parser("measure", parents=[common], help="entanglement report for a state file")
    s.add_argument("--state", required=True, help="JSON file, '-' for stdin, or inline JSON")
    s.add_argument("--bipartitions", choices=["all", "singles"], default=None)
    s = sub.add_parser("dicke-profile", parents=[common], help="entropy across the symmetric multiplet")
    s.add_argument("--N", type=int, required=True)
    s = sub.add_parser("verify", parents=[common], help="check printed claims and structural identities")
    s.add_argument("--strict", action="store_true", help="exit 4 if any claim is not reproduced")
    return p


def _dispatch(args: argparse.Namespace) -> Result:
    c = args.command
    if c == "decompose":
        return cmd_decompose(args.N, args.n)
    if c == "classes":
        return cmd_classes(args.N)
    if c == "basis":
        return cmd_basis(args.N, args.n, args.coupled)
    if c == "mes":
        return cmd_mes(args.N)
    if c == "measure":
        return cmd_measure(args.state, args.bipartitions)
    if c == "dicke-profile":
        return cmd_dicke_profile(args.N)
    return cmd_verify(args.strict)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "text")
    output = getattr(args, "output", None)
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format", "output")}
    try:
        result = _dispatch(args)
    except StateFileError as exc:
        print(f"qunits: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (QunitError, ValueError, ArithmeticError) as exc:
        print(f"qunits: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for w in result.warnings:
        print(f"qunits: warning: {w}", file=sys.stderr)
    text = render(args.command, inputs, result, fmt)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
