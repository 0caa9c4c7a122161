"""Command line front end: JSON jobs in, JSON reports out.

Exit status: 0 success, 2 engine or input error, 3 a verification failed.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field as dc_field
from typing import Any

from . import __version__
from .bass import ScanBoxError
from .cech import AmbientQuotient, all_cohomology_dims, annihilator, cohomological_dimension, windowed_module
from .checks import ERROR, FAIL, verify_all
from .corpus import KINDS, random_ideal
from .linalg import ScalarField
from .lyubeznik import euler_characteristic, is_trivial, lyubeznik_table, pure_dim2_shape, shape_matches_iscm
from .monomial import IdealError, MonomialIdeal, PolyRingContext
from .reduction import reduce
from .seqcm import dimension_filtration, is_partially_scm, level_report

__all__ = ["JobSpec", "JobError", "parse_job", "serialize_job", "run", "random_instance", "main", "COMMANDS"]

COMMANDS = ("lyubeznik", "cd", "ann", "reduce", "seqcm", "filtration", "shapes", "verify-all")
WORKERS_ENV = "LOCCOH_WORKERS"
_KEYS = {"vars", "field", "ideal", "quotient", "cmd", "options"}
_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")

EXIT_OK, EXIT_ENGINE, EXIT_VERIFY = 0, 2, 3


class JobError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)

    def to_json(self) -> dict:
        return {"error": "JobError", "message": self.message, "line": self.line, "column": self.column}


@dataclass
class JobSpec:
    vars: list[str]
    ideal: list[str]
    cmd: str
    field: str = "Q"
    quotient: list[str] = dc_field(default_factory=list)
    options: dict[str, Any] = dc_field(default_factory=dict)

    @property
    def ctx(self) -> PolyRingContext:
        return PolyRingContext(tuple(self.vars), ScalarField.parse(self.field))

    def ambient(self) -> AmbientQuotient:
        return AmbientQuotient(MonomialIdeal.from_strings(self.ctx, self.quotient))

    def ideal_obj(self) -> MonomialIdeal:
        return MonomialIdeal.from_strings(self.ctx, self.ideal)

    def to_json(self) -> dict:
        out = {"vars": list(self.vars), "field": self.field, "ideal": list(self.ideal), "cmd": self.cmd}
        if self.quotient:
            out["quotient"] = list(self.quotient)
        if self.options:
            out["options"] = dict(self.options)
        return out


def serialize_job(spec: JobSpec) -> str:
    return json.dumps(spec.to_json(), indent=2)


def _locate(text: str, needle: str) -> tuple[int | None, int | None]:
    """1-based line and column of the first quoted occurrence of ``needle``."""
    idx = text.find(json.dumps(needle))
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _string_list(data: dict, key: str, text: str, required: bool = True) -> list[str]:
    if key not in data:
        if required:
            raise JobError(f"missing key {key!r}")
        return []
    val = data[key]
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise JobError(f"{key!r} must be an array of strings", *_locate(text, key))
    return list(val)


def parse_job(text: str) -> JobSpec:
    """Validate a JSON job; errors carry a line and column where possible."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise JobError("job must be a JSON object", 1, 1)
    extra = set(data) - _KEYS
    if extra:
        k = sorted(extra)[0]
        raise JobError(f"unknown key {k!r}", *_locate(text, k))
    names = _string_list(data, "vars", text)
    if not names:
        raise JobError("need at least one variable", *_locate(text, "vars"))
    for v in names:
        if not _NAME.match(v):
            raise JobError(f"bad variable name {v!r}", *_locate(text, v))
    if len(set(names)) != len(names):
        raise JobError("variable names must be distinct", *_locate(text, "vars"))
    fld_text = data.get("field", "Q")
    if not isinstance(fld_text, str):
        raise JobError("'field' must be a string", *_locate(text, "field"))
    try:
        fld = ScalarField.parse(fld_text)
    except ValueError as exc:
        raise JobError(str(exc), *_locate(text, fld_text)) from None
    cmd = data.get("cmd")
    if cmd not in COMMANDS:
        raise JobError(f"unknown command {cmd!r}; choose from {', '.join(COMMANDS)}",
                       *(_locate(text, cmd) if isinstance(cmd, str) else _locate(text, "cmd")))
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise JobError("'options' must be an object", *_locate(text, "options"))
    ideal = _string_list(data, "ideal", text)
    quotient = _string_list(data, "quotient", text, required=False)
    ctx = PolyRingContext(tuple(names), fld)
    for g in ideal + quotient:
        try:
            ctx.parse_monomial(g)
        except IdealError as exc:
            raise JobError(str(exc), *_locate(text, g)) from None
    return JobSpec(names, ideal, cmd, str(fld), quotient, options)


def random_instance(kind: str, n: int, seed: int, cmd: str = "verify-all", fld: str = "Q") -> JobSpec:
    ideal = random_ideal(kind, n, seed)
    return JobSpec(list(ideal.ctx.names), ideal.to_strings(), cmd, fld)


# ---------------------------------------------------------------------------
# dispatch


def _needs_polynomial(amb: AmbientQuotient, what: str) -> None:
    if not amb.is_polynomial:
        raise IdealError(f"{what} is only available over a polynomial ring")


def _scan_box(spec: JobSpec, override):
    box = override if override is not None else spec.options.get("scan_box")
    return tuple(box) if box is not None else None


def _run_cmd(spec: JobSpec, workers: int, scan_box, seed: int) -> tuple[dict, bool]:
    """Results and whether every verification passed."""
    amb, ideal = spec.ambient(), spec.ideal_obj()
    fld = amb.fld
    cmd = spec.cmd
    if cmd == "lyubeznik":
        _needs_polynomial(amb, "the Lyubeznik table")
        t = lyubeznik_table(ideal, fld, scan_box=scan_box, workers=workers)
        return {"table": t.to_json(), "text": t.render(), "euler": euler_characteristic(t)}, True
    if cmd == "cd":
        dims = all_cohomology_dims(amb, ideal, fld)
        return {"cd": max(dims), "nonzero": {str(i): d for i, d in sorted(dims.items())}}, True
    if cmd == "ann":
        i = spec.options.get("index")
        i = cohomological_dimension(amb, ideal, fld) if i is None else int(i)
        mod = windowed_module(amb, ideal, i, fld, workers=workers)
        if mod.is_zero():
            return {"index": i, "zero_module": True, "annihilator": ["1"]}, True
        return {"index": i, "annihilator": annihilator(mod).to_strings(),
                "pieces": {",".join(map(str, b)): d for b, d in sorted(mod.nonzero_pieces().items())}}, True
    if cmd == "reduce":
        return reduce(amb, ideal, fld).to_json(), True
    if cmd in ("seqcm", "filtration"):
        _needs_polynomial(amb, "the dimension filtration")
        filt = dimension_filtration(ideal)
        if cmd == "filtration":
            return filt.to_json(), True
        levels = [level_report(filt, k, fld) for k in range(filt.d + 1)]
        out = {"d": filt.d, "levels": levels,
               "sequentially_cm": is_partially_scm(ideal, 0, fld, filt)}
        lvl = spec.options.get("level")
        if lvl is not None:
            out["level"] = int(lvl)
            out["partially_scm"] = is_partially_scm(ideal, int(lvl), fld, filt)
        return out, True
    if cmd == "shapes":
        _needs_polynomial(amb, "the Lyubeznik table")
        t = lyubeznik_table(ideal, fld, scan_box=scan_box, workers=workers)
        out = {"table": t.to_json(), "text": t.render(), "trivial": is_trivial(t),
               "iscm_shape": {str(i): shape_matches_iscm(t, i) for i in range(t.d + 1)}}
        if t.d == 2:
            out["pure_dim2_shape"] = pure_dim2_shape(t)
        return out, True
    if cmd == "verify-all":
        res = verify_all(amb, ideal, fld, seed=seed, scan_box=scan_box, workers=workers)
        if any(r.status == ERROR for r in res):
            bad = next(r for r in res if r.status == ERROR)
            raise RuntimeError(f"check {bad.name!r} raised: {bad.detail}")
        return {"checks": [r.to_json() for r in res]}, not any(r.status == FAIL for r in res)
    raise JobError(f"unknown command {cmd!r}")


def run(spec: JobSpec, workers: int | None = None, scan_box=None, seed: int = 0) -> tuple[dict, int]:
    """Execute a job; returns the report and the exit status."""
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    report: dict[str, Any] = {
        "command": spec.cmd,
        "job": spec.to_json(),
        "field": spec.field,
        "engine_version": __version__,
        "seed": seed,
    }
    start = time.perf_counter()
    try:
        results, ok = _run_cmd(spec, max(1, workers), _scan_box(spec, scan_box), seed)
    except (IdealError, ScanBoxError, ValueError, RuntimeError, AssertionError, ArithmeticError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report["timing_s"] = round(time.perf_counter() - start, 6)
        return report, EXIT_ENGINE
    report["results"] = results
    report["status"] = "ok" if ok else "verification failed"
    report["timing_s"] = round(time.perf_counter() - start, 6)
    return report, EXIT_OK if ok else EXIT_VERIFY


def _text_report(report: dict) -> str:
    if "error" in report:
        return f"error: {report['error']['type']}: {report['error']['message']}"
    res = report["results"]
    cmd = report["command"]
    lines = [f"{cmd} over {report['field']}"]
    if "text" in res:
        lines.append(res["text"])
        for k, v in res.items():
            if k not in ("text", "table"):
                lines.append(f"{k}: {v}")
    elif cmd == "verify-all":
        width = max(len(c["name"]) for c in res["checks"]) if res["checks"] else 0
        for c in res["checks"]:
            extra = f"  {c['detail']}" if c["detail"] else ""
            lines.append(f"{c['name'].ljust(width)}  {c['status'].upper()}{extra}")
    elif cmd == "reduce":
        for s in res["steps"]:
            lines.append(f"mod out {s['r']}: {s['ambient_before']} -> {s['ambient_after']}  (c = {s['c']})")
        lines.append(f"final: H^{res['c']}_({', '.join(res['final_ideal'])}) over {res['final_ambient']}")
        lines.append(f"stopped: {res['reason']}")
    else:
        lines.append(json.dumps(res, indent=2))
    return "\n".join(lines)


def _parse_box(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("scan box must look like LO,HI (for example -3,2)") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loccoh", description="Local cohomology of monomial ideals.")
    sub = ap.add_subparsers(dest="action", required=True)

    r = sub.add_parser("run", help="run a JSON job (file path or - for stdin)")
    r.add_argument("job", nargs="?", default="-")
    r.add_argument("--cmd", choices=COMMANDS, help="override the job's command")
    r.add_argument("--level", type=int, help="level for seqcm")
    r.add_argument("--field", help="override the coefficient field (Q or Fp)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--workers", type=int, default=None, help=f"worker threads (default ${WORKERS_ENV} or 1)")
    r.add_argument("--scan-box", type=_parse_box, default=None)
    r.add_argument("--text", action="store_true", help="human readable output")

    g = sub.add_parser("random", help="print a random job")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("n", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--cmd", choices=COMMANDS, default="verify-all")
    g.add_argument("--field", default="Q")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.action == "random":
        try:
            spec = random_instance(args.kind, args.n, args.seed, args.cmd, args.field)
        except ValueError as exc:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
            return EXIT_ENGINE
        print(serialize_job(spec))
        return EXIT_OK

    try:
        text = sys.stdin.read() if args.job == "-" else open(args.job, encoding="utf-8").read()
        spec = parse_job(text)
        if args.cmd:
            spec.cmd = args.cmd
        if args.level is not None:
            spec.options["level"] = args.level
        if args.field:
            spec.field = str(ScalarField.parse(args.field))
    except JobError as exc:
        print(json.dumps(exc.to_json()))
        return EXIT_ENGINE
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}))
        return EXIT_ENGINE
    report, status = run(spec, args.workers, args.scan_box, args.seed)
    print(_text_report(report) if args.text else json.dumps(report, indent=2))
    return status


if __name__ == "__main__":
    sys.exit(main())
