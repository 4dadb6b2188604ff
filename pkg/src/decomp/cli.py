"""Command line: ``decomp build | check | report | probe``.

Exit codes: 0 every theorem check passed, 1 some check failed, 2 configuration
error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import io
import json
import os
import platform
import sys
from pathlib import Path

from . import __version__
from .building import build_building
from .checks import CHECKS, run_check
from .coxeter import y_dimension_probe
from .decompositions import (decompositions, interval_sphere_probe, key_str,
                             vector_decompositions)
from .poset import BudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3

CONSTRUCTIONS = {
    "X": lambda b: decompositions(b).face_poset,
    "CB": lambda b: decompositions(b).CB,
    "Y": lambda b: decompositions(b).Y,
    "D": lambda b: decompositions(b).D,
    "OD": lambda b: decompositions(b).OD,
    "PD": lambda b: decompositions(b).PD,
    "OPD": lambda b: decompositions(b).OPD,
    "join": lambda b: decompositions(b).join_model,
    "building": lambda b: b.complex(),
    "PD(V)": lambda b: vector_decompositions(b).PD,
    "D(V)": lambda b: vector_decompositions(b).D,
    "OPD(V)": lambda b: vector_decompositions(b).OPD,
    "OD(V)": lambda b: vector_decompositions(b).OD,
    "K2": lambda b: vector_decompositions(b).K2,
    "OK2": lambda b: vector_decompositions(b).OK2,
}

DEFAULT_TYPES = ["A1", "A2", "A3", "I2(3)", "I2(4)", "I2(5)", "I2(6)"]


class ConfigError(Exception):
    pass


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _strip_volatile(obj):
    """Drop timestamp and timing fields before hashing."""
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items()
                if k not in ("timestamp", "seconds", "report_hash")}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def report_hash(report: dict) -> str:
    return sha256(canonical(_strip_volatile(report)))


def provenance(config: dict) -> dict:
    # the output path is not part of the experiment
    cfg = {k: v for k, v in config.items() if k != "out"}
    return {"config_hash": sha256(canonical(cfg)),
            "versions": {"decomp": __version__, "python": platform.python_version()},
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}


def load_config(args) -> dict:
    cfg: dict = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config: {e}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    for name in ("building", "seed", "out"):
        v = getattr(args, name, None)
        if v is not None:
            cfg[name] = v
    if getattr(args, "construct", None):
        cfg["constructions"] = args.construct
    if getattr(args, "checks", None):
        cfg["checks"] = args.checks
    budgets = cfg.get("budgets", {})
    if any(not isinstance(v, (int, float)) or v <= 0 for v in budgets.values()):
        raise ConfigError("budgets must be positive numbers")
    return cfg


def apply_memory_budget(cfg: dict) -> None:
    mb = os.environ.get("DECOMP_BUDGET_MB") or cfg.get("budgets", {}).get("memory_mb")
    if not mb:
        return
    try:
        import resource
        limit = int(float(mb) * 1024 * 1024)
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
    except (ImportError, ValueError, OSError) as e:
        raise ConfigError(f"cannot apply memory budget {mb!r}: {e}") from None


def _building(cfg: dict):
    spec = cfg.get("building")
    if not spec:
        raise ConfigError("no building given")
    try:
        return build_building(spec)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _write(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------

def cmd_build(args) -> int:
    cfg = load_config(args)
    b = _building(cfg)
    names = cfg.get("constructions") or ["building"]
    unknown = [n for n in names if n not in CONSTRUCTIONS]
    if unknown:
        raise ConfigError(f"unknown construction(s): {', '.join(unknown)}; "
                          f"known: {', '.join(CONSTRUCTIONS)}")
    objects = []
    for name in names:
        try:
            obj = CONSTRUCTIONS[name](b)
        except ValueError as e:
            raise ConfigError(f"{name}: {e}") from None
        if name == "building":
            data = json.loads(obj.to_json(lambda v: v))
            data["elements"] = list(b.labels)
        else:
            data = json.loads(obj.to_json(lambda k: key_str(b, k)))
        body = {"construction": name, "dimension": obj.dim, "size": len(obj), **data}
        body["build_hash"] = sha256(canonical(body))
        objects.append(body)
    doc = {"provenance": {**provenance(cfg), "building": b.name,
                          "budget_mb": os.environ.get("DECOMP_BUDGET_MB")},
           "objects": objects}
    _write(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", cfg.get("out"))
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = load_config(args)
    ids = cfg.get("checks") or []
    if not ids:
        raise ConfigError("no check ids given")
    bad = [c for c in ids if c not in CHECKS]
    if bad:
        raise ConfigError(f"unknown check id(s): {', '.join(bad)}; known: {', '.join(CHECKS)}")
    b = _building(cfg)
    ctx = {"subgroups": cfg.get("subgroups"), "seed": cfg.get("seed", 0)}
    results = [run_check(c, b, ctx).to_json() for c in ids]
    report = {"provenance": provenance(cfg), "building": b.name, "checks": results}
    report["report_hash"] = report_hash(report)
    _write(json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False) + "\n", cfg.get("out"))
    for r in results:
        print(f"{r['status'].upper():7s} {r['check']} [{b.name}]", file=sys.stderr)
    failed = any(r["status"] == "fail" for r in results if CHECKS[r["check"]][1] == "theorem")
    return EXIT_FAIL if failed else EXIT_OK


def _summary(values: dict) -> str:
    keep = {k: v for k, v in values.items() if not isinstance(v, (list, dict)) or k in
            ("PD", "OPD", "Y", "CB", "join", "OD", "D")}
    return canonical(keep)


def consolidate(reports: list[dict]) -> list[dict]:
    rows: dict = {}
    for rep in reports:
        h = rep.get("report_hash") or report_hash(rep)
        for r in rep.get("checks", []):
            key = (r["building"], r["check"])
            row = {"building": r["building"], "check": r["check"], "status": r["status"],
                   "summary": _summary(r.get("values", {})), "hash": h,
                   "_body": canonical(_strip_volatile(r))}
            if key in rows and rows[key]["_body"] != row["_body"]:
                raise ConfigError(f"conflicting results for {key[1]} on {key[0]}: "
                                  f"reports {rows[key]['hash']} and {h}")
            rows.setdefault(key, row)
    return [rows[k] for k in sorted(rows)]


def render_markdown(rows: list[dict]) -> str:
    out = ["| building | check | status | summary | report |", "|---|---|---|---|---|"]
    for r in rows:
        summary = r["summary"].replace("|", "\\|")
        out.append(f"| {r['building']} | {r['check']} | {r['status']} | `{summary}` | {r['hash'][:12]} |")
    return "\n".join(out) + "\n"


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["building", "check", "status", "summary", "report_hash"])
    for r in rows:
        w.writerow([r["building"], r["check"], r["status"], r["summary"], r["hash"]])
    return buf.getvalue()


def cmd_report(args) -> int:
    reports = []
    for f in args.files:
        try:
            reports.append(json.loads(Path(f).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read report {f}: {e}") from None
    rows = consolidate(reports)
    md, cv = render_markdown(rows), render_csv(rows)
    if args.markdown:
        Path(args.markdown).write_text(md, encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(cv, encoding="utf-8")
    if not args.markdown and not args.csv:
        sys.stdout.write(md)
    return EXIT_OK


def cmd_probe(args) -> int:
    cfg = load_config(args)
    if args.probe == "y-dimension":
        rows = []
        for t in args.types or DEFAULT_TYPES:
            try:
                rows.append(y_dimension_probe(t))
            except BudgetExceeded as e:
                rows.append({"type": t, "error": str(e)})
            except ValueError as e:
                raise ConfigError(str(e)) from None
        data = {"probe": "y-dimension", "rows": rows}
    elif args.probe == "upper-conjecture":
        b = _building(cfg)
        data = {"probe": "upper-conjecture", "building": b.name,
                "rows": decompositions(b).upper_interval_probe()}
    else:
        b = _building(cfg)
        if b.kind != "thin":
            raise ConfigError("interval-sphere probe needs a thin building")
        data = {"probe": "interval-sphere", "building": b.name, "rows": interval_sphere_probe(b)}
    data["provenance"] = provenance(cfg)
    _write(json.dumps(data, indent=1, sort_keys=True, ensure_ascii=False) + "\n", cfg.get("out"))
    return EXIT_OK


def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="decomp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="construct and serialize posets and complexes")
    p.add_argument("--building")
    p.add_argument("--construct", action="append", help=f"one of {', '.join(CONSTRUCTIONS)}")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="run named checks and write a JSON report")
    p.add_argument("checks", nargs="*", metavar="CHECK", help=", ".join(CHECKS))
    p.add_argument("--building")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="merge reports into Markdown and CSV tables")
    p.add_argument("files", nargs="*")
    p.add_argument("--markdown")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("probe", help="record outcomes of open questions")
    p.add_argument("probe", choices=["y-dimension", "upper-conjecture", "interval-sphere"])
    p.add_argument("--types", nargs="*")
    p.add_argument("--building")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = parser().parse_args(argv)
    try:
        apply_memory_budget(load_config(args) if hasattr(args, "config") else {})
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (BudgetExceeded, MemoryError) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
