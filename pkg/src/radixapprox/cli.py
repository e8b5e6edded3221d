"""The radix-approx command line front end.

Subcommands: search, diffset, expsum, discrepancy, adversary, constants,
verify-all.  Output is human text, JSON with a stable field order, or an
RFC-4180 CSV row; rationals serialize as "p/q" strings, so exact-mode
output is byte-identical across runs for identical inputs and config
(wall time and other run metadata live in a separate "meta" object).

Exit codes: 0 success, 2 invariant violation (a verified inequality
failed; reported with its witness), 3 resource limit, 4 indeterminate
comparison; usage problems exit non-zero with a diagnostic on stderr.

The environment variable RADIX_APPROX_CONFIG may point to a key=value file
mirroring the run configuration (precision_bits, enumeration_cap,
node_budget, output_format, seed, tolerance, threads).
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from . import digitsets as ds
from .adversary import adversarial_gamma, no_multiples_check
from .approx import oracle_min, pigeonhole_witness
from .acceptance import run_all
from .constants import approximation_bound, compute_constants
from .diffsets import anchored_cap, max_difference_set, positive_differences
from .discrepancy import discrepancy_L, erdos_turan_check, fractional_orbit
from .errors import (
    DomainError,
    IndeterminateComparison,
    InvariantViolation,
    RadixApproxError,
    ResourceLimit,
)
from .exact import Real

CONFIG_ENV = "RADIX_APPROX_CONFIG"

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_RESOURCE = 3
EXIT_INDETERMINATE = 4

CSV_COLUMNS = (
    "subcommand",
    "b",
    "N",
    "witness",
    "distance_num",
    "distance_den",
    "bound",
    "passed",
)


@dataclass
class RunConfig:
    precision_bits: int = 128
    enumeration_cap: int = ds.CAP_DEFAULT
    node_budget: int = 2_000_000
    output_format: str = "human"
    seed: int = 0
    tolerance: Fraction = Fraction(1, 10**9)
    threads: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise DomainError("precision_bits must be >= 64")
        if self.enumeration_cap < 1 or self.node_budget < 1 or self.threads < 1:
            raise DomainError("caps, budgets and threads must be positive")

    def to_dict(self) -> dict:
        return {
            "precision_bits": self.precision_bits,
            "enumeration_cap": self.enumeration_cap,
            "node_budget": self.node_budget,
            "output_format": self.output_format,
            "seed": self.seed,
            "tolerance": _ser(self.tolerance),
            "threads": self.threads,
        }


def load_config_file(path: str) -> dict:
    values: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad config line: {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            raw = raw.strip()
            if key in ("precision_bits", "enumeration_cap", "node_budget", "seed", "threads"):
                values[key] = int(raw)
            elif key == "tolerance":
                values[key] = Fraction(raw)
            elif key == "output_format":
                values[key] = raw
            else:
                raise DomainError(f"unknown config key {key!r}")
    return values


def _ser(value: Any) -> Any:
    """JSON-ready form: Fractions as p/q strings, Reals as mid/rad pairs."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Real):
        if value.is_exact:
            return {"exact": _ser(value.mid)}
        return {"mid": _ser(value.mid), "rad": _ser(value.rad)}
    if isinstance(value, ds.SetSpec):
        return value.to_dict()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: _ser(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {k: _ser(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_ser(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _human(value: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_human_scalar(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(f"{pad}- {_human_scalar(v)}" for v in value)
    return f"{pad}{_human_scalar(value)}"


def _approx(frac_str: str) -> str:
    return f"{float(Fraction(frac_str)):.12g}"


def _human_scalar(v: Any) -> str:
    if isinstance(v, dict) and set(v) == {"exact"}:
        s = v["exact"]
        return s if len(s) <= 32 else f"{s[:18]}... (~{_approx(s)})"
    if isinstance(v, dict) and set(v) == {"mid", "rad"}:
        return f"~{_approx(v['mid'])} (+/- {_approx(v['rad'])})"
    if isinstance(v, str) and "/" in v and len(v) > 32:
        return f"{v[:18]}... (~{_approx(v)})"
    if isinstance(v, list):
        return "[" + ", ".join(_human_scalar(x) for x in v) + "]"
    return str(v)


def _frac_of(report: dict, *keys) -> Optional[Fraction]:
    cur: Any = report
    for k in keys:
        if not isinstance(cur, dict) or k not in cur:
            return None
        cur = cur[k]
    if isinstance(cur, dict):
        cur = cur.get("exact") or cur.get("mid")
    if isinstance(cur, str) and "/" in cur:
        return Fraction(cur)
    return None


def _csv_row(subcommand: str, args, report: dict) -> dict:
    dist = _frac_of(report, "distance") or _frac_of(report, "min_distance")
    bound = (
        report.get("guarantee")
        or report.get("power_decay_bound")
        or report.get("decay_bound")
        or report.get("product_bound")
        or report.get("et_rhs")
    )
    if isinstance(bound, dict):
        bound = bound.get("exact") or bound.get("mid")
    if isinstance(bound, str) and "/" in bound:
        bound = repr(float(Fraction(bound)))
    return {
        "subcommand": subcommand,
        "b": getattr(args, "base", "") or report.get("b", ""),
        "N": report.get("N", getattr(args, "limit", "") or getattr(args, "count", "") or ""),
        "witness": report.get("witness", report.get("min_witness_index", "")),
        "distance_num": dist.numerator if dist is not None else "",
        "distance_den": dist.denominator if dist is not None else "",
        "bound": bound if bound is not None else "",
        "passed": report.get("passed", ""),
    }


# ---------------------------------------------------------------------------
# subcommand handlers: each returns a plain report dict (already serialized)
# ---------------------------------------------------------------------------


def _cmd_search(args, cfg: RunConfig) -> dict:
    gamma = Real.parse(args.gamma, cfg.precision_bits)
    N = args.limit or args.count
    if N is None:
        raise DomainError("search needs --limit")
    if args.method == "pigeonhole":
        res = pigeonhole_witness(gamma, args.base, N)
    elif args.method == "oracle":
        res = oracle_min(
            gamma, ds.SetSpec.zero_one(args.base), N, cap=cfg.enumeration_cap, threads=cfg.threads
        )
    else:
        raise DomainError(f"unknown search method {args.method!r}")
    out = _ser(res)
    out["N"] = N
    return out


def _cmd_diffset(args, cfg: RunConfig) -> dict:
    N = args.limit or args.count
    if N is None:
        raise DomainError("diffset needs --limit")
    S = list(ds.iter_spec_upto(ds.SetSpec.zero_one(args.base), N, cap=cfg.enumeration_cap))
    if args.method == "differences":
        return {"b": args.base, "N": N, "set_size": len(S),
                "differences": sorted(positive_differences(S))}
    cap = anchored_cap(args.base, N) if args.base >= 3 else None
    rep = max_difference_set(S, args.method, node_budget=cfg.node_budget, bound=cap)
    out = _ser(rep)
    out.update({"b": args.base, "N": N})
    return out


def _cmd_expsum(args, cfg: RunConfig) -> dict:
    from .expsum import decay_bound_check, eval_expsum, separation_check, small_shift_count

    gamma = Real.parse(args.gamma, cfg.precision_bits)
    if args.r is None:
        raise DomainError("expsum needs --r")
    if args.method == "shifts":
        if args.beta is None or args.k is None:
            raise DomainError("the shifts method needs --beta and --k")
        beta = Fraction(args.beta)
        sep = separation_check(args.base, args.r, beta, gamma)
        shifts = small_shift_count(
            args.base, args.r, args.k, gamma, beta, separation_ok=sep.ok
        )
        return {"separation": _ser(sep), "shifts": _ser(shifts)}
    if args.k is None:
        raise DomainError("expsum needs --k")
    if args.method == "decay":
        if args.m is None:
            raise DomainError("the decay check needs --m")
        rep = decay_bound_check(args.base, args.r, args.k, args.m, gamma)
    else:
        rep = eval_expsum(args.base, args.r, args.k, gamma)
    return _ser(rep)


def _cmd_discrepancy(args, cfg: RunConfig) -> dict:
    gamma = Real.parse(args.gamma, cfg.precision_bits)
    T = args.limit or args.count
    if T is None:
        raise DomainError("discrepancy needs --limit (the sequence length)")
    points = fractional_orbit(gamma, T)
    rep = erdos_turan_check(points, args.G) if args.G else discrepancy_L(points)
    return _ser(rep)


def _cmd_adversary(args, cfg: RunConfig) -> dict:
    if args.method == "no-multiples":
        if args.k is None or args.t is None:
            raise DomainError("the no-multiples check needs --k and --t")
        rep = no_multiples_check(args.base, args.k, args.t, args.e_max)
        return _ser(rep)
    N = args.count or args.limit
    if N is None:
        raise DomainError("adversary needs --count")
    cert = adversarial_gamma(args.base, N, cap=cfg.enumeration_cap, threads=cfg.threads)
    return _ser(cert)


def _cmd_constants(args, cfg: RunConfig) -> dict:
    cs = compute_constants(args.base, precision_bits=cfg.precision_bits)
    out = _ser(cs)
    N = args.limit or args.count
    if N is not None:
        out["bound_at_N"] = _ser(approximation_bound(args.base, N, cs))
    return out


def _cmd_verify_all(args, cfg: RunConfig) -> dict:
    lines: list[str] = []
    results = run_all(echo=lines.append)
    for line in lines:
        print(line, file=sys.stderr)
    report = {
        "criteria": [
            {"id": r.cid, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    if not report["passed"]:
        raise InvariantViolation("acceptance criteria failed: " + json.dumps(report))
    return report


_HANDLERS = {
    "search": _cmd_search,
    "diffset": _cmd_diffset,
    "expsum": _cmd_expsum,
    "discrepancy": _cmd_discrepancy,
    "adversary": _cmd_adversary,
    "constants": _cmd_constants,
    "verify-all": _cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radix-approx",
        description="rational approximation with base-b denominators made of digits 0 and 1",
    )
    parser.add_argument("--version", action="version", version=f"radix-approx {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, gamma=False):
        p.add_argument("--base", type=int, default=2)
        p.add_argument("--limit", type=int)
        p.add_argument("--count", type=int)
        if gamma:
            p.add_argument("--gamma", required=True,
                           help="p/q, a decimal literal, or sqrt2|pi|e")
        p.add_argument("--r", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--beta")
        p.add_argument("--t", type=int)
        p.add_argument("--e-max", dest="e_max", type=int, default=6)
        p.add_argument("--G", dest="G", type=int)
        p.add_argument("--format", choices=("json", "csv", "human"), default=None)
        p.add_argument("--out", metavar="FILE")
        p.add_argument("--threads", type=int)
        p.add_argument("--precision-bits", dest="precision_bits", type=int)
        p.add_argument("--seed", type=int)

    p = sub.add_parser("search", help="witness search: pigeonhole or exhaustive oracle")
    common(p, gamma=True)
    p.add_argument("--method", choices=("pigeonhole", "oracle"), default="pigeonhole")

    p = sub.add_parser("diffset", help="difference-set maxima and positive differences")
    common(p)
    p.add_argument("--method", choices=("anchored", "within", "differences"), default="anchored")

    p = sub.add_parser("expsum", help="digit-restricted exponential sums and bounds")
    common(p, gamma=True)
    p.add_argument("--method", choices=("sum", "decay", "shifts"), default="sum")

    p = sub.add_parser("discrepancy", help="interval discrepancy of {n*gamma}")
    common(p, gamma=True)

    p = sub.add_parser("adversary", help="lower-bound certificate / no-multiples scan")
    common(p)
    p.add_argument("--method", choices=("certificate", "no-multiples"), default="certificate")

    p = sub.add_parser("constants", help="the explicit constant chain")
    common(p)

    p = sub.add_parser("verify-all", help="run the acceptance suite")
    common(p)
    return parser


def _config_from(args) -> RunConfig:
    values: dict[str, Any] = {}
    path = os.environ.get(CONFIG_ENV)
    if path:
        values.update(load_config_file(path))
    for key in ("precision_bits", "seed", "threads"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if getattr(args, "format", None):
        values["output_format"] = args.format
    return RunConfig(**values)


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        started = time.perf_counter()
        report = _HANDLERS[args.subcommand](args, cfg)
        wall_ms = (time.perf_counter() - started) * 1000.0
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except IndeterminateComparison as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (DomainError, RadixApproxError, ValueError) as exc:
        parser.exit(1, f"error: {exc}\n")

    if cfg.output_format == "json":
        envelope = {
            "report": report,
            "meta": {
                "tool": "radixapprox",
                "version": __version__,
                "subcommand": args.subcommand,
                "config": cfg.to_dict(),
                "wall_time_ms": round(wall_ms, 3),
            },
        }
        _emit(json.dumps(envelope, indent=2) + "\n", args.out)
    elif cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerow(_csv_row(args.subcommand, args, report))
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_human(report) + "\n", args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
