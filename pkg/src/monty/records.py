"""Line-delimited JSON records for progressions, pairs, factors and reports.

Every integer is written as a decimal string and every rational as
``"num/den"`` in lowest terms, so nothing is lost at any size of ``N``.
Polynomial coefficients are listed in ascending order; progressions are
listed highest index first.
"""

import json
from fractions import Fraction

from .core import PolyPair
from .errors import ArgumentError
from .gp import GeometricProgression
from .poly import IntPoly, delta_s
from .verify import fmt


class RecordError(ArgumentError):
    """A record could not be parsed."""


def parse_int(x, what="integer"):
    if isinstance(x, bool):
        raise RecordError(f"{what}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    try:
        return int(str(x).strip())
    except ValueError:
        raise RecordError(f"{what}: not an integer: {x!r}") from None


def parse_rational(x, what="rational"):
    if isinstance(x, bool):
        raise RecordError(f"{what}: expected a rational, got {x!r}")
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise RecordError(f"{what}: not a rational: {x!r}") from None


def parse_skews(text):
    """Comma list of positive rationals such as ``1,2,7/5``."""
    out = []
    for part in str(text).split(","):
        if part.strip():
            s = parse_rational(part, "skew")
            if s <= 0:
                raise RecordError(f"skew must be positive: {part!r}")
            out.append(s)
    if not out:
        raise RecordError("empty skew list")
    return tuple(out)


def _ints(xs, what):
    if not isinstance(xs, list):
        raise RecordError(f"{what}: expected a list")
    return [parse_int(x, what) for x in xs]


def _require(rec, *keys):
    missing = [k for k in keys if k not in rec]
    if missing:
        raise RecordError(f"record missing field(s): {', '.join(missing)}")


def gp_record(gp):
    rec = {"kind": "gp", "N": fmt(gp.N), "length": fmt(gp.length), "c": fmt(list(gp.c))}
    if gp.ratio is not None:
        rec["ratio"] = fmt(gp.ratio)
    if gp.params:
        rec["params"] = {k: fmt(v) for k, v in gp.params.items()}
    if gp.family:
        rec["family"] = gp.family
    return rec


def gp_from_record(rec):
    """Unvalidated progression from a record; callers run ``validate_gp``."""
    _require(rec, "N", "c")
    c = tuple(_ints(rec["c"], "c"))
    if "length" in rec and parse_int(rec["length"], "length") != len(c):
        raise RecordError("length does not match c")
    ratio = parse_int(rec["ratio"], "ratio") if rec.get("ratio") is not None else None
    params = rec.get("params")
    if params is not None:
        params = {k: parse_int(v, k) for k, v in params.items()}
    return GeometricProgression(c, parse_int(rec["N"], "N"), ratio, params, rec.get("family"))


def pair_record(pair):
    f1, f2, s = pair.f1, pair.f2, pair.s
    rec = {
        "kind": "pair",
        "N": fmt(pair.N),
        "d": fmt(pair.d),
        "f1": fmt(f1),
        "f2": fmt(f2),
        "r": fmt(pair.r),
        "skew": fmt(Fraction(s)),
    }
    if pair.c is not None:
        rec["c"] = fmt(list(pair.c))
    for key, value in sorted(pair.meta.items()):
        rec[key] = fmt(value)
    if f2.deg is not None and 2 <= f2.deg <= f1.deg:
        rec["delta_s"] = fmt(delta_s(f1, f2))
    return rec


def pair_from_record(rec):
    _require(rec, "N", "f1", "f2", "r")
    c = tuple(_ints(rec["c"], "c")) if rec.get("c") is not None else None
    return PolyPair(IntPoly(_ints(rec["f1"], "f1")), IntPoly(_ints(rec["f2"], "f2")),
                    parse_int(rec["N"], "N"), parse_int(rec["r"], "r"),
                    parse_rational(rec.get("skew", "1"), "skew"), c)


def factor_record(err, c=None):
    rec = {"kind": "factor", "N": fmt(err.N), "factor": fmt(err.factor),
           "cofactor": fmt(err.N // err.factor), "where": err.where}
    if c is not None:
        rec["c"] = fmt(list(c))
    return rec


def degenerate_record(N, c, reason, pair=None):
    rec = {"kind": "degenerate", "N": fmt(N), "c": fmt(list(c)), "reason": reason}
    if pair is not None:
        rec["f1"], rec["f2"] = fmt(pair.f1), fmt(pair.f2)
        rec["skew"] = fmt(Fraction(pair.s))
    return rec


def check_records(report):
    for check in report.checks:
        yield {"kind": "check", "instance": report.instance, "check": check.name,
               "status": check.status, "witnesses": check.witnesses}


def summary_record(summary):
    return {
        "kind": "summary",
        "instances": fmt(summary["instances"]),
        "pass": fmt(summary["pass"]),
        "fail": fmt(summary["fail"]),
        "skipped": fmt(summary["skipped"]),
        "ok": summary["ok"],
        "checks": {name: {k: fmt(v) for k, v in counts.items()}
                   for name, counts in summary["checks"].items()},
    }


def dumps(rec):
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def write_records(stream, records):
    for rec in records:
        stream.write(dumps(rec) + "\n")


def read_records(stream):
    """Parse one JSON object per non-blank line."""
    out = []
    for lineno, line in enumerate(stream, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as err:
            raise RecordError(f"line {lineno}: {err.msg}") from None
        if not isinstance(rec, dict):
            raise RecordError(f"line {lineno}: expected an object")
        out.append(rec)
    return out
