"""Command-line front end: ``monty gen-gp | select | verify | rank``.

Every subcommand reads and writes one JSON object per line. Exit codes:
0 success, 1 verification failures, 2 usage or parse errors, 3 when every
emitted record is a factor of ``N``.
"""

import argparse
import logging
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import records as rec_io
from .core import natural_skew, skew_search
from .errors import ArgumentError, DegenerateGP, DegeneratePair, FactorFound, MontyError, NotAGP
from .gp import (GPParamsD2, GPParamsD3, build_gp_d2, build_gp_d3, gp_from_polys,
                 search_gp_d2, search_gp_d3, validate_gp)
from .poly import IntPoly, skewed_norm_sq
from .verify import (BATTERIES, DEFAULT_SKEWS, Instance, batch_verify, theorem1_instances,
                     theorem2_instances)

log = logging.getLogger("monty")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_FACTOR = 0, 1, 2, 3
FAMILIES = ("d2", "d3", "from-polys", "file")
CONFIG_KEYS = ("n", "family", "a", "k", "p", "m", "search", "count", "seed", "skews",
               "battery", "input", "output", "f1", "f2", "r", "t")
DEFAULTS = {"family": "d2", "count": 1, "search": False}


class UsageError(Exception):
    pass


def _parse_config_file(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as err:
        raise UsageError(f"cannot read config {path}: {err.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def resolve_config(args):
    """Flags override the config file, which overrides the defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(_parse_config_file(args.config))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            cfg[key] = value
    if isinstance(cfg.get("search"), str):
        cfg["search"] = cfg["search"].lower() in ("1", "true", "yes")
    return cfg


def _int(cfg, key, required=True):
    value = cfg.get(key)
    if value is None:
        if required:
            raise UsageError(f"missing --{key}")
        return None
    try:
        return int(str(value))
    except ValueError:
        raise UsageError(f"--{key}: not an integer: {value!r}") from None


def _modulus(cfg):
    N = _int(cfg, "n")
    if N < 2:
        raise UsageError("--n must be at least 2")
    return N


def _skews(cfg, default):
    if cfg.get("skews") is None:
        return default
    try:
        return rec_io.parse_skews(cfg["skews"])
    except rec_io.RecordError as err:
        raise UsageError(str(err)) from None


def _coeffs(text, key):
    try:
        return IntPoly(int(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError(f"--{key}: expected comma-separated integers") from None


@contextmanager
def _open_input(cfg):
    path = cfg.get("input")
    if path is None or path == "-":
        yield sys.stdin
        return
    try:
        fh = open(path)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    with fh:
        yield fh


def _read_input(cfg):
    with _open_input(cfg) as fh:
        return rec_io.read_records(fh)


def _factor_exit(records):
    if records and all(r["kind"] == "factor" for r in records):
        return EXIT_FACTOR
    return EXIT_OK


# -- subcommands --------------------------------------------------------------

def cmd_gen_gp(cfg):
    family = cfg["family"]
    if family not in FAMILIES:
        raise UsageError(f"--family must be one of {', '.join(FAMILIES)}")
    out = []
    try:
        if family == "file":
            for rec in _read_input(cfg):
                gp = rec_io.gp_from_record(rec)
                try:
                    gp = validate_gp(gp.c, gp.N, gp.ratio, params=gp.params, family=gp.family)
                    out.append(rec_io.gp_record(gp))
                except FactorFound as err:
                    out.append(rec_io.factor_record(err, gp.c))
            return out, _factor_exit(out)
        N = _modulus(cfg)
        if family == "from-polys":
            f1, f2 = _coeffs(cfg.get("f1"), "f1"), _coeffs(cfg.get("f2"), "f2")
            t = _int(cfg, "t", required=False) or f1.deg
            gp = gp_from_polys(f1, f2, t, N, _int(cfg, "r", required=False))
            return [rec_io.gp_record(gp)], EXIT_OK
        build = build_gp_d2 if family == "d2" else build_gp_d3
        if cfg["search"]:
            if cfg.get("seed") is None:
                raise UsageError("--search needs --seed")
            count, seed = _int(cfg, "count"), _int(cfg, "seed")
            search = search_gp_d2 if family == "d2" else search_gp_d3
            params = search(N, count, seed=seed)
        else:
            cls = GPParamsD2 if family == "d2" else GPParamsD3
            params = [cls(*(_int(cfg, key) for key in "akpm"))]
        for p in params:
            try:
                out.append(rec_io.gp_record(build(p, N)))
            except FactorFound as err:
                out.append(rec_io.factor_record(err))
    except FactorFound as err:
        out.append(rec_io.factor_record(err))
    except (NotAGP, MontyError) as err:
        raise UsageError(str(err)) from None
    return out, _factor_exit(out)


def select_one(gp, grid):
    """Pipeline one progression; returns a pair, factor or degenerate record."""
    try:
        gp = validate_gp(gp.c, gp.N, gp.ratio, params=gp.params, family=gp.family)
        skews = grid if grid is not None else (Fraction(1), natural_skew(gp.c))
        _, pair = skew_search(gp, skews)
        return rec_io.pair_record(pair)
    except FactorFound as err:
        return rec_io.factor_record(err, gp.c)
    except DegeneratePair as err:
        return rec_io.degenerate_record(gp.N, gp.c, str(err), err.pair)
    except DegenerateGP as err:
        return rec_io.degenerate_record(gp.N, gp.c, str(err))


def cmd_select(cfg):
    grid = _skews(cfg, None)
    out = []
    for rec in _read_input(cfg):
        if rec.get("kind", "gp") != "gp":
            log.info("select: passing through %s record", rec.get("kind"))
            continue
        gp = rec_io.gp_from_record(rec)
        try:
            out.append(select_one(gp, grid))
        except NotAGP as err:
            raise UsageError(f"invalid progression: {err}") from None
    return out, _factor_exit(out)


def _batteries(cfg):
    text = cfg.get("battery") or "all"
    names = [b.strip() for b in str(text).split(",") if b.strip()]
    if names == ["all"]:
        return BATTERIES
    bad = [b for b in names if b not in BATTERIES]
    if bad:
        raise UsageError(f"unknown battery {bad[0]!r}; choose from {', '.join(BATTERIES)}")
    return tuple(names)


def _instances_from_records(records, grid):
    out = []
    for i, rec in enumerate(records):
        kind = rec.get("kind", "pair")
        ident = str(rec.get("id", f"rec-{i:04d}"))
        if kind == "pair":
            out.append(Instance(ident, "pair", pair=rec_io.pair_from_record(rec)))
        elif kind == "gp":
            out.append(Instance(ident, "gp", gp=rec_io.gp_from_record(rec), skews=grid))
        else:
            log.info("verify: ignoring %s record %s", kind, ident)
    return out


def cmd_verify(cfg):
    batteries = _batteries(cfg)
    skews = _skews(cfg, DEFAULT_SKEWS)
    if cfg.get("input") is not None:
        instances = _instances_from_records(_read_input(cfg), _skews(cfg, None))
    else:
        count = _int(cfg, "count")
        seed = _int(cfg, "seed", required=False) or 0
        instances = theorem1_instances(count, seed)
        half = (count + 1) // 2
        instances += theorem2_instances(half, count - half, count, seed)[0]
    reports, summary = batch_verify(instances, batteries, skews)
    out = [r for report in reports for r in rec_io.check_records(report)]
    out.append(rec_io.summary_record(summary))
    return out, EXIT_OK if summary["ok"] else EXIT_FAIL


def rank_score(pair, skews):
    """``min_s (||f1||^2)^deg f2 (||f2||^2)^deg f1 / N^2`` over the grid."""
    f1, f2 = pair.f1, pair.f2
    return min(skewed_norm_sq(f1, s) ** f2.deg * skewed_norm_sq(f2, s) ** f1.deg
               for s in skews) / Fraction(pair.N) ** 2


def cmd_rank(cfg):
    skews = _skews(cfg, (Fraction(1),))
    scored = []
    for rec in _read_input(cfg):
        if rec.get("kind", "pair") != "pair":
            log.info("rank: skipping %s record", rec.get("kind"))
            continue
        pair = rec_io.pair_from_record(rec)
        try:
            score = rank_score(pair, skews)
        except MontyError as err:
            raise rec_io.RecordError(str(err)) from None
        scored.append((score, dict(rec, score=rec_io.fmt(score))))
    scored.sort(key=lambda item: item[0])  # stable: ties keep input order
    return [r for _, r in scored], EXIT_OK


COMMANDS = {"gen-gp": cmd_gen_gp, "select": cmd_select, "verify": cmd_verify, "rank": cmd_rank}


def build_parser():
    parser = argparse.ArgumentParser(prog="monty", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input record file (default: stdin)")
    common.add_argument("--output", help="output record file (default: stdout)")
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--skews", help="comma list of rational skews, e.g. 1,2,7/5")
    common.add_argument("--seed", help="random seed")
    common.add_argument("--count", help="number of records or instances")

    gen = sub.add_parser("gen-gp", parents=[common], help="build or search progressions")
    gen.add_argument("--n", help="modulus N (decimal)")
    gen.add_argument("--family", help="d2, d3, from-polys or file")
    for key in "akpm":
        gen.add_argument(f"--{key}", help=f"family parameter {key}")
    gen.add_argument("--search", action="store_true", help="search the family instead")
    gen.add_argument("--f1", help="from-polys: ascending coefficients of f1")
    gen.add_argument("--f2", help="from-polys: ascending coefficients of f2")
    gen.add_argument("--r", help="from-polys: common root modulo N")
    gen.add_argument("--t", help="from-polys: progression index t (default deg f1)")

    sub.add_parser("select", parents=[common], help="progressions to polynomial pairs")
    ver = sub.add_parser("verify", parents=[common], help="run check batteries")
    ver.add_argument("--battery", help=f"comma list of {', '.join(BATTERIES)} or all")
    sub.add_parser("rank", parents=[common], help="rank pairs by coefficient size")
    return parser


def _setup_logging():
    level = os.environ.get("MONTY_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        records, code = COMMANDS[args.command](cfg)
    except (UsageError, ArgumentError) as err:
        print(f"monty {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE
    output = cfg.get("output")
    if output and output != "-":
        with open(output, "w") as fh:
            rec_io.write_records(fh, records)
    else:
        rec_io.write_records(sys.stdout, records)
    log.info("%s: %d records, exit %d", args.command, len(records), code)
    return code


if __name__ == "__main__":
    sys.exit(main())
