"""Command-line front end: count, report, runs, verify, bench, pack, unpack."""

import argparse
import json
import math
import random
import sys
import time

import numpy as np

from .counting import analyze, count_distinct_squares, count_powers, report_squares
from .errors import KTooLarge, SquaresError
from .packed_text import TauConfig, dumps, encode, read_file

EXIT_OK, EXIT_MISMATCH, EXIT_IO, EXIT_K = 0, 1, 2, 3


def _log(msg):
    print(msg, file=sys.stderr)


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def _load(args):
    return read_file(args.input, sigma=args.sigma, fmt=args.format)


def _cfg(args, P):
    return TauConfig.default(P.n, P.sigma, args.tau, args.tau_sync)


def _runs_stats(an):
    st = an.runs.stats()
    st["total_runs"] = st["explicit_runs"] + st["cluster_size"] + st["regular_layers"]
    st["root_groups"] = 0
    if an.nonregular:
        gid, _ = an.rooter.group([R.start for R in an.nonregular], [R.period for R in an.nonregular],
                                 an.nonregular_ell)
        st["root_groups"] = int(gid.max()) + 1
    return st


def cmd_count(args):
    P = _load(args)
    cfg = _cfg(args, P)
    an = analyze(P, cfg)
    out = {"n": P.n, "sigma": P.sigma, "tau": cfg.tau_runs}
    if args.power is not None:
        out["t"] = args.power
        out["distinct_powers"] = count_powers(P, args.power, cfg, an)
    else:
        c = count_distinct_squares(P, cfg, an)
        out["distinct_squares"] = c.total
        out["breakdown"] = c.as_dict()
    out["runs_stats"] = _runs_stats(an)
    _emit(out)
    return EXIT_OK


def cmd_report(args):
    P = _load(args)
    cfg = _cfg(args, P)
    try:
        sq = report_squares(P, args.k, cfg)
    except KTooLarge as e:
        _log(f"k={args.k} exceeds the number of distinct squares ({e.total})")
        print(e.total)
        return EXIT_K
    if args.json:
        _emit({"k": args.k, "squares": [list(x) for x in sq]})
    else:
        sys.stdout.write("".join(f"{s} {h}\n" for s, h in sq))
    return EXIT_OK


def cmd_runs(args):
    P = _load(args)
    cfg = _cfg(args, P)
    an = analyze(P, cfg)
    out = {"n": P.n, "sigma": P.sigma, "tau": cfg.tau_runs, "tau_sync": cfg.tau_sync}
    out.update(an.runs.to_json())
    if args.dump_sync:
        out["sync"] = an.sync.to_json() if an.sync is not None else {"tau": cfg.tau_sync, "positions": [], "rank": []}
    if args.json:
        _emit(out)
    else:
        for R in sorted(an.runs.denoted_runs()):
            print(f"{R.start} {R.end} {R.period}")
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def _verify_stages(raw, P, cfg, inject=None):
    """Yield (stage, ok, detail) in pipeline order."""
    from . import oracle
    from .grouping import Rooter

    an = analyze(P, cfg)
    n = len(raw)
    if an.sync is not None:
        bad = oracle.validate_sync(raw, an.sync.positions, an.sync.tau) if n <= 20000 else []
        yield "sync", not bad, bad[:3]
    got = sorted(an.runs.denoted_runs())
    if inject == "runs" and got:
        got[0] = got[0]._replace(end=got[0].end + 1)
    want = sorted(tuple(r) for r in oracle.linear_runs(raw))
    if [tuple(r) for r in got] != want:
        diff = sorted(set(map(tuple, got)) ^ set(want))[:3]
        yield "runs", False, diff
        return
    yield "runs", True, len(want)
    if n <= 3000:
        for py in an.runs.pyramids:
            layers = {tuple(L) for L in py.layers() if L.period >= cfg.q_long}
            ref = {tuple(r) for r in oracle.naive_pyramid(raw, py.F, py.Fp)}
            if not layers <= ref:
                yield "pyramids", False, py.to_json()
                return
        yield "pyramids", True, len(an.runs.pyramids)
    if an.nonregular:
        rooter = Rooter(an.ix, an.sync, cfg.tau_sync)
        gid, _ = rooter.group([R.start for R in an.nonregular], [R.period for R in an.nonregular])
        roots = [oracle.min_rotation(raw[R.start:R.start + R.period]) for R in an.nonregular]
        first = {}
        for g, r in zip(gid.tolist(), roots):
            if first.setdefault(g, r) != r:
                yield "groups", False, g
                return
        if len(first) != len(set(roots)):
            yield "groups", False, "split root"
            return
        yield "groups", True, len(first)
    c = count_distinct_squares(P, cfg, an)
    total = c.total + (1 if inject == "counts" else 0)
    if n <= 3000:
        ref = oracle.naive_square_counts(raw)
        ok = total == ref["total"] and c.as_dict() == {k: ref[k] for k in ("np", "plain_p", "special")}
        yield "counts", ok, {"got": dict(c.as_dict(), total=total), "want": ref}
    else:
        ref = oracle.runs_based_distinct_squares(raw)
        yield "counts", total == ref, {"got": total, "want": ref}


def cmd_verify(args):
    if args.input:
        P = _load(args)
        raw = P.to_bytes()
    else:
        rng = random.Random(args.seed)
        sigma = args.sigma or 2
        raw = bytes(rng.randrange(sigma) for _ in range(args.n))
        P = encode(raw, sigma)
    cfg = _cfg(args, P)
    report = {"n": P.n, "sigma": P.sigma, "stages": []}
    status = "PASS"
    for stage, ok, detail in _verify_stages(raw, P, cfg, args.inject):
        report["stages"].append({"stage": stage, "ok": bool(ok)})
        if not ok:
            status = "FAIL"
            report["first_divergence"] = {"stage": stage, "detail": detail}
            _log(f"divergence in stage {stage}: {detail}")
            break
    report["status"] = status
    _emit(report)
    return EXIT_OK if status == "PASS" else EXIT_MISMATCH


# -- bench --------------------------------------------------------------------

def _bench_one(n, sigma, seed):
    from .oracle import linear_runs, runs_based_distinct_squares
    from .runs import short_runs_tabulated

    rng = np.random.default_rng(seed)
    raw = rng.integers(0, sigma, n, dtype=np.uint8).tobytes()
    P = encode(raw, sigma)
    rows = []
    # blocks of 3.5 tau chars: keep the distinct-block table well below n
    tau = max(3, int(math.log(max(n, 2), max(sigma, 2)) / 7))
    tab_cfg = TauConfig.default(n, sigma, tau_runs=tau)
    t0 = time.perf_counter()
    short_runs_tabulated(P, tab_cfg)
    rows.append(("tabulation", time.perf_counter() - t0))
    t0 = time.perf_counter()
    count_distinct_squares(P)
    rows.append(("pipeline", time.perf_counter() - t0))
    if n <= 10 ** 6:
        t0 = time.perf_counter()
        linear_runs(raw)
        rows.append(("oracle_runs", time.perf_counter() - t0))
        t0 = time.perf_counter()
        runs_based_distinct_squares(raw)
        rows.append(("oracle_squares", time.perf_counter() - t0))
    return rows


def cmd_bench(args):
    sizes = [int(float(s)) for s in args.sizes.split(",") if s]
    sigma = args.sigma or 2
    print("size,sigma,stage,seconds")
    for n in sizes:
        for stage, sec in _bench_one(n, sigma, args.seed):
            print(f"{n},{sigma},{stage},{sec:.4f}", flush=True)
    return EXIT_OK


# -- pack / unpack ------------------------------------------------------------

def _write_out(path, data):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def cmd_pack(args):
    P = read_file(args.input, sigma=args.sigma, fmt="raw")
    _write_out(args.output, dumps(P))
    return EXIT_OK


def cmd_unpack(args):
    P = read_file(args.input, sigma=args.sigma, fmt="packed")
    _write_out(args.output, P.to_bytes())
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="packedsquares", description="Distinct squares in packed strings.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, need_input=True):
        if need_input:
            p.add_argument("input")
        p.add_argument("--sigma", type=int, default=None, help="alphabet size override")
        p.add_argument("--format", choices=("auto", "raw", "packed"), default="auto")
        p.add_argument("--tau", type=int, default=None)
        p.add_argument("--tau-sync", type=int, default=None)
        p.add_argument("--json", action="store_true")
        return p

    p = common(sub.add_parser("count", help="count distinct squares (JSON)"))
    p.add_argument("--power", type=int, default=None, metavar="t")
    p.set_defaults(func=cmd_count)
    p = common(sub.add_parser("report", help="report k distinct squares"))
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_report)
    p = common(sub.add_parser("runs", help="dump the runs representation"))
    p.add_argument("--dump-sync", action="store_true")
    p.set_defaults(func=cmd_runs)
    p = common(sub.add_parser("verify", help="diff every stage against the oracles"), need_input=False)
    p.add_argument("input", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--inject", choices=("runs", "counts"), default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("bench", help="timing table as CSV")
    p.add_argument("--sizes", default="100000,1000000")
    p.add_argument("--sigma", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    for name, fn in (("pack", cmd_pack), ("unpack", cmd_unpack)):
        p = sub.add_parser(name, help=f"{name} a file")
        p.add_argument("input")
        p.add_argument("-o", "--output", default=None)
        p.add_argument("--sigma", type=int, default=None)
        p.set_defaults(func=fn)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 1:
        _log("-k must be at least 1")
        return EXIT_IO
    try:
        return args.func(args)
    except (OSError, SquaresError) as e:
        _log(f"error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
