"""netdiscord command line.

    netdiscord generate circle --n 20 --out circle.json
    netdiscord generate blocks --sizes 20,20 --p-in 0.5 --p-out 0.01 --seed 7 --out blocks.json
    netdiscord solve --network circle.json --f f.csv --beta 0.5 --out eq.csv
    netdiscord stats --network circle.json --f f.csv --beta 0.5 --center --out stats.json
    netdiscord spectrum --network circle.json --out spectrum.csv --json spectrum.json
    netdiscord intervene --network circle.json --f-hat f.csv --beta 0.5 --gamma malevolent --budget 1 --out plan.json
    netdiscord verify --suite all --seed 1 --out verify.json

Exit codes: 0 success, 2 bad input, 3 internal consistency failure,
4 verification failure.  ``DISCORD_SEED`` overrides ``--seed``; when
``SOURCE_DATE_EPOCH`` is set it fixes the manifest timestamp.
"""
from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import os
import sys

import numpy as np

from . import __version__
from . import equilibrium as eq
from . import network as nw
from . import planner, spectral, stats, verify
from .errors import (
    BlissPointError,
    ConsistencyError,
    ConvergenceError,
    InvalidNetworkError,
    NormalizationError,
    PreconditionError,
)

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY, EXIT_VERIFY = 0, 2, 3, 4
SOLVE_GAP_LIMIT = 1e-8


class UsageError(Exception):
    pass


def _fmt(x):
    return format(float(x), ".17g")


def _timestamp():
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        t = dt.datetime.fromtimestamp(int(epoch), tz=dt.timezone.utc)
    else:
        t = dt.datetime.now(tz=dt.timezone.utc).replace(microsecond=0)
    return t.isoformat().replace("+00:00", "Z")


def resolve_seed(seed):
    env = os.environ.get("DISCORD_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"DISCORD_SEED must be an integer, got {env!r}")
    return seed


def make_manifest(args, command):
    skip = {"func", "command", "kind"}
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in skip and k != "seed"}
    return {
        "command": command,
        "inputs": inputs,
        "seed": args.seed,
        "tool_version": __version__,
        "timestamp": _timestamp(),
    }


def _dump_json(obj, path):
    text = json.dumps(obj, indent=1, allow_nan=False) + "\n"
    _write_text(text, path)


def _write_text(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv_text(manifest, header, rows):
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def read_profile(path, n=None):
    """Read a profile CSV: one value per row, or ``node,value`` rows in any
    order.  A header row and ``#`` comment lines are skipped."""
    values = {}
    plain = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            row = [c.strip() for c in row]
            if not row or not row[0] or row[0].startswith("#"):
                continue
            try:
                nums = [float(c) for c in row]
            except ValueError:
                if values or plain:
                    raise UsageError(f"{path}:{lineno}: not a number in {row!r}")
                continue  # header
            if len(nums) == 1:
                plain.append(nums[0])
            elif len(nums) == 2:
                node = int(nums[0])
                if node != nums[0] or node in values:
                    raise UsageError(f"{path}:{lineno}: bad or repeated node index {row[0]!r}")
                values[node] = nums[1]
            else:
                raise UsageError(f"{path}:{lineno}: expected 1 or 2 columns, got {len(row)}")
    if values and plain:
        raise UsageError(f"{path}: mixes node,value rows with bare values")
    if values:
        if sorted(values) != list(range(len(values))):
            raise UsageError(f"{path}: node indices must cover 0..{len(values) - 1}")
        z = np.array([values[i] for i in range(len(values))])
    else:
        z = np.array(plain)
    if n is not None and len(z) != n:
        raise UsageError(f"{path}: profile has {len(z)} entries, network has {n} nodes")
    if not np.all(np.isfinite(z)):
        raise UsageError(f"{path}: non-finite values")
    return z


def _load_network(path):
    try:
        return nw.load_json(path)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})")


# --- commands ---------------------------------------------------------------

def cmd_generate(args):
    if args.kind == "circle":
        net = nw.make_circle(args.n)
    elif args.kind == "blocks":
        try:
            sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
        except ValueError:
            raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}")
        net = nw.make_homophilous_blocks(sizes, args.p_in, args.p_out, args.seed)
    else:
        net = nw.from_weighted_edges(args.n, nw.read_edge_csv(args.edges))
    manifest = make_manifest(args, f"generate {args.kind}")
    data = nw.to_json_dict(net)
    data["manifest"] = manifest
    _dump_json(data, args.out)
    if args.csv:
        nw.save_csv(net, args.csv)
    problems = nw.validate(net)
    print(
        f"n={net.n} edges={len(data['edges'])} connected={'yes' if net.is_connected() else 'no'} "
        f"violations={len(problems)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_solve(args):
    net = _load_network(args.network)
    f = read_profile(args.f, net.n)
    params = eq.GameParams(args.beta)
    spec = spectral.decompose(net)
    a = eq.solve_equilibrium(net, params, f)
    pay = eq.agent_payoffs(net, params, a, f)
    direct = float(np.sum(pay))
    spec_w = stats.welfare_spectral(spec, params, f)
    gap = stats.relative_gap(direct, spec_w)
    print(f"welfare direct={_fmt(direct)} spectral={_fmt(spec_w)} relative_gap={gap:.3e}")
    if gap > SOLVE_GAP_LIMIT:
        print(f"error: direct and spectral welfare disagree beyond {SOLVE_GAP_LIMIT}", file=sys.stderr)
        return EXIT_CONSISTENCY
    rows = [[i, _fmt(f[i]), _fmt(a[i]), _fmt(pay[i])] for i in range(net.n)]
    _write_text(_csv_text(make_manifest(args, "solve"), ["node", "f", "a_star", "payoff"], rows), args.out)
    return EXIT_OK


def cmd_stats(args):
    net = _load_network(args.network)
    f = read_profile(args.f, net.n)
    if args.center:
        f = f - f.mean()
    params = eq.GameParams(args.beta)
    spec = spectral.decompose(net)
    report = stats.stats_report(spec, params, f)
    _dump_json({"manifest": make_manifest(args, "stats"), "report": report}, args.out)
    return EXIT_OK


def cmd_spectrum(args):
    net = _load_network(args.network)
    spec = spectral.decompose(net)
    manifest = make_manifest(args, "spectrum")
    # long format: one row per (component, node), ready for faceted line plots
    rows = []
    for ell in range(1, spec.n + 1):
        lam = _fmt(spec.eigenvalues[ell - 1])
        u = spec.component(ell)
        rows.extend([ell, lam, i, _fmt(u[i])] for i in range(spec.n))
    _write_text(_csv_text(manifest, ["ell", "lambda", "node", "value"], rows), args.out)
    if args.json:
        data = spec.to_json_dict()
        data["manifest"] = manifest
        _dump_json(data, args.json)
    return EXIT_OK


def cmd_intervene(args):
    net = _load_network(args.network)
    f_hat = read_profile(args.f_hat, net.n)
    gamma = 1 if args.gamma == "benevolent" else -1
    params = eq.GameParams(args.beta, gamma)
    spec = spectral.decompose(net)
    res = planner.optimal_intervention(spec, params, f_hat, args.budget, allow_bliss=args.allow_bliss)
    profile = planner.similarity_profile(res, spec, f_hat) if np.linalg.norm(res.delta_star) > 0 else []
    out = {"manifest": make_manifest(args, "intervene"), "result": res.to_json_dict(), "similarity_profile": profile}
    _dump_json(out, args.out)
    print(
        f"welfare before={_fmt(res.welfare_before)} after={_fmt(res.welfare_after)} "
        f"budget_used={_fmt(res.budget_used)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args):
    names = [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [s for s in names if s != "all" and s not in verify.SUITES]
    if unknown or not names:
        raise UsageError(f"unknown suite(s) {unknown}; choose from all, {', '.join(verify.SUITES)}")
    reports = verify.run(names, seed=args.seed)
    for r in reports:
        print(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']} ({r['runtime_s']:.2f}s)", file=sys.stderr)
        if not args.timings:
            r.pop("runtime_s")
    ok = all(r["ok"] for r in reports)
    _dump_json({"manifest": make_manifest(args, "verify"), "ok": ok, "checks": reports}, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


# --- parser -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (DISCORD_SEED overrides)")

    p = argparse.ArgumentParser(prog="netdiscord", description="Discord and welfare in network coordination games.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a network and write it as JSON")
    gsub = g.add_subparsers(dest="kind", required=True)
    gc = gsub.add_parser("circle", parents=[common], help="cycle with weight 1/2 to each neighbour")
    gc.add_argument("--n", type=int, required=True)
    gb = gsub.add_parser("blocks", parents=[common], help="random homophilous block network")
    gb.add_argument("--sizes", required=True, help="comma-separated block sizes, e.g. 20,20")
    gb.add_argument("--p-in", type=float, required=True)
    gb.add_argument("--p-out", type=float, required=True)
    ge = gsub.add_parser("edges", parents=[common], help="normalize a weighted edge list (i,j,w CSV)")
    ge.add_argument("--n", type=int, required=True)
    ge.add_argument("--edges", required=True)
    for sp in (gc, gb, ge):
        sp.add_argument("--out", default="-", help="output JSON path (default stdout)")
        sp.add_argument("--csv", help="also write an i,j,w edge CSV here")
        sp.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", parents=[common], help="equilibrium actions and payoffs")
    s.add_argument("--network", required=True)
    s.add_argument("--f", required=True, help="ideal-point profile CSV")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_solve)

    st = sub.add_parser("stats", parents=[common], help="welfare and covariance report, both routes")
    st.add_argument("--network", required=True)
    st.add_argument("--f", required=True)
    st.add_argument("--beta", type=float, required=True)
    st.add_argument("--center", action="store_true", help="subtract the mean of f first")
    st.add_argument("--out", default="-")
    st.set_defaults(func=cmd_stats)

    sp = sub.add_parser("spectrum", parents=[common], help="eigenvalues and eigenvectors as plot data")
    sp.add_argument("--network", required=True)
    sp.add_argument("--out", default="-", help="long-format CSV: ell,lambda,node,value")
    sp.add_argument("--json", help="also write the spectrum as JSON")
    sp.set_defaults(func=cmd_spectrum)

    iv = sub.add_parser("intervene", parents=[common], help="optimal budgeted change of ideal points")
    iv.add_argument("--network", required=True)
    iv.add_argument("--f-hat", required=True)
    iv.add_argument("--beta", type=float, required=True)
    iv.add_argument("--gamma", choices=["benevolent", "malevolent"], required=True)
    iv.add_argument("--budget", type=float, required=True)
    iv.add_argument("--allow-bliss", action="store_true", help="return the zero-miscoordination point instead of failing")
    iv.add_argument("--out", default="-")
    iv.set_defaults(func=cmd_intervene)

    v = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    v.add_argument("--suite", default="all", help=f"comma-separated: all, {', '.join(verify.SUITES)}")
    v.add_argument("--timings", action="store_true", help="keep runtimes in the JSON (breaks byte-determinism)")
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed = resolve_seed(args.seed)
        return args.func(args)
    except BlissPointError as exc:
        print(f"error: {exc} (pass --allow-bliss to accept it)", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (UsageError, InvalidNetworkError, PreconditionError, NormalizationError, ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
