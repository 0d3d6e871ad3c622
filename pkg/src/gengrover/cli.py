"""Command-line front end.

Each subcommand builds (or loads) an instance, runs one computation and writes
CSV or JSON to ``--out``, to ``$GENGROVER_OUTPUT_DIR/<subcommand>.<ext>`` when
that variable is set, or to stdout. A one-line summary goes to stderr.

Exit codes: 0 success, 1 numerical or validation failure, 2 usage or parse
error.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .dynamics import default_time_grid, grover_iterate, target_probability_trace
from .errors import GroverError, ParseError
from .experiments import fit_alpha, fit_dimension_exponent, hadamard_trials, scaling_study
from .instance import (
    hadamard_sources,
    load_instance,
    make_instance,
    random_orthonormal_sources,
    save_instance,
    substream,
)
from .qpe import (
    QpeConfig,
    energy_readout,
    phases,
    qpe_distribution,
    resolve_register,
    search,
    success_fraction,
)
from .structure import ideal_initial_state, pair_spectrum, verify_identities

OUTPUT_DIR_ENV = "GENGROVER_OUTPUT_DIR"
RESIDUAL_LIMIT = 1e-10


class UsageError(GroverError):
    code = "USAGE"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return "" if x is None else str(x)


def csv_text(header, rows, meta: dict | None = None) -> str:
    buf = io.StringIO()
    if meta:
        buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def rows_as_json(header, rows, meta) -> str:
    def conv(v):
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.floating,)):
            return float(v)
        return v

    return json_text({"meta": meta, "rows": [dict(zip(header, map(conv, r))) for r in rows]})


# -- instance selection -------------------------------------------------------

def build_instance(args):
    if args.instance:
        if args.d is not None:
            raise UsageError("give either --instance or generator flags, not both")
        return load_instance(args.instance)
    if args.d is None:
        raise UsageError("an instance is required: --instance PATH or --d with generator flags")
    d = args.d

    def rng():
        if args.seed is None:
            raise UsageError("--seed is required for randomly generated instances")
        return substream(args.seed, 0)

    draw = None
    if args.family == "hadamard":
        q = d.bit_length() - 1
        if 2**q != d:
            raise UsageError(f"hadamard family needs D = 2^q, got {d}")
        if args.sources is not None:
            src = hadamard_sources(q, args.sources)
        else:
            if args.n is None:
                raise UsageError("--n or --sources is required")
            draw = rng()
            src = hadamard_sources(q, sorted(draw.choice(d, args.n, replace=False).tolist()))
    else:
        if args.sources is not None:
            raise UsageError("--sources takes Hadamard row indices; use --family hadamard")
        if args.n is None:
            raise UsageError("--n is required")
        draw = rng()
        src = random_orthonormal_sources(d, args.n, draw)
    if args.targets is not None:
        targets = args.targets
    else:
        if args.m is None:
            raise UsageError("--m or --targets is required")
        draw = draw or rng()
        targets = sorted(draw.choice(d, args.m, replace=False).tolist())
    return make_instance(d, src, targets)


def _meta(args, inst=None) -> dict:
    meta = {"subcommand": args.command}
    if inst is not None:
        meta.update(instance=inst.fingerprint(), d=inst.d, n=inst.n, m=inst.m)
    if args.seed is not None:
        meta["seed"] = args.seed
    return meta


def _table(args, header, rows, meta) -> str:
    return rows_as_json(header, rows, meta) if args.format == "json" else csv_text(header, rows, meta)


# -- subcommands ----------------------------------------------------------------

def cmd_spectrum(args):
    if args.stats:
        if args.seed is None or args.d is None or args.n is None or args.m is None:
            raise UsageError("spectrum --stats needs --d, --n, --m and --seed")
        records = hadamard_trials(args.d, args.n, args.m, args.trials, args.seed)
        header = ["trial", "n", "c_n", "eig_plus", "eig_minus", "c_av", "bound"]
        rows = [
            (rec.trial, j + 1, c, 1 + c, 1 - c, rec.c_av, rec.bound)
            for rec in records
            for j, c in enumerate(rec.c_values)
        ]
        meta = _meta(args) | {"d": args.d, "n": args.n, "m": args.m, "trials": args.trials}
        mean = float(np.mean([r.c_av for r in records]))
        ok = all(r.within_bound for r in records)
        return _table(args, header, rows, meta), f"trials={len(records)} mean_c_av={mean:.6g} bound_ok={ok}", 0 if ok else 1

    inst = build_instance(args)
    _maybe_save(args, inst)
    sp = pair_spectrum(inst)
    header = ["n", "c_n", "eig_plus", "eig_minus"]
    rows = [(j + 1, p.c, 1 + p.c, 1 - p.c) for j, p in enumerate(sp.pairs)]
    rows += [
        ("unpaired_t", len(sp.unpaired_t), 1.0, None),
        ("unpaired_not_t", len(sp.unpaired_not_t), 1.0, None),
        ("zero_dim", sp.zero_dim, 0.0, None),
    ]
    return _table(args, header, rows, _meta(args, inst)), f"pairs={len(sp.pairs)} zero_dim={sp.zero_dim}", 0


def _initial_states(args, inst, sp):
    if args.initial == "source":
        return list(inst.sources)
    return [ideal_initial_state(sp, j) for j in range(len(sp.pairs))]


def cmd_evolve(args):
    inst = build_instance(args)
    _maybe_save(args, inst)
    sp = pair_spectrum(inst)
    if args.t_max is not None:
        times = np.linspace(0.0, args.t_max, args.samples)
    else:
        times = default_time_grid(sp, args.samples)
    states = _initial_states(args, inst, sp)
    traces = [target_probability_trace(inst, s, times, sp).p_target for s in states]
    header = ["t"] + [f"p_target_mode_{j + 1}" for j in range(len(states))]
    rows = [(t, *(tr[i] for tr in traces)) for i, t in enumerate(times)]
    peak = [float(tr.max()) for tr in traces]
    return _table(args, header, rows, _meta(args, inst)), f"modes={len(states)} max_p=" + ";".join(f"{p:.6f}" for p in peak), 0


def cmd_iterate(args):
    inst = build_instance(args)
    _maybe_save(args, inst)
    sp = pair_spectrum(inst)
    states = _initial_states(args, inst, sp)
    traces = [grover_iterate(inst, s, args.k_max, order=args.order)[1].p_target for s in states]
    header = ["k"] + [f"p_target_mode_{j + 1}" for j in range(len(states))]
    rows = [(k, *(tr[k] for tr in traces)) for k in range(args.k_max + 1)]
    peak = [float(tr.max()) for tr in traces]
    return _table(args, header, rows, _meta(args, inst)), f"modes={len(states)} max_p=" + ";".join(f"{p:.6f}" for p in peak), 0


def _qpe_config(args) -> QpeConfig:
    return QpeConfig(r=args.r, tau=args.tau, p=args.p, shots=getattr(args, "shots", 0),
                     mode=getattr(args, "mode", "qpp"), delta_e=args.delta_e)


def cmd_qpe(args):
    inst = build_instance(args)
    _maybe_save(args, inst)
    sp = pair_spectrum(inst)
    cfg = _qpe_config(args)
    if not 0 <= args.source_index < inst.n:
        raise UsageError(f"--source-index must lie in [0, {inst.n})")
    r = resolve_register(inst, cfg, sp)
    dist = qpe_distribution(inst, inst.sources[args.source_index], r, cfg.tau, sp)
    header = ["m", "phase", "energy", "probability"]
    rows = [(m, m / 2**r, energy_readout(m, r, cfg.tau), pr) for m, pr in enumerate(dist)]
    meta = _meta(args, inst) | {"r": r, "tau": fmt(cfg.tau)}
    c = sp.c_values
    exact = ";".join(fmt(ph) for ph in phases(np.concatenate([1 + c, 1 - c]), cfg.tau))
    return _table(args, header, rows, meta), f"r={r} total={dist.sum():.12f} pair_phases={exact}", 0


def cmd_search(args):
    inst = build_instance(args)
    _maybe_save(args, inst)
    if args.seed is None:
        raise UsageError("--seed is required for search")
    cfg = _qpe_config(args)
    results = search(inst, cfg, args.seed)
    if args.format == "csv":
        header = ["shot", "source_n", "m", "ancilla", "index", "success"]
        rows = [(r.shot, r.source_n, r.m, r.ancilla, r.measured_index, r.success) for r in results]
        text = csv_text(header, rows, _meta(args, inst))
    else:
        text = "".join(json_text(r.to_json()) for r in results)
    r = resolve_register(inst, cfg)
    return text, f"r={r} shots={len(results)} success_fraction={success_fraction(results):.4f}", 0


def cmd_scaling(args):
    if args.seed is None:
        raise UsageError("--seed is required for scaling")
    if args.d_list:
        records = []
        for d in args.d_list:
            records.extend(hadamard_trials(d, args.m, args.m, args.trials, args.seed))
        fit = fit_dimension_exponent(records)
        label = "d_exponent"
    else:
        if args.d is None:
            raise UsageError("scaling needs --d (with --m-list) or --d-list")
        records = scaling_study(args.d, args.m_list, args.trials, args.seed)
        fit = fit_alpha(records)
        label = "alpha"
    header = ["D", "N", "M", "trial", "c_av", "c_max", "bound"]
    rows = [(r.d, r.n, r.m, r.trial, r.c_av, r.c_max, r.bound) for r in records]
    summary = {"slope": fit.slope, "intercept": fit.intercept, "alpha": fit.alpha, "residual": fit.residual}
    if args.summary:
        Path(args.summary).write_text(json_text(summary))
    value = fit.alpha if label == "alpha" else fit.slope
    return _table(args, header, rows, _meta(args)), f"records={len(records)} {label}={value:.6f}", 0


def cmd_verify(args):
    inst = build_instance(args)
    _maybe_save(args, inst)
    report = verify_identities(inst)
    ok = all(v < RESIDUAL_LIMIT for v in report.values())
    if args.format == "json":
        text = json_text({"meta": _meta(args, inst), "residuals": report, "ok": ok})
    else:
        text = csv_text(["check", "residual"], sorted(report.items()), _meta(args, inst))
    worst = max(report.values())
    return text, f"max_residual={worst:.3e} ok={ok}", 0 if ok else 1


def _maybe_save(args, inst):
    if getattr(args, "save_instance", None):
        save_instance(inst, args.save_instance)


# -- parser ---------------------------------------------------------------------

def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="instance JSON file")
    common.add_argument("--d", type=int, help="Hilbert-space dimension")
    common.add_argument("--n", type=int, help="number of source states")
    common.add_argument("--m", type=int, help="number of targets")
    common.add_argument("--family", choices=["hadamard", "random"], default="random")
    common.add_argument("--sources", type=_int_list, help="Hadamard row indices, e.g. '0,3'")
    common.add_argument("--targets", type=_int_list, help="target basis indices, e.g. '3,5'")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (default: $%s/<cmd>.<ext> or stdout)" % OUTPUT_DIR_ENV)
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--save-instance", help="also write the instance as JSON")

    qpe_opts = argparse.ArgumentParser(add_help=False)
    qpe_opts.add_argument("--r", type=int, help="register qubits (default: from --delta-e or 2 c_av)")
    qpe_opts.add_argument("--tau", type=float, default=1.0)
    qpe_opts.add_argument("--p", type=float, default=0.75)
    qpe_opts.add_argument("--delta-e", type=float)

    parser = argparse.ArgumentParser(prog="gengrover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="pair spectrum of H")
    p.add_argument("--stats", action="store_true", help="overlap statistics over random Hadamard instances")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_spectrum)

    for name, func, helptext in (("evolve", cmd_evolve, "continuous-time target probability"),
                                 ("iterate", cmd_iterate, "gate-based Grover iteration")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--initial", choices=["source", "ideal"], default="ideal")
        p.set_defaults(func=func)
        if name == "evolve":
            p.add_argument("--t-max", type=float)
            p.add_argument("--samples", type=int, default=2000)
        else:
            p.add_argument("--k-max", type=int, default=200)
            p.add_argument("--order", choices=["og", "go"], default="og")

    p = sub.add_parser("qpe", parents=[common, qpe_opts], help="register distribution for one source")
    p.add_argument("--source-index", type=int, default=0)
    p.set_defaults(func=cmd_qpe)

    p = sub.add_parser("search", parents=[common, qpe_opts], help="phase-estimation search shots")
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--mode", choices=["qpp", "measure-and-check"], default="qpp")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("scaling", parents=[common], help="c_av scaling study and fit")
    p.add_argument("--m-list", type=_int_list, default=[1, 2, 4, 8])
    p.add_argument("--d-list", type=_int_list)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--summary", help="write the fit as JSON here")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("verify", parents=[common], help="projector-identity residuals")
    p.set_defaults(func=cmd_verify)
    return parser


def _output_path(args) -> Path | None:
    if args.out:
        return Path(args.out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base:
        return Path(base) / f"{args.command}.{args.format}"
    return None


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = "json" if args.command == "search" else "csv"
    try:
        text, summary, code = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except (GroverError, ValueError, ArithmeticError) as exc:
        print(f"error[{getattr(exc, 'code', type(exc).__name__)}]: {exc}", file=sys.stderr)
        return 1
    path = _output_path(args)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    print(f"{args.command}: {summary}", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())
