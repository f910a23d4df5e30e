"""Command-line interface.

Subcommands: ``explore`` (grid sweep), ``scenario resnet`` (converter
decomposition study), ``fit-adc`` (survey envelope fit), ``oracle``
(behavioral Monte-Carlo run).  Exit codes: 0 success, 1 configuration
error, 2 sweep finished but no grid point was feasible.
"""

from __future__ import annotations

import argparse
import sys

from . import analog as ana
from . import chains, emit, explore, oracle
from .cells import InputDistribution, load_cell_spec
from .errors import VmmDseError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2


def _parse_n_values(spec: str):
    """Parse '16:4096:log2' or a comma-separated list of sizes."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3 or parts[2] != "log2":
            raise VmmDseError(f"bad n spec {spec!r}; expected start:stop:log2")
        start, stop = int(parts[0]), int(parts[1])
        if start < 1 or stop < start:
            raise VmmDseError(f"bad n range {spec!r}")
        values = []
        n = start
        while n <= stop:
            values.append(n)
            n *= 2
        return tuple(values)
    return tuple(int(tok) for tok in spec.split(","))


def _parse_int_list(spec: str):
    return tuple(int(tok) for tok in spec.split(","))


def _add_config_arg(parser):
    parser.add_argument(
        "--config",
        metavar="FILE",
        help="sweep config JSON (packaged defaults when omitted)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vmmdse",
        description="compare VMM hardware across the time, charge, and digital domains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_explore = sub.add_parser("explore", help="run a (domain, N, B) sweep")
    _add_config_arg(p_explore)
    p_explore.add_argument("--domains", help="comma list out of td,analog,digital")
    p_explore.add_argument("--n", help="array dimensions: '16:4096:log2' or '64,576'")
    p_explore.add_argument("--bits", help="comma list of input bit widths")
    p_explore.add_argument("--m", type=int, help="parallel chains per converter")
    p_explore.add_argument("--mode", choices=[chains.MODE_PRECISE, chains.MODE_RELAXED])
    p_explore.add_argument("--clip-bits", type=int, dest="clip_bits")
    p_explore.add_argument("--pw", type=float, help="weight-bit one-density")
    p_explore.add_argument("--out", metavar="CSV", help="result table destination")
    p_explore.add_argument("--plot", metavar="SVG", help="plot destination")
    p_explore.add_argument(
        "--plot-kind", default="energy", choices=sorted(emit.PLOT_KINDS)
    )

    p_scn = sub.add_parser("scenario", help="run a named study")
    p_scn.add_argument("name", choices=["resnet"])
    _add_config_arg(p_scn)
    p_scn.add_argument("--out", metavar="CSV", help="scenario table destination")

    p_fit = sub.add_parser("fit-adc", help="fit the converter survey envelope")
    p_fit.add_argument("--survey", required=True, metavar="CSV")
    p_fit.add_argument("--min-rate", type=float, default=1.0e6, dest="min_rate")
    p_fit.add_argument("--out", metavar="JSON", help="envelope destination")

    p_orc = sub.add_parser("oracle", help="behavioral Monte-Carlo chain run")
    _add_config_arg(p_orc)
    p_orc.add_argument("--trials", type=int, default=100_000)
    p_orc.add_argument("--seed", type=int, default=0)
    p_orc.add_argument("--n", type=int, default=576)
    p_orc.add_argument("--r", type=int, default=1)
    p_orc.add_argument("--bits", type=int, default=4, help="cell bit width fixture")
    p_orc.add_argument(
        "--mismatch", choices=[oracle.MISMATCH_STATIC, oracle.MISMATCH_NOISE],
        default=oracle.MISMATCH_STATIC,
    )
    p_orc.add_argument("--dump", metavar="CSV", help="write raw per-trial errors")
    return parser


def _cmd_explore(args) -> int:
    cfg = explore.load_config(args.config)
    cfg = explore.override_config(
        cfg,
        domains=tuple(args.domains.split(",")) if args.domains else None,
        n_values=_parse_n_values(args.n) if args.n else None,
        b_values=_parse_int_list(args.bits) if args.bits else None,
        m=args.m,
        mode=args.mode,
        clip_bits=args.clip_bits,
        weight_one_density=args.pw,
    )
    result = explore.run_sweep(cfg)
    if args.out:
        emit.emit_csv(result, args.out)
        print(f"wrote {args.out} ({len(result.rows)} rows)")
    if args.plot:
        emit.emit_plot(result, args.plot_kind, args.plot)
        print(f"wrote {args.plot}")
    feasible = len(result.feasible())
    print(f"{feasible}/{len(result.rows)} grid points feasible")
    if feasible == 0:
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_scenario(args) -> int:
    cfg = explore.load_config(args.config)
    result = explore.resnet_scenario(cfg)
    if args.out:
        emit.emit_scenario_csv(result, args.out)
        print(f"wrote {args.out} ({len(result.rows)} rows)")
    for row in result.rows:
        if row.kind != "operating":
            continue
        print(
            f"n={row.n} m={row.m} b={row.b}: range {row.range_bits} bits, "
            f"hybrid {row.hybrid_energy:.3e} J vs sar {row.sar_energy:.3e} J "
            f"-> {row.chosen}"
        )
    return EXIT_OK


def _cmd_fit_adc(args) -> int:
    records = ana.read_adc_survey(args.survey)
    envelope = ana.fit_adc_envelope(records, args.min_rate)
    print(
        f"k1 = {envelope.k1:.6e} J/bit, k2 = {envelope.k2:.6e} J, "
        f"area pick = {envelope.area_pick:.6e} m2"
    )
    if args.out:
        envelope.save(args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    cfg = explore.load_config(args.config)
    if args.bits not in cfg.cell_paths:
        raise VmmDseError(f"no cell fixture configured for b={args.bits}")
    spec = load_cell_spec(cfg.cell_paths[args.bits])
    dist = InputDistribution.default(args.bits, pw=cfg.weight_one_density)
    mc = oracle.MonteCarloConfig(
        trials=args.trials,
        seed=args.seed,
        n=args.n,
        r=args.r,
        input_mode=oracle.SampledInputs(dist),
        mismatch=args.mismatch,
    )
    errors = oracle.chain_error_samples(spec, mc)
    stats = oracle.simulate_chain(spec, mc)
    if args.dump:
        oracle.dump_samples(errors, args.dump)
        print(f"wrote {args.dump}")
    from .cells import cell_error_stats

    cell = cell_error_stats(spec, dist)
    pred = chains.chain_stats(cell, args.n, args.r)
    print(f"backend:            {oracle.backend_name()}")
    print(f"trials:             {stats.trials}")
    print(f"empirical mean:     {stats.mean:+.6e} steps (model {pred.mu:+.6e})")
    print(f"empirical sigma:    {stats.sigma:.6e} steps (model {pred.sigma:.6e})")
    print(f"empirical variance: {stats.variance:.6e} steps^2 (model {pred.variance:.6e})")
    if pred.variance > 0.0:
        print(f"variance deviation: {stats.variance / pred.variance - 1.0:+.3%}")
    print(f"skew:               {stats.skew:+.4f}")
    return EXIT_OK


_COMMANDS = {
    "explore": _cmd_explore,
    "scenario": _cmd_scenario,
    "fit-adc": _cmd_fit_adc,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (VmmDseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
