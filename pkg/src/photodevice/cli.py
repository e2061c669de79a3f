"""Command line interface.

Exit codes: 0 success, 1 usage/config error, 2 validation failure,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .device import solve_device
from .errors import ConfigurationError, InvalidParameterError, PhotodeviceError
from .fcs import counting_spec_particles, counting_spec_photons, noise_drazin, noise_quadrature
from .rate_net import gillespie_sample
from .sweep import PRESET_NAMES, evaluate_point, load_config, run_preset, run_sweep, write_csv
from .thermo import conductance, thermo_from_solution
from .validate import run_validate

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--out", help="output CSV path (default: stdout)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="photodevice", description="Photoelectric device NESS simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("ness", parents=[common], help="steady state and thermodynamics at one point")
    sub.add_parser("sweep", parents=[common], help="sweep one parameter axis to CSV")
    sub.add_parser("conductance", parents=[common], help="zero-bias conductance")
    p_noise = sub.add_parser("noise", parents=[common], help="current noise and SNR")
    p_noise.add_argument("--counting", choices=("l", "r", "photons"), default="l")
    p_noise.add_argument("--gillespie", action="store_true", help="add a stochastic estimate")
    p_preset = sub.add_parser("preset", parents=[common], help="figure reproduction sweeps")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_val = sub.add_parser("validate", parents=[common], help="run every cross-oracle invariant suite")
    p_val.add_argument("--seed", type=int, default=None)
    p_val.add_argument("--no-sampling", action="store_true", help="skip the Gillespie suite")
    return parser


def _emit(rows, out, comments=()):
    write_csv(rows, out if out else sys.stdout, comments)


def _cmd_ness(cfg, args):
    sol = solve_device(cfg.base)
    th = thermo_from_solution(sol)
    lind = sol.lindblad
    if args.out:
        _emit([evaluate_point(cfg.base, cfg.outputs)], args.out)
    print(f"populations  {np.array2string(sol.populations, precision=12)}")
    print(f"residual     {lind.residual:.3e}  trace_error {lind.trace_error:.3e}  "
          f"min_eig {lind.min_eigenvalue:.3e}  kernel_dim {lind.kernel_dim}")
    for key in ("J", "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot", "eta_C"):
        print(f"{key:<12} {getattr(th, key):.12e}")
    print(f"{'Q':<12} {'undef' if th.Q is None else format(th.Q, '.12e')}")
    print(f"{'regime':<12} {th.regime}")
    return EXIT_OK


def _cmd_noise(cfg, args):
    sol = solve_device(cfg.base)
    spec = counting_spec_photons() if args.counting == "photons" else counting_spec_particles(args.counting)
    dr = noise_drazin(spec, sol.liouvillian, sol.rho)
    qu = noise_quadrature(spec, sol.liouvillian, sol.rho)
    print(f"I   {dr.I:.12e}\nM   {dr.M:.12e}\nD   {dr.D:.12e} (drazin)\nD   {qu.D:.12e} (quadrature)")
    print(f"SNR {'undef' if dr.snr is None else format(dr.snr, '.12e')}")
    if args.gillespie:
        g = gillespie_sample(sol.jumps, spec.weights, seed=cfg.seed)
        print(f"gillespie mean {g.mean_rate:.6e} +- {g.mean_stderr:.1e}, "
              f"variance rate {g.variance_rate:.6e} +- {g.variance_stderr:.1e} (seed {g.seed})")
    return EXIT_OK


def _cmd_validate(cfg, args):
    seed = cfg.seed if args.seed is None else args.seed
    results = run_validate(seed, include_sampling=not args.no_sampling)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config, args.overrides)
        if args.command == "ness":
            return _cmd_ness(cfg, args)
        if args.command == "sweep":
            if cfg.axis is None:
                raise ConfigurationError("sweep needs 'axis' and 'grid'")
            _emit(run_sweep(cfg, args.jobs), args.out or cfg.out_path)
            return EXIT_OK
        if args.command == "conductance":
            print(f"G {conductance(cfg.base):.12e}")
            return EXIT_OK
        if args.command == "noise":
            return _cmd_noise(cfg, args)
        if args.command == "preset":
            res = run_preset(args.name, cfg.base, args.jobs)
            _emit(res.rows, args.out or cfg.out_path, res.comments)
            return EXIT_OK
        if args.command == "validate":
            return _cmd_validate(cfg, args)
    except (ConfigurationError, InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PhotodeviceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
