"""Command-line entry point.

All I/O uses natural units with w_q = 1 (energies in w_q, times in 1/w_q).
Subcommands: gap, weights, line, sweep2d, fastscan, deltascan, optimal-omega,
selftest.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import sweep as sweep_mod
from .analytic import ResonanceIndex, optimal_base_frequency
from .floquet import (
    DriveConfig,
    TruncationConfig,
    default_truncation,
    fourier_weights,
    propagator_oracle,
    quasienergy_gap,
    solve_floquet,
)
from .noise import NoiseModel
from .sensitivity import verify_weight_identity
from .serialize import format_float, write_csv, write_json

SWEEP2D_HEADER = ["b", "nu", "omega", "gap", "dgap_db", "dgap_dOmega",
                  "gamma_phi", "t_phi", "omega_star", "flags"]
LINE_HEADER = ["b", "gap", "dgap_db", "dgap_dOmega", "gamma_phi", "t_phi",
               "flags"]
FASTSCAN_HEADER = ["Omega1", "gap_exact", "gap_rwa", "gap_gvv", "chi",
                   "dgap_db", "gamma_phi", "t_phi", "flags"]
DELTASCAN_HEADER = ["delta", "inv_delta", "b", "gap_exact", "dgap_db",
                    "gamma_phi", "t_phi", "flags"]


def _add_drive_args(p, with_b=True, with_omega=True):
    if with_b:
        p.add_argument("--b", type=float, default=0.0, help="DC bias (w_q)")
    p.add_argument("--Omega", type=float, default=0.0,
                   help="AC drive strength (w_q)")
    p.add_argument("--nu", type=float, default=0.0,
                   help="mixing angle (rad, in [0, pi/2])")
    p.add_argument("--N1", type=int, default=3, help="first harmonic index")
    p.add_argument("--N2", type=int, default=1, help="second harmonic index")
    if with_omega:
        p.add_argument("--omega", type=float, default=1.0,
                       help="base frequency (w_q)")


def _add_noise_args(p):
    p.add_argument("--v-f", type=float, default=9.0e-6)
    p.add_argument("--v-d", type=float, default=3.0e-6)
    p.add_argument("--ir-factor", type=float, default=4.0)
    p.add_argument("--temp-ratio", type=float, default=1.43)


def _add_out_args(p):
    p.add_argument("--output", "-o", default=None, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bifloquet",
        description="Bichromatically driven Floquet qubit toolkit")
    parser.add_argument("--config", default=None,
                        help="key = value config file; flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gap", help="quasienergy gap at a single drive point")
    _add_drive_args(p)
    p.add_argument("--n-max", type=int, default=None)
    _add_out_args(p)

    p = sub.add_parser("weights", help="Fourier weights g_k at a drive point")
    _add_drive_args(p)
    p.add_argument("--k-max", type=int, default=None)
    _add_out_args(p)

    p = sub.add_parser("line", help="1D bias scan of gap/sensitivities/T_phi")
    _add_drive_args(p, with_b=False)
    p.add_argument("--b-min", type=float, default=-1.0)
    p.add_argument("--b-max", type=float, default=1.0)
    p.add_argument("--count", type=int, default=201)
    _add_noise_args(p)
    _add_out_args(p)

    p = sub.add_parser("sweep2d", help="(b, nu) grid sweep")
    _add_drive_args(p, with_b=False)
    p.add_argument("--b-min", type=float, default=-1.0)
    p.add_argument("--b-max", type=float, default=1.0)
    p.add_argument("--b-count", type=int, default=201)
    p.add_argument("--nu-min", type=float, default=0.0)
    p.add_argument("--nu-max", type=float, default=math.pi / 2)
    p.add_argument("--nu-count", type=int, default=201)
    p.add_argument("--omega-policy", choices=("fixed", "optimal"),
                   default="fixed")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--sweet-report", default=None,
                   help="optional JSON sweet/sour-spot report path")
    _add_noise_args(p)
    _add_out_args(p)

    p = sub.add_parser("fastscan",
                       help="Omega1 scan near a multiphoton resonance")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--l", type=int, default=-2)
    p.add_argument("--N1", type=int, default=3)
    p.add_argument("--N2", type=int, default=1)
    p.add_argument("--omega", type=float, default=10.0)
    p.add_argument("--Omega2", type=float, default=1.0,
                   help="fixed weak-tone amplitude (w_q)")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--omega1-min", type=float, default=0.0)
    p.add_argument("--omega1-max", type=float, default=30.0)
    p.add_argument("--count", type=int, default=201)
    _add_noise_args(p)
    _add_out_args(p)

    p = sub.add_parser("deltascan", help="T_phi versus detuning delta")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--l", type=int, default=-2)
    p.add_argument("--N1", type=int, default=3)
    p.add_argument("--N2", type=int, default=1)
    p.add_argument("--omega", type=float, default=10.0)
    p.add_argument("--Omega1", type=float, default=15.0)
    p.add_argument("--Omega2", type=float, default=1.0)
    p.add_argument("--delta-min", type=float, default=1e-5)
    p.add_argument("--delta-max", type=float, default=1e-1)
    p.add_argument("--count", type=int, default=25)
    _add_noise_args(p)
    _add_out_args(p)

    p = sub.add_parser("optimal-omega",
                       help="solve the sweet-spot condition omega* = Theta")
    _add_drive_args(p, with_omega=False)
    _add_out_args(p)

    p = sub.add_parser("selftest",
                       help="run oracle and identity cross-checks")
    p.add_argument("--quick", action="store_true",
                   help="reduced grid and fewer random sets")
    return parser


def _apply_config(parser, argv):
    """Load --config key = value pairs as parser defaults (flags win)."""
    path = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    if path is None:
        return
    overrides = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                parser.error(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            overrides[key] = value
    known = {}
    for sp in parser._subparsers._group_actions[0].choices.values():
        for action in sp._actions:
            if action.dest != "help":
                known.setdefault(action.dest, action)
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if dest not in known:
            parser.error(f"unknown config key: {key}")
        action = known[dest]
        typed = action.type(value) if action.type else value
        for sp in parser._subparsers._group_actions[0].choices.values():
            if any(a.dest == dest for a in sp._actions):
                sp.set_defaults(**{dest: typed})


def _drive_from_args(args, b=None, omega=None):
    return DriveConfig(
        w_q=1.0,
        b=args.b if b is None else b,
        big_omega=args.Omega,
        nu=args.nu,
        n1=args.N1,
        n2=args.N2,
        omega=args.omega if omega is None else omega)


def _noise_from_args(args):
    return NoiseModel(v_f=args.v_f, v_d=args.v_d, ir_factor=args.ir_factor,
                      temp_ratio=args.temp_ratio)


def _cmd_gap(args):
    drive = _drive_from_args(args)
    trunc = (default_truncation(drive) if args.n_max is None else
             TruncationConfig(n_max=args.n_max,
                              k_max=min(4 * max(drive.n1, drive.n2),
                                        2 * args.n_max)))
    spec = solve_floquet(drive, trunc)
    gap = quasienergy_gap(spec)
    print(f"gap = {abs(gap):.7f} w_q "
          f"(eps_plus = {spec.eps_plus:.7g}, eps_minus = {spec.eps_minus:.7g})")
    if args.output:
        payload = {"gap": gap, "eps_plus": spec.eps_plus,
                   "eps_minus": spec.eps_minus, "omega": drive.omega,
                   "n_max": spec.n_max}
        if args.format == "json":
            write_json(args.output, payload)
        else:
            write_csv(args.output, list(payload),
                      [[payload[k] for k in payload]])
    return 0


def _cmd_weights(args):
    drive = _drive_from_args(args)
    trunc = default_truncation(drive)
    k_max = args.k_max if args.k_max is not None else trunc.k_max
    spec = solve_floquet(drive, trunc)
    weights = fourier_weights(spec, k_max)
    print(f"g_0 = {weights[0]:.7g}; k_max = {k_max}")
    if args.output:
        ks = sorted(weights)
        if args.format == "json":
            write_json(args.output,
                       {"k": ks, "g_k": [weights[k] for k in ks]})
        else:
            write_csv(args.output, ["k", "g_k"],
                      [[float(k), weights[k]] for k in ks])
    return 0


def _write_table(args, table, header, first):
    if not args.output:
        return
    if args.format == "json":
        write_json(args.output, {h: list(table[h]) for h in header})
    else:
        rows = [[table[h][i] for h in header]
                for i in range(len(table[first]))]
        write_csv(args.output, header, rows)


def _cmd_line(args):
    template = _drive_from_args(args, b=0.0)
    noise = _noise_from_args(args)
    values = np.linspace(args.b_min, args.b_max, args.count)
    table = sweep_mod.sweep_line(template, "b", values, noise)
    i_min = int(np.nanargmin(np.abs(table["dgap_db"])))
    print(f"line: {args.count} points; min |dgap_db| = "
          f"{abs(table['dgap_db'][i_min]):.3g} at b = {values[i_min]:.4g}")
    _write_table(args, table, LINE_HEADER, "b")
    return 0


def _cmd_sweep2d(args):
    template = _drive_from_args(args, b=0.0)
    noise = _noise_from_args(args)
    spec = sweep_mod.GridSpec(
        template=template,
        b_range=(args.b_min, args.b_max, args.b_count),
        nu_range=(args.nu_min, args.nu_max, args.nu_count),
        omega_policy=args.omega_policy)
    result = sweep_mod.sweep_grid(spec, noise, workers=args.threads)
    finite = result.t_phi[np.isfinite(result.t_phi)]
    print(f"sweep2d: {args.nu_count}x{args.b_count} grid; "
          f"max T_phi = {np.max(finite):.4g} 1/w_q")
    if args.output:
        rows = []
        for j, nu in enumerate(result.nu_values):
            for i, b in enumerate(result.b_values):
                rows.append([
                    float(b), float(nu), result.omega[j, i],
                    result.gap[j, i], result.dgap_db[j, i],
                    result.dgap_domega[j, i], result.gamma_phi[j, i],
                    result.t_phi[j, i], result.omega_star[j, i],
                    result.flags[j][i]])
        if args.format == "json":
            write_json(args.output,
                       {h: [r[c] for r in rows]
                        for c, h in enumerate(SWEEP2D_HEADER)})
        else:
            write_csv(args.output, SWEEP2D_HEADER, rows)
    if args.sweet_report:
        report = sweep_mod.find_sweet_spots(result)
        write_json(args.sweet_report, {
            "dc_sweet": report.dc_sweet,
            "doubly_sweet": report.doubly_sweet,
            "sour": report.sour})
    return 0


def _cmd_fastscan(args):
    k = args.m * args.N1 + args.l * args.N2
    b = k * args.omega + args.delta
    template = DriveConfig(w_q=1.0, b=b, big_omega=args.Omega2,
                           nu=math.pi / 2, n1=args.N1, n2=args.N2,
                           omega=args.omega)
    noise = _noise_from_args(args)
    values = np.linspace(args.omega1_min, args.omega1_max, args.count)
    table = sweep_mod.fast_drive_scan(template, args.m, args.l, values, noise)
    err_gvv = np.nanmedian(np.abs(table["gap_gvv"] - table["gap_exact"]))
    err_rwa = np.nanmedian(np.abs(table["gap_rwa"] - table["gap_exact"]))
    print(f"fastscan: {args.count} points; median |gvv-exact| = "
          f"{err_gvv:.3g}, median |rwa-exact| = {err_rwa:.3g}")
    _write_table(args, table, FASTSCAN_HEADER, "Omega1")
    return 0


def _cmd_deltascan(args):
    template = DriveConfig(
        w_q=1.0, b=0.0,
        big_omega=math.hypot(args.Omega1, args.Omega2),
        nu=math.atan2(args.Omega2, args.Omega1),
        n1=args.N1, n2=args.N2, omega=args.omega)
    noise = _noise_from_args(args)
    deltas = np.logspace(math.log10(args.delta_min),
                         math.log10(args.delta_max), args.count)
    table = sweep_mod.delta_scan(template, args.m, args.l, deltas, noise)
    print(f"deltascan: {args.count} points; "
          f"T_phi range [{np.min(table['t_phi']):.3g}, "
          f"{np.max(table['t_phi']):.3g}] 1/w_q")
    _write_table(args, table, DELTASCAN_HEADER, "delta")
    return 0


def _cmd_optimal_omega(args):
    drive = DriveConfig(w_q=1.0, b=args.b, big_omega=args.Omega, nu=args.nu,
                        n1=args.N1, n2=args.N2, omega=1.0)
    omega_star, residual = optimal_base_frequency(drive)
    print(f"omega* = {omega_star:.10g} w_q (residual {residual:.3g})")
    if args.output:
        payload = {"omega_star": omega_star, "residual": residual}
        if args.format == "json":
            write_json(args.output, payload)
        else:
            write_csv(args.output, list(payload),
                      [[payload[k] for k in payload]])
    return 0


def _cmd_selftest(args):
    rng = np.random.default_rng(7)
    n_sets = 5 if args.quick else 12
    worst_gap = 0.0
    for _ in range(n_sets):
        n2 = int(rng.integers(1, 3))
        n1 = int(rng.integers(1, 4))
        if n1 == n2:
            n1 += 1  # distinct harmonics keep both tones independent
        drive = DriveConfig(
            w_q=1.0,
            b=float(rng.uniform(-1, 1)),
            big_omega=float(rng.uniform(0, 1)),
            nu=float(rng.uniform(0, math.pi / 2)),
            n1=n1,
            n2=n2,
            omega=float(rng.uniform(0.5, 10.0)))
        spec = solve_floquet(drive)
        _, quasi, _ = propagator_oracle(drive, steps_per_period=1 << 16)
        mine = np.sort([spec.eps_plus, spec.eps_minus])
        err = float(np.max(np.abs(mine - quasi)))
        worst_gap = max(worst_gap, err)
    print(f"selftest: propagator oracle max |deviation| = {worst_gap:.3g} w_q")
    if worst_gap > 1e-6:
        print("selftest: FAIL (oracle disagreement)")
        return 1
    grid = 4 if args.quick else 8
    worst_res = 0.0
    for b in np.linspace(-0.9, 0.9, grid):
        for nu in np.linspace(0.05, math.pi / 2 - 0.05, grid):
            drive = DriveConfig(w_q=1.0, b=float(b), big_omega=0.1,
                                nu=float(nu), n1=3, n2=1, omega=1.0)
            rep = verify_weight_identity(drive)
            rel = rep.residual / max(1.0, abs(rep.weight_value))
            worst_res = max(worst_res, rel)
    print(f"selftest: weight identity max relative residual = {worst_res:.3g}")
    if worst_res > 1e-4:
        print("selftest: FAIL (weight identity)")
        return 1
    print("selftest: PASS")
    return 0


_COMMANDS = {
    "gap": _cmd_gap,
    "weights": _cmd_weights,
    "line": _cmd_line,
    "sweep2d": _cmd_sweep2d,
    "fastscan": _cmd_fastscan,
    "deltascan": _cmd_deltascan,
    "optimal-omega": _cmd_optimal_omega,
    "selftest": _cmd_selftest,
}


def run(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    _apply_config(parser, argv)
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return _COMMANDS[args.command](args)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
