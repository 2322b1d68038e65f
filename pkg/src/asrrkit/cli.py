"""Command-line front end.

Subcommands: sweep, match, nonlin, noise, snr, design, validate.  Inputs
come from a flat key-value config (see config.py); outputs are CSV,
Touchstone and key-value report files written into --out (or $ASRRKIT_OUT,
or the working directory).

Exit codes: 0 success, 1 config error, 2 numerical or validation failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__, active, noise, resonator, validate
from .active import AsrrState, GmBlockParams
from .config import ConfigError, optional, parse_config_file, require
from .design import DesignSpec, InfeasibleDesignError, synthesize, power_estimate
from .resonator import SrrParams, TransmissionLineSection
from .sweepio import (
    fmt,
    write_keyvalues,
    write_noise_csv,
    write_sweep_csv,
    write_table_csv,
    write_touchstone,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2

GRID_POINTS_PER_BANDWIDTH = 100  # keeps spacing <= w0/(100*Q)


def _say(args, msg):
    if not args.quiet:
        print(msg)


def _outdir(args) -> str:
    out = args.out or os.environ.get("ASRRKIT_OUT") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _build_line(cfg, w0) -> TransmissionLineSection:
    if "ltl" in cfg and "ctl" in cfg:
        return TransmissionLineSection(
            ltl=require(cfg, "ltl"), ctl=require(cfg, "ctl"),
            length=optional(cfg, "length", 30e-6),
        )
    z0 = optional(cfg, "z0", 50.0)
    beta_l = require(cfg, "beta_l")
    return TransmissionLineSection.from_electrical(
        z0, beta_l, w0, length=optional(cfg, "length", 30e-6)
    )


def _build_srr(cfg, line) -> tuple[SrrParams, float]:
    """Resonator from config; k defaults to the matched value for q_on (or
    q_off if no boost is configured).  Returns (srr, w0)."""
    f0 = require(cfg, "f0")
    w0 = 2.0 * math.pi * f0
    lsrr = require(cfg, "lsrr")
    csrr = optional(cfg, "csrr", None)
    if csrr is None:
        csrr = 1.0 / (w0 * w0 * lsrr)
    q = optional(cfg, "q_on", None) or require(cfg, "q_off")
    k = optional(cfg, "k", None)
    if k is None:
        k = resonator.optimum_k_for_q(q, line, w0)
    srr = SrrParams(lsrr=lsrr, csrr=csrr, q_off=q, k=k)
    return srr, w0


def _build_state(cfg) -> tuple[AsrrState, TransmissionLineSection, float]:
    """Active pixel from config: q_off plus either gm0 or q_on."""
    f0 = require(cfg, "f0")
    w0 = 2.0 * math.pi * f0
    line = _build_line(cfg, w0)
    lsrr = require(cfg, "lsrr")
    c_gm = optional(cfg, "c_gm", None)
    c_asrr = optional(cfg, "c_asrr", None)
    if c_asrr is None:
        c_asrr = 1.0 / (w0 * w0 * lsrr)
    if c_gm is None:
        c_gm = 0.3 * c_asrr
    csrr = c_asrr - c_gm
    if csrr <= 0:
        raise ConfigError("c_gm must stay below the total resonating capacitance")
    q_off = require(cfg, "q_off")
    r_par = w0 * lsrr * q_off
    gm0 = optional(cfg, "gm0", None)
    if gm0 is None:
        q_on_target = require(cfg, "q_on")
        gm0 = (1.0 - q_off / q_on_target) / r_par
    vdd = optional(cfg, "vdd", 1.0)
    vth = optional(cfg, "vth", 0.3)
    kwl_default = gm0 / (vdd / 2.0 - vth) if vdd / 2.0 > vth else 1e-3
    gm = GmBlockParams(
        gm0=gm0,
        kn_wl=optional(cfg, "kn_wl", kwl_default),
        kp_wl=optional(cfg, "kp_wl", kwl_default),
        vdd=vdd,
        vth=vth,
        c_gm=c_gm,
        kf=optional(cfg, "kf", 1e-10),
        gamma=optional(cfg, "gamma", 1.0),
        lam=optional(cfg, "lambda", 0.0),
    )
    k = optional(cfg, "k", None)
    srr = SrrParams(lsrr=lsrr, csrr=csrr, q_off=q_off, k=k if k is not None else 0.1)
    state = AsrrState(srr=srr, gm=gm)
    if k is None:
        k = resonator.optimum_k_for_q(active.q_on(state), line, state.w0)
        srr = SrrParams(lsrr=lsrr, csrr=csrr, q_off=q_off, k=k)
        state = AsrrState(srr=srr, gm=gm)
    return state, line, w0


def _grid(args, cfg, w0, q) -> np.ndarray:
    if args.grid:
        try:
            start, stop, count = args.grid.split(":")
            f_lo, f_hi, n = float(start), float(stop), int(count)
        except ValueError as exc:
            raise ConfigError(f"bad --grid {args.grid!r}, want START:STOP:N in Hz") from exc
        if not (0 < f_lo < f_hi and n >= 2):
            raise ConfigError("grid needs 0 < START < STOP and N >= 2")
        return 2.0 * np.pi * np.linspace(f_lo, f_hi, n)
    span = 3.0 * w0 / q
    step = w0 / (GRID_POINTS_PER_BANDWIDTH * q)
    n = (2 * int(span / step)) | 1
    return np.linspace(w0 - span, w0 + span, n)


def cmd_sweep(args, cfg):
    line = _build_line(cfg, 2.0 * math.pi * require(cfg, "f0"))
    srr, w0 = _build_srr(cfg, line)
    grid = _grid(args, cfg, w0, srr.q_off)
    sweep = resonator.s_parameters(srr, line, grid, z0_ref=optional(cfg, "z0", line.z0))
    out = _outdir(args)
    paths = []
    if args.format in ("csv", "both"):
        path = os.path.join(out, "sweep.csv")
        write_sweep_csv(path, sweep)
        paths.append(path)
    if args.format in ("s2p", "both"):
        path = os.path.join(out, "sweep.s2p")
        write_touchstone(path, sweep)
        paths.append(path)
    i0 = int(np.argmin(np.abs(grid - w0)))
    _say(args, f"wrote {', '.join(paths)}; |S21({srr.w0 / 2 / math.pi:g} Hz)| = "
               f"{sweep.s21_db()[i0]:.3f} dB")
    return EXIT_OK


def cmd_match(args, cfg):
    f0 = require(cfg, "f0")
    w0 = 2.0 * math.pi * f0
    line = _build_line(cfg, w0)
    z0 = optional(cfg, "z0", line.z0)
    lsrr = optional(cfg, "lsrr", 50e-12)
    out = _outdir(args)

    rows = []
    for k in np.linspace(0.02, 0.3, 57):
        q = resonator.optimum_q_for_k(k, line, w0)
        srr = SrrParams(lsrr=lsrr, csrr=1.0 / (w0**2 * lsrr), q_off=q, k=k)
        z = resonator.reflected_impedance(srr, line, w0)
        s11_db = 20.0 * math.log10(abs(z / (z + 2 * z0)))
        rows.append((k, q, s11_db))
    locus_path = os.path.join(out, "match_locus.csv")
    write_table_csv(locus_path, ("k", "q_on", "s11_db_at_f0"), rows)

    contour_rows = []
    for k in np.linspace(0.02, 0.3, 29):
        for q in np.geomspace(5.0, 500.0, 25):
            srr = SrrParams(lsrr=lsrr, csrr=1.0 / (w0**2 * lsrr), q_off=q, k=k)
            z = resonator.reflected_impedance(srr, line, w0)
            contour_rows.append((k, q, 20.0 * math.log10(abs(z / (z + 2 * z0)))))
    contour_path = os.path.join(out, "s11_contours.csv")
    write_table_csv(contour_path, ("k", "q_on", "s11_db_at_f0"), contour_rows)
    _say(args, f"wrote {locus_path}, {contour_path}")
    return EXIT_OK


def cmd_nonlin(args, cfg):
    state, line, w0 = _build_state(cfg)
    p_lin = active.linear_power_limit(state)
    p_lo = optional(cfg, "p_in_min", 0.01 * p_lin)
    p_hi = optional(cfg, "p_in_max", 30.0 * p_lin)
    n = int(optional(cfg, "p_in_points", 41))
    rows = []
    for p_in in np.geomspace(p_lo, p_hi, n):
        v_lin = active.asrr_voltage_swing(state, p_in)
        q_nl, v_nl = active.q_on_nonlinear(state, p_in)
        rows.append((p_in, v_lin, v_nl, q_nl))
    out = _outdir(args)
    path = os.path.join(out, "nonlin.csv")
    write_table_csv(
        path,
        ("p_in_w", "v_asrr_linear_v", "v_asrr_v", "q_on_nonlin"),
        rows,
        comments=(f"p_in_lin_w = {fmt(p_lin)}", f"q_on_linear = {fmt(active.q_on(state))}"),
    )
    _say(args, f"wrote {path}; p_in_lin = {p_lin:.3e} W")
    return EXIT_OK


def cmd_noise(args, cfg):
    state, line, w0 = _build_state(cfg)
    z0 = optional(cfg, "z0", line.z0)
    ctx = noise.NoiseContext(
        state=state,
        z0=z0,
        p_in=optional(cfg, "p_in", 10e-6),
        temperature=optional(cfg, "temperature", 290.0),
        delta_omega_s=2.0 * math.pi * optional(cfg, "delta_f_s", 20e6),
        flicker_band=(optional(cfg, "f_lo", 1.0), optional(cfg, "f_hi", 1e3)),
    )
    q = active.q_on(state)
    results = []
    offsets = np.geomspace(optional(cfg, "offset_min", 100.0),
                           optional(cfg, "offset_max", 1e8), 31)
    white = noise.white_ssb_phase_noise(ctx)
    supply_psd = optional(cfg, "supply_psd", None)  # off unless asked for
    for off in offsets:
        results.append(noise.PhaseNoiseResult(off, white, "white"))
        results.append(noise.PhaseNoiseResult(
            off, noise.flicker_phase_noise(ctx, off), "flicker"))
        gain_db = 10.0 * math.log10(noise.input_phase_transfer(q, state.w0, 2 * math.pi * off))
        results.append(noise.PhaseNoiseResult(off, gain_db, "input"))
        if supply_psd is not None:
            results.append(noise.PhaseNoiseResult(
                off, noise.supply_phase_noise(ctx, supply_psd), "supply"))
    out = _outdir(args)
    noise_path = os.path.join(out, "phase_noise.csv")
    write_noise_csv(noise_path, results)

    # PM-to-AM conversion vs carrier detuning
    span = 2.0 * state.w0 / q
    step = state.w0 / (200.0 * q)
    n = (2 * int(span / step)) | 1
    grid = np.linspace(state.w0 - span, state.w0 + span, n)
    sweep = resonator.s_parameters(state.effective_srr(), line, grid, z0_ref=z0)
    rows = []
    offset = 2.0 * math.pi * optional(cfg, "pm_am_offset", 1e6)
    start = len(grid) // 2 % 10  # keep the zero-detune row in the table
    if start < 5:
        start += 10
    for w_in in grid[start:-5:10]:
        gain = noise.pm_to_am_gain(sweep, float(w_in), offset)
        rows.append(((w_in - state.w0) / (2 * math.pi), gain if math.isfinite(gain) else -300.0))
    pm_path = os.path.join(out, "pm_to_am.csv")
    write_table_csv(pm_path, ("detune_hz", "conversion_db"), rows)
    _say(args, f"wrote {noise_path}, {pm_path}")
    return EXIT_OK


def cmd_snr(args, cfg):
    state, line, w0 = _build_state(cfg)
    band = (optional(cfg, "f_lo", 1.0), optional(cfg, "f_hi", 1e3))
    kf = state.gm.kf
    snr_c = noise.snr_delta_c(state, kf, band)
    snr_r = noise.snr_delta_r(state, kf, band, optional(cfg, "delta_r_ref", 1.0))
    out = _outdir(args)
    path = os.path.join(out, "snr.txt")
    write_keyvalues(path, [
        ("snr_delta_c", snr_c),
        ("snr_delta_r", snr_r),
        ("q_on", active.q_on(state)),
        ("r_asrr_ohm", active.boosted_resistance(state)),
        ("p_in_lin_w", active.linear_power_limit(state)),
    ])
    _say(args, f"wrote {path}; SNR_dC = {snr_c:.4g}, SNR_dR = {snr_r:.4g}")
    return EXIT_OK


def cmd_design(args, cfg):
    f0 = require(cfg, "f0")
    w0 = 2.0 * math.pi * f0
    line = _build_line(cfg, w0)
    spec = DesignSpec(
        f0=f0,
        n_pixels=int(optional(cfg, "n_pixels", 1)),
        il_budget=require(cfg, "il_budget"),
        snr_dc_target=require(cfg, "snr_dc_target"),
        snr_dr_target=require(cfg, "snr_dr_target"),
        delta_r_ref=optional(cfg, "delta_r_ref", 1.0),
        z0=optional(cfg, "z0", line.z0),
        line=line,
        kn=require(cfg, "kn"),
        kp=require(cfg, "kp"),
        vth=require(cfg, "vth"),
        vdd=require(cfg, "vdd"),
        kf_area=require(cfg, "kf_area"),
        c_per_area=require(cfg, "c_per_area"),
        l_srr_max=require(cfg, "l_srr_max"),
        q_off=optional(cfg, "q_off", 10.0),
        cap_weight=optional(cfg, "cap_weight", 1.0),
        flicker_band=(optional(cfg, "f_lo", 1.0), optional(cfg, "f_hi", 1e3)),
    )
    try:
        result = synthesize(spec)
    except InfeasibleDesignError as exc:
        print(f"infeasible: binding constraint = {exc.constraint}; {exc.detail}",
              file=sys.stderr)
        return EXIT_NUMERIC
    out = _outdir(args)
    machine = os.path.join(out, "design.txt")
    pairs = [(k, getattr(result, k)) for k in (
        "k", "q_on", "r_srr", "l_srr", "c_asrr", "c_gm", "c_srr", "gm_required",
        "wl_ratio_n", "wl_ratio_p", "w_n", "l_n", "w_p", "l_p", "gate_area",
        "alpha_1_over_f", "kf_device", "v_fn_rms", "snr_dc", "snr_dr",
        "p_in_lin", "power_estimate",
    )]
    write_keyvalues(machine, pairs)
    report = os.path.join(out, "design_report.txt")
    lines = [
        "pixel design report",
        f"  coupling k          : {result.k:.4f}",
        f"  boosted Q           : {result.q_on:.2f}",
        f"  ring L              : {result.l_srr * 1e12:.3f} pH",
        f"  total C             : {result.c_asrr * 1e15:.3f} fF",
        f"  ring loss (par)     : {result.r_srr:.1f} ohm",
        f"  required gm         : {result.gm_required * 1e3:.4f} mS",
        f"  device W/L (n, p)   : {result.wl_ratio_n:.2f}, {result.wl_ratio_p:.2f}",
        f"  device W x L (n)    : {result.w_n * 1e6:.3f} um x {result.l_n * 1e9:.1f} nm",
        f"  achieved SNR dC     : {result.snr_dc:.1f}",
        f"  achieved SNR dR     : {result.snr_dr:.1f}",
        f"  linear input power  : {result.p_in_lin * 1e6:.2f} uW",
        f"  supply power        : {power_estimate(result) * 1e6:.2f} uW",
    ]
    for note in result.notes:
        lines.append(f"  note: {note}")
    with open(report, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _say(args, f"wrote {machine}, {report}")
    return EXIT_OK


def cmd_validate(args, cfg):
    results = validate.run_all(cfg if cfg else None)
    failed = [r for r in results if not r.passed]
    for r in results:
        _say(args, r.line())
    _say(args, f"{len(results) - len(failed)}/{len(results)} checks passed "
               f"in {sum(r.elapsed for r in results):.1f} s")
    if failed:
        # always name failures, even under --quiet
        for r in failed:
            print(r.line(), file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "match": cmd_match,
    "nonlin": cmd_nonlin,
    "noise": cmd_noise,
    "snr": cmd_snr,
    "design": cmd_design,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asrrkit",
        description="Analytic models and design tools for actively boosted "
                    "split-ring sensing pixels.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("sweep", "S-parameter sweep of a configured pixel (CSV / Touchstone)"),
        ("match", "optimum coupling locus and S11 contours"),
        ("nonlin", "swing and quality factor versus input power"),
        ("noise", "phase-noise breakdown and PM-to-AM conversion"),
        ("snr", "detection SNR figures"),
        ("design", "synthesize a pixel from targets"),
        ("validate", "run the full analytic-vs-numeric check suite"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="flat key-value config file")
        p.add_argument("--out", help="output directory (default $ASRRKIT_OUT or '.')")
        p.add_argument("--format", choices=("csv", "s2p", "both"), default="csv")
        p.add_argument("--grid", help="frequency grid START:STOP:N in Hz")
        p.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg: dict = {}
    try:
        if args.config:
            cfg = parse_config_file(args.config)
        elif args.command not in ("validate", "match"):
            raise ConfigError(f"'{args.command}' needs --config")
        return COMMANDS[args.command](args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
