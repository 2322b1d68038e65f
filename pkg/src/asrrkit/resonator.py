"""Passive split-ring resonator on a host transmission line.

Models an SRR magnetically coupled to a section of transmission line:
the impedance the loaded section presents, the parallel-RLC transform of
the coupled resonator, two-port S-parameters, optimum-coupling and
insertion-loss relations, and the output phase-slope quantities used for
phase detection.

Conventions: SI units throughout, angular frequency `w` in rad/s.  All
functions are pure; frequency arguments accept scalars or numpy arrays.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# Series loss is derived from the quality factor; a lossless resonator is
# approximated by capping Q so the impedance pole at resonance stays finite.
Q_CAP = 1e9

# Magnetic coupling achievable by placing a ring next to the line saturates
# around this value; requests beyond it get a warning.
K_GEOMETRIC_LIMIT = 0.25


@dataclass(frozen=True)
class TransmissionLineSection:
    """Lumped model of the line segment a single resonator couples to."""

    ltl: float  # segment inductance [H]
    ctl: float  # segment capacitance [F]
    length: float  # physical segment length [m]

    def __post_init__(self):
        if self.ltl <= 0 or self.ctl <= 0 or self.length <= 0:
            raise ValueError("transmission line parameters must be positive")

    @property
    def z0(self) -> float:
        """Characteristic impedance sqrt(L/C) [ohm]."""
        return float(np.sqrt(self.ltl / self.ctl))

    def beta(self, w):
        """Phase constant [rad/m] at angular frequency w."""
        return w * np.sqrt(self.ltl * self.ctl) / self.length

    def beta_l(self, w):
        """Electrical length beta*l [rad] of the segment at w."""
        return w * np.sqrt(self.ltl * self.ctl)

    @classmethod
    def from_electrical(cls, z0, beta_l, w, length=1.0):
        """Build a section from characteristic impedance and electrical
        length at a given angular frequency."""
        if beta_l <= 0 or z0 <= 0 or w <= 0:
            raise ValueError("z0, beta_l and w must be positive")
        ltl = z0 * beta_l / w
        ctl = beta_l / (z0 * w)
        return cls(ltl=ltl, ctl=ctl, length=length)


@dataclass(frozen=True)
class SrrParams:
    """Split-ring resonator: lumped LC with series loss and line coupling.

    Loss is stored as the unloaded quality factor q_off; the series loss
    resistance w0*L/q_off and the parallel form w0*L*q_off are derived on
    demand and never stored.
    """

    lsrr: float  # ring inductance [H]
    csrr: float  # ring capacitance [F]
    q_off: float  # unloaded quality factor
    k: float  # magnetic coupling coefficient to the line

    def __post_init__(self):
        if self.lsrr <= 0 or self.csrr <= 0 or self.q_off <= 0:
            raise ValueError("lsrr, csrr and q_off must be positive")
        if not 0.0 <= self.k < 1.0:
            raise ValueError("coupling coefficient k must satisfy 0 <= k < 1")

    @property
    def w0(self) -> float:
        """Resonance frequency 1/sqrt(LC) [rad/s]."""
        return 1.0 / float(np.sqrt(self.lsrr * self.csrr))

    def effective_q(self) -> float:
        """q_off, capped so the loss never degenerates to exactly zero."""
        if self.q_off > Q_CAP:
            warnings.warn(
                f"q_off={self.q_off:g} capped at {Q_CAP:g} to keep the series "
                "loss finite near resonance",
                stacklevel=2,
            )
            return Q_CAP
        return self.q_off

    def r_series(self) -> float:
        """Series loss resistance w0*L/Q [ohm], frequency-independent."""
        return self.w0 * self.lsrr / self.effective_q()

    def r_parallel(self) -> float:
        """Parallel loss resistance w0*L*Q [ohm] at resonance."""
        return self.w0 * self.lsrr * self.effective_q()


@dataclass(frozen=True)
class EquivalentResonator:
    """Parallel RLC equivalent of the line-coupled SRR, referred into the
    line at the point of coupling.  Component values are frozen at the
    resonance frequency."""

    r_eq: float  # [ohm]
    l_eq: float  # [H]
    c_eq: float  # [F]

    def __post_init__(self):
        if self.r_eq <= 0 or self.l_eq <= 0 or self.c_eq <= 0:
            raise ValueError("equivalent resonator values must be positive")

    @property
    def w0(self) -> float:
        return 1.0 / float(np.sqrt(self.l_eq * self.c_eq))

    @property
    def q(self) -> float:
        return self.r_eq / (self.w0 * self.l_eq)

    def impedance(self, w):
        """Impedance of the fixed-value parallel RLC at angular frequency w.

        This is the near-resonance model; see `reflected_impedance` for the
        form that stays exact away from resonance.
        """
        y = 1.0 / self.r_eq + 1j * w * self.c_eq + 1.0 / (1j * w * self.l_eq)
        return 1.0 / y


@dataclass
class TwoPortSweep:
    """Frequency-indexed S-parameter samples of a symmetric two-port."""

    freqs: np.ndarray  # angular frequencies [rad/s], strictly increasing
    s11: np.ndarray
    s21: np.ndarray
    z0_ref: float  # port reference impedance [ohm]

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=float)
        self.s11 = np.asarray(self.s11, dtype=complex)
        self.s21 = np.asarray(self.s21, dtype=complex)
        if self.freqs.ndim != 1 or len(self.freqs) < 2:
            raise ValueError("sweep needs a 1-D grid of at least two frequencies")
        if np.any(np.diff(self.freqs) <= 0):
            raise ValueError("sweep frequencies must be strictly increasing")
        if self.s11.shape != self.freqs.shape or self.s21.shape != self.freqs.shape:
            raise ValueError("s11/s21 must match the frequency grid")

    @property
    def freqs_hz(self) -> np.ndarray:
        return self.freqs / (2.0 * np.pi)

    def s21_db(self) -> np.ndarray:
        return 20.0 * np.log10(np.abs(self.s21))

    def s21_phase(self) -> np.ndarray:
        """Unwrapped transmission phase [rad]."""
        return np.unwrap(np.angle(self.s21))

    def passivity_defect(self) -> float:
        """max(|S11|^2 + |S21|^2 - 1) over the sweep; <= 0 for a passive
        network up to rounding."""
        return float(np.max(np.abs(self.s11) ** 2 + np.abs(self.s21) ** 2 - 1.0))


def mutual_inductance(srr: SrrParams, line: TransmissionLineSection) -> float:
    """M = k*sqrt(L_line * L_ring) [H]."""
    return srr.k * float(np.sqrt(line.ltl * srr.lsrr))


def equivalent_resonator(srr: SrrParams, line: TransmissionLineSection) -> EquivalentResonator:
    """Transform the coupled SRR into its parallel RLC equivalent in the line.

    R' = (w0*M)^2 / r_series, L' = (w0*M)^2 * C, C' = L / (w0*M)^2.  The
    transform preserves the resonance frequency exactly.
    """
    if srr.k == 0.0:
        raise ValueError("no coupling: k=0 leaves the equivalent model degenerate")
    w0 = srr.w0
    m2 = mutual_inductance(srr, line) ** 2
    w0m2 = w0 * w0 * m2
    return EquivalentResonator(
        r_eq=w0m2 / srr.r_series(),
        l_eq=w0m2 * srr.csrr,
        c_eq=srr.lsrr / w0m2,
    )


def srr_branch_impedance(srr: SrrParams, w, gm_neg=0.0):
    """Impedance of the ring branch itself: series r, L and the capacitor,
    with an optional negative conductance gm_neg [S] across the capacitor
    (the small-signal footprint of a cross-coupled pair)."""
    yc = 1j * w * srr.csrr - gm_neg
    return srr.r_series() + 1j * w * srr.lsrr + 1.0 / yc


def reflected_impedance(srr: SrrParams, line: TransmissionLineSection, w, gm_neg=0.0):
    """Impedance the resonator reflects into the line: (wM)^2 / Z_branch.

    Exact at every frequency; reduces to the fixed-value equivalent
    parallel RLC at resonance.
    """
    m = mutual_inductance(srr, line)
    return (w * m) ** 2 / srr_branch_impedance(srr, w, gm_neg)


def series_loading_impedance(srr: SrrParams, line: TransmissionLineSection, w, gm_neg=0.0):
    """Series impedance of the loaded line section: jwL_line plus the
    reflected resonator impedance.  k=0 degenerates to the bare jwL_line."""
    return 1j * w * line.ltl + reflected_impedance(srr, line, w, gm_neg)


def s_parameters(
    srr: SrrParams,
    line: TransmissionLineSection,
    freqs,
    z0_ref=None,
    include_line=False,
    gm_neg=0.0,
) -> TwoPortSweep:
    """Two-port S-parameters of the loaded section inserted in a z0 system.

    The inserted series impedance is the reflected resonator impedance; the
    segment's own jwL_line is added when include_line is set (the default
    isolates the resonator response, which is what matching and phase-slope
    relations are written against).  S21 = 2*z0/(Z + 2*z0), S11 = Z/(Z + 2*z0).
    The shunt capacitance of the segment is intentionally not part of this
    analytic two-port; the mesh verifier supports it as an option.
    """
    freqs = np.asarray(freqs, dtype=float)
    if z0_ref is None:
        z0_ref = line.z0
    z = reflected_impedance(srr, line, freqs, gm_neg)
    if include_line:
        z = z + 1j * freqs * line.ltl
    denom = z + 2.0 * z0_ref
    return TwoPortSweep(freqs=freqs, s11=z / denom, s21=2.0 * z0_ref / denom, z0_ref=z0_ref)


def optimum_q_for_k(k: float, line: TransmissionLineSection, w0: float) -> float:
    """Boosted quality factor that produces an input match (|S11| = 1/3) for
    the given coupling: beta_l * k^2 * Q = 1."""
    if not 0.0 < k < 1.0:
        raise ValueError("k must lie in (0, 1)")
    return 1.0 / (line.beta_l(w0) * k * k)


def optimum_k_for_q(q_on: float, line: TransmissionLineSection, w0: float) -> float:
    """Coupling coefficient that matches the given boosted quality factor."""
    if q_on <= 0:
        raise ValueError("q_on must be positive")
    k = 1.0 / float(np.sqrt(line.beta_l(w0) * q_on))
    if k >= 1.0:
        raise ValueError(f"coupling unrealizable: matching Q={q_on:g} needs k={k:.3f} >= 1")
    return k


def array_insertion_loss(n: int, srr: SrrParams, line: TransmissionLineSection) -> float:
    """Fractional amplitude loss at resonance from n identical disabled
    pixels loading the line: n * R'/(R' + 2*z0) with R' from q_off.

    Linear superposition of single-pixel losses; cascading effects between
    pixels are not modeled.
    """
    if n < 0:
        raise ValueError("pixel count must be non-negative")
    if srr.k == 0.0:
        return 0.0
    r_off = srr.w0 * srr.k**2 * srr.q_off * line.ltl
    return n * r_off / (r_off + 2.0 * line.z0)


def k_max_for_il(
    il_budget: float, n: int, line: TransmissionLineSection, q_off: float, w0: float
) -> float:
    """Largest coupling coefficient that keeps the n-pixel resonant
    insertion loss within the budget (amplitude fraction)."""
    if not 0.0 < il_budget < 1.0:
        raise ValueError("il_budget must lie in (0, 1)")
    if n < 1:
        raise ValueError("need at least one pixel")
    per_pixel = il_budget / n
    if per_pixel >= 1.0:
        raise ValueError("per-pixel loss budget must be below 1")
    r_off = 2.0 * line.z0 * per_pixel / (1.0 - per_pixel)
    k = float(np.sqrt(r_off / (w0 * q_off * line.ltl)))
    if k > K_GEOMETRIC_LIMIT:
        warnings.warn(
            f"required k={k:.3f} exceeds geometric limit {K_GEOMETRIC_LIMIT}",
            stacklevel=2,
        )
    return k


def q_on_min(k_max: float, line: TransmissionLineSection, w0: float) -> float:
    """Lower bound on the boosted quality factor once the insertion-loss
    budget caps the coupling: 1/(beta_l * k_max^2)."""
    return optimum_q_for_k(k_max, line, w0)


def output_phase_slope(res: EquivalentResonator, z0: float) -> float:
    """Transmission phase slope d(phase)/dw at resonance [s/rad].

    2*R'^2 / ((R' + 2*z0) * w0^2 * L'); at the matched point R' = z0 this is
    (2/3)*Q/w0, one third of the bare resonator's phase slope.
    """
    return 2.0 * res.r_eq**2 / ((res.r_eq + 2.0 * z0) * res.w0**2 * res.l_eq)


def effective_q_out(res: EquivalentResonator, z0: float) -> float:
    """Quality factor inferred from the output phase slope: slope * w0 / 2.
    Equals Q/3 for a matched resonator."""
    return output_phase_slope(res, z0) * res.w0 / 2.0


def phase_slope_vs_resistance(srr: SrrParams, line: TransmissionLineSection, z0: float) -> float:
    """Sensitivity of the output phase slope to the ring's parallel loss
    resistance [s/(rad*ohm)].

    Mixed derivative of the transmission phase, referred from the
    equivalent resonator back to the ring through the (M/L)^2 impedance
    ratio.  Under optimum coupling it collapses to (10/9)*C.
    """
    res = equivalent_resonator(srr, line)
    q = res.q
    w0 = res.w0
    m2_over_l2 = (mutual_inductance(srr, line) / srr.lsrr) ** 2
    d_dr_eq = q * (2.0 / w0) * (res.r_eq + 4.0 * z0) / (res.r_eq + 2.0 * z0) ** 2
    return d_dr_eq * m2_over_l2


def detection_band(w0: float, q_on: float):
    """Usable detection band (w_lo, w_hi, bandwidth) around resonance.

    Band edges are where the slope of the linearized output phase changes
    sign; closed form of the quartic in w:
    w = w0*sqrt((2 + 1/Q^2 +/- (1/Q)*sqrt(4 + 1/Q^2))/2), with
    bandwidth ~ w0/Q for large Q.
    """
    if q_on <= 1.0:
        raise ValueError("detection band needs q_on > 1")
    a = 1.0 / (q_on * q_on)
    half = (1.0 / q_on) * float(np.sqrt(4.0 + a))
    w_hi = w0 * float(np.sqrt((2.0 + a + half) / 2.0))
    w_lo = w0 * float(np.sqrt((2.0 + a - half) / 2.0))
    return w_lo, w_hi, w_hi - w_lo


def detection_phase(res: EquivalentResonator, z0: float, w):
    """Linearized output phase -Im(Z')/(R' + 2*z0) [rad].

    Small-angle transmission phase with the off-resonance real part held at
    its resonance value; this is the quantity whose slope zeroes define the
    closed-form detection band, so it is what the numeric band-edge
    cross-check differentiates.
    """
    return -np.imag(res.impedance(w)) / (res.r_eq + 2.0 * z0)
