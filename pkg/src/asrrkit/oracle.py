"""Independent numerical verifiers for the analytic models.

A direct frequency-domain solve of the coupled circuit (no closed-form
transforms), a Brent root finder, finite-difference helpers, and a
time-domain average of the segmented large-signal transconductance.
Everything here exists to check the analytic modules from a second route;
the analytic modules never call into this one.

All solvers are deterministic for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .resonator import SrrParams, TransmissionLineSection, TwoPortSweep
from .active import GmBlockParams


@dataclass(frozen=True)
class MeshCircuit:
    """Coupled two-loop network: line segment inductance magnetically
    coupled to a series-RLC ring, between z0 ports.  Options: split shunt
    capacitance ctl/2 at each port, and a negative conductance across the
    ring capacitor."""

    ltl: float  # line segment inductance [H]
    lsrr: float  # ring inductance [H]
    m: float  # mutual inductance [H]
    r_srr: float  # ring series loss [ohm]
    csrr: float  # ring capacitance [F]
    z0: float  # port reference impedance [ohm]
    ctl: float = 0.0  # total segment shunt capacitance [F]; 0 disables
    gm_neg: float = 0.0  # negative conductance across the ring capacitor [S]

    def __post_init__(self):
        if self.m * self.m > self.ltl * self.lsrr:
            raise ValueError("inductance matrix not positive semi-definite (|k| > 1)")

    @classmethod
    def from_parts(cls, srr: SrrParams, line: TransmissionLineSection, include_ctl=False, gm_neg=0.0):
        m = srr.k * float(np.sqrt(line.ltl * srr.lsrr))
        return cls(
            ltl=line.ltl,
            lsrr=srr.lsrr,
            m=m,
            r_srr=srr.r_series(),
            csrr=srr.csrr,
            z0=line.z0,
            ctl=line.ctl if include_ctl else 0.0,
            gm_neg=gm_neg,
        )


def solve_linear(a, b):
    """Solve a small dense complex system by Gaussian elimination with
    partial pivoting.  b may hold multiple right-hand sides as columns."""
    a = np.array(a, dtype=complex)
    b = np.array(b, dtype=complex)
    n = a.shape[0]
    if b.ndim == 1:
        b = b[:, None]
    aug = np.hstack([a, b])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if np.abs(aug[piv, col]) < 1e-300:
            raise ValueError("singular system at the active-instability boundary")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col + 1 :] -= np.outer(aug[col + 1 :, col] / aug[col, col], aug[col])
    x = np.zeros((n, b.shape[1]), dtype=complex)
    for row in range(n - 1, -1, -1):
        x[row] = (aug[row, n:] - aug[row, row + 1 : n] @ x[row + 1 :]) / aug[row, row]
    return x if b.shape[1] > 1 else x[:, 0]


def solve_two_port(circ: MeshCircuit, w: float) -> np.ndarray:
    """Full 2x2 S-matrix at angular frequency w from the nodal/mesh system.

    Unknowns are the port node voltages, the branch current through the
    coupled segment, and the ring loop current; each port is driven in turn
    behind z0 with the other port terminated, so reciprocity is an outcome
    rather than an assumption.
    """
    z0 = circ.z0
    y_shunt = 1j * w * circ.ctl / 2.0
    yc = 1j * w * circ.csrr - circ.gm_neg
    if yc == 0:
        raise ValueError("singular system at the active-instability boundary")
    z_ring = circ.r_srr + 1j * w * circ.lsrr + 1.0 / yc

    # rows: KCL at node 1, KCL at node 2, coupled-branch voltage, ring loop
    a = np.array(
        [
            [1.0 / z0 + y_shunt, 0.0, 1.0, 0.0],
            [0.0, 1.0 / z0 + y_shunt, -1.0, 0.0],
            [1.0, -1.0, -1j * w * circ.ltl, -1j * w * circ.m],
            [0.0, 0.0, 1j * w * circ.m, z_ring],
        ],
        dtype=complex,
    )
    # drive port 1, then port 2, with unit source voltage
    b = np.array(
        [
            [1.0 / z0, 0.0],
            [0.0, 1.0 / z0],
            [0.0, 0.0],
            [0.0, 0.0],
        ],
        dtype=complex,
    )
    x = solve_linear(a, b)
    v1_d1, v2_d1 = x[0, 0], x[1, 0]
    v1_d2, v2_d2 = x[0, 1], x[1, 1]
    return np.array(
        [
            [2.0 * v1_d1 - 1.0, 2.0 * v1_d2],
            [2.0 * v2_d1, 2.0 * v2_d2 - 1.0],
        ],
        dtype=complex,
    )


def sweep_two_port(circ: MeshCircuit, freqs) -> TwoPortSweep:
    """Run solve_two_port across a grid and collect (S11, S21)."""
    freqs = np.asarray(freqs, dtype=float)
    s11 = np.empty(len(freqs), dtype=complex)
    s21 = np.empty(len(freqs), dtype=complex)
    for i, w in enumerate(freqs):
        s = solve_two_port(circ, w)
        s11[i] = s[0, 0]
        s21[i] = s[1, 0]
    return TwoPortSweep(freqs=freqs, s11=s11, s21=s21, z0_ref=circ.z0)


def brent(f, a, b, xtol=1e-12, max_iter=200):
    """Find a root of f in [a, b] by Brent's method.

    f(a) and f(b) must have opposite signs.  Returns x with the bracket
    narrowed below xtol (plus machine-epsilon scaled slack).
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ValueError("root not bracketed")
    c, fc = a, fa
    d = e = b - a
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * eps * abs(b) + 0.5 * xtol
        mid = 0.5 * (c - b)
        if abs(mid) <= tol or fb == 0.0:
            return b
        if abs(e) < tol or abs(fa) <= abs(fb):
            d = e = mid
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * mid * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * mid * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * mid * q - abs(tol * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = e = mid
        a, fa = b, fb
        b += d if abs(d) > tol else (tol if mid > 0 else -tol)
        fb = f(b)
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
    return b


def derivative_sign_roots(x, y, xtol):
    """Roots of dy/dx located from gridded samples: finite-difference the
    samples, then Brent on the linear interpolant of the derivative across
    each sign change."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dy = np.gradient(y, x)
    roots = []
    for i in range(len(x) - 1):
        if dy[i] == 0.0:
            roots.append(float(x[i]))
        elif dy[i] * dy[i + 1] < 0:
            lo, hi = x[i], x[i + 1]
            dlo, dhi = dy[i], dy[i + 1]

            def lin(t, lo=lo, hi=hi, dlo=dlo, dhi=dhi):
                return dlo + (dhi - dlo) * (t - lo) / (hi - lo)

            roots.append(brent(lin, lo, hi, xtol=xtol))
    return roots


def find_phase_extrema(sweep: TwoPortSweep, xtol=None):
    """Frequencies where the transmission phase slope changes sign.

    Works on the unwrapped angle of S21; the sweep must bracket both
    extrema.  Returns (w_lo, w_hi).
    """
    if xtol is None:
        xtol = 1e-6 * float(np.median(sweep.freqs))
    roots = derivative_sign_roots(sweep.freqs, sweep.s21_phase(), xtol)
    if len(roots) < 2:
        raise ValueError("sweep does not bracket both phase extrema")
    return min(roots), max(roots)


def find_curve_extrema(freqs, values, xtol):
    """Generic slope-sign-change locator for any sampled curve; returns the
    sorted root list."""
    return sorted(derivative_sign_roots(freqs, values, xtol))


def central_difference(f, x, rel_step=1e-6):
    """d f/dx by central difference with a step relative to |x|."""
    h = abs(x) * rel_step
    if h == 0.0:
        raise ValueError("central difference needs a nonzero expansion point")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def segmented_gm(theta, v_asrr, p: GmBlockParams):
    """Large-signal device transconductance across one cycle of the swing
    v_asrr*sin(theta): square-law value in saturation, proportional to the
    drain-source voltage in triode, zero in cutoff.  Region boundaries at
    sin(theta) = +/- vth/v_asrr."""
    s = np.sin(theta)
    gm = p.gm0 + p.kn_wl * (v_asrr / 2.0) * s
    if v_asrr > p.vth:
        edge = p.vth / v_asrr
        gm = np.where(s > edge, p.kn_wl * (p.vdd / 2.0 - (v_asrr / 2.0) * s), gm)
        gm = np.where(s < -edge, 0.0, gm)
    return gm


def time_avg_gm(v_asrr: float, p: GmBlockParams, samples: int = 100_000) -> float:
    """Cycle average of the segmented transconductance by trapezoidal
    quadrature, with panels split at the region boundaries so the kinks do
    not slow convergence.  Verifies the closed-form average from a second
    route."""
    if samples < 10_000:
        raise ValueError("need at least 1e4 samples for the quadrature")
    edges = [0.0, 2.0 * np.pi]
    if v_asrr > p.vth:
        thc = np.arccos(p.vth / v_asrr)
        edges += [np.pi / 2 - thc, np.pi / 2 + thc, 3 * np.pi / 2 - thc, 3 * np.pi / 2 + thc]
    edges = sorted(edges)
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        n = max(16, int(samples * (hi - lo) / (2.0 * np.pi)))
        theta = np.linspace(lo, hi, n + 1)
        total += float(np.trapezoid(segmented_gm(theta, v_asrr, p), theta))
    return total / (2.0 * np.pi)
