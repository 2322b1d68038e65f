import math

import numpy as np
import pytest

from asrrkit import active, noise, resonator
from asrrkit.noise import NoiseContext, PhaseNoiseResult
from asrrkit.oracle import solve_linear
from asrrkit.resonator import SrrParams


def make_ctx(fx, **kw):
    defaults = dict(state=fx.state(), z0=fx.z0, p_in=10e-6,
                    delta_omega_s=2 * math.pi * 20e6)
    defaults.update(kw)
    return NoiseContext(**defaults)


class TestWhiteNoise:
    def test_scales_linearly_with_q(self, fx):
        # fixed device (gm0, gamma), quality factor moved by the ring loss
        kwl = fx.gm_params().kn_wl
        st1 = fx.state(q_on=30.0, kwl=kwl)
        gm_fixed = st1.gm
        st2_srr = SrrParams(st1.srr.lsrr, st1.srr.csrr, st1.srr.q_off / 2, st1.srr.k)
        import dataclasses

        gm_same = dataclasses.replace(gm_fixed)
        st2 = active.AsrrState(srr=st2_srr, gm=gm_same)
        ctx1 = make_ctx(fx, state=st1)
        ctx2 = make_ctx(fx, state=st2)
        ratio = noise.white_output_noise_density(ctx2) / noise.white_output_noise_density(ctx1)
        assert ratio == pytest.approx(active.q_on(st2) / active.q_on(st1), rel=1e-12)

    def test_vanishes_without_active_noise(self, fx):
        ctx_hot = make_ctx(fx)
        import dataclasses

        cold_gm = dataclasses.replace(fx.gm_params(), gamma=1e-20)
        ctx_cold = make_ctx(fx, state=active.AsrrState(srr=fx.state().srr, gm=cold_gm))
        assert noise.white_output_noise_density(ctx_cold) \
            == pytest.approx(noise.white_output_noise_density(ctx_hot) * 1e-20, rel=1e-9)

    def test_against_mesh_injection(self, fx):
        # inject a unit current across the line-referred resonator and
        # compute the transfer to the termination from a nodal solve
        st = fx.state()
        ctx = make_ctx(fx, state=st)
        line = fx.line()
        res = resonator.equivalent_resonator(fx.boosted_srr(), line)
        z0 = fx.z0
        w0 = fx.w0
        z_res = res.impedance(w0)
        a = np.array(
            [
                [1 / z0 + 1 / z_res, -1 / z_res],
                [-1 / z_res, 1 / z0 + 1 / z_res],
            ],
            dtype=complex,
        )
        b = np.array([1.0, -1.0], dtype=complex)  # unit source across the resonator
        v1, v2 = solve_linear(a, b)
        transfer_v2_per_i2 = abs(v2) ** 2  # |V_out|^2 per unit injected current^2
        # current density referred into the line picks up R_boost/z0
        i2_referred = active.boosted_resistance(st) / z0
        i2_device = 4 * noise.BOLTZMANN * ctx.temperature * st.gm.gamma * st.gm.gm0
        v2_out = transfer_v2_per_i2 * i2_referred * i2_device
        assert v2_out == pytest.approx(noise.white_output_noise_density(ctx), rel=0.01)
        # one ninth of the injected current reaches the termination
        assert abs(v2 / z0) ** 2 == pytest.approx(1.0 / 9.0, rel=0.01)

    def test_ssb_tracks_carrier(self, fx):
        ctx = make_ctx(fx)
        ctx_half = make_ctx(fx, p_in=ctx.p_in / 2)
        diff = noise.white_ssb_phase_noise(ctx_half) - noise.white_ssb_phase_noise(ctx)
        assert diff == pytest.approx(10 * math.log10(2.0), abs=1e-9)

    def test_detected_power_fraction(self, fx):
        ctx = make_ctx(fx)
        assert noise.detected_power(ctx) / ctx.p_in == pytest.approx(4 / 9, rel=1e-12)

    def test_ssb_rises_with_q(self, fx):
        kwl = fx.gm_params().kn_wl
        vals = [noise.white_ssb_phase_noise(make_ctx(fx, state=fx.state(q_on=q, kwl=kwl)))
                for q in (20.0, 54.0, 150.0)]
        assert vals[0] < vals[1] < vals[2]


class TestFlickerDecomposition:
    def test_zero_input(self):
        assert noise.flicker_gate_decomposition(0.0) == (0.0, -0.0, -0.0, -0.0)

    def test_four_millivolt_split(self):
        v1, v2, v3, v4 = noise.flicker_gate_decomposition(4e-3)
        assert v1 == pytest.approx(3e-3, rel=1e-12)
        assert v2 == v3 == v4 == pytest.approx(-1e-3, rel=1e-12)

    def test_kcl_residual(self, fx):
        gm = fx.gm_params().gm0
        v_fn = 4e-3
        v1, v2, v3, v4 = noise.flicker_gate_decomposition(v_fn)
        v_x = v2
        residual = gm * (v_x + v_fn) + 3 * gm * v_x
        assert abs(residual) < 1e-15


class TestSlopeSensitivities:
    def test_flicker_quadratic_in_q(self, fx):
        kwl = fx.gm_params().kn_wl
        s50 = noise.flicker_sres_sensitivity(fx.state(q_on=50.0, kwl=kwl))
        s100 = noise.flicker_sres_sensitivity(fx.state(q_on=100.0, kwl=kwl))
        assert s100 / s50 == pytest.approx(4.0, abs=1e-9)

    def test_supply_quadratic_in_q(self, fx):
        kwl = fx.gm_params().kn_wl
        s50 = noise.supply_sres_sensitivity(fx.state(q_on=50.0, kwl=kwl))
        s100 = noise.supply_sres_sensitivity(fx.state(q_on=100.0, kwl=kwl))
        assert s100 / s50 == pytest.approx(4.0, abs=1e-9)

    def test_scales_with_device_slopes(self, fx):
        import dataclasses

        st = fx.state()
        doubled = dataclasses.replace(st.gm, kn_wl=2 * st.gm.kn_wl, kp_wl=2 * st.gm.kp_wl)
        st2 = active.AsrrState(srr=st.srr, gm=doubled)
        assert noise.flicker_sres_sensitivity(st2) \
            == pytest.approx(2 * noise.flicker_sres_sensitivity(st), rel=1e-12)

    def test_supply_slope_lambda_zero(self, fx):
        st = fx.state()
        assert noise.gm_slope_vdd(st, "n") == pytest.approx(st.gm.kn_wl / 2, rel=1e-12)

    def test_supply_to_flicker_prefactor_ratio(self, fx):
        st = fx.state()
        slopes_vgs = noise.gm_slope_vgs(st, "n") + noise.gm_slope_vgs(st, "p")
        slopes_vdd = noise.gm_slope_vdd(st, "n") + noise.gm_slope_vdd(st, "p")
        got = noise.supply_sres_sensitivity(st) / noise.flicker_sres_sensitivity(st)
        assert got == pytest.approx(4.0 * slopes_vdd / slopes_vgs, rel=1e-12)

    def test_flicker_against_perturbation_chain(self, fx):
        # gate offset -> block gm shift -> boosted loss -> phase slope
        st = fx.state()
        line = fx.line()
        z0 = fx.z0
        w0 = st.w0
        v_fn = 1e-4
        r = st.r_srr_parallel()
        dgm = (noise.gm_slope_vgs(st, "n") + noise.gm_slope_vgs(st, "p")) / 8 * v_fn

        def slope_for(gm_val):
            q = st.srr.q_off / (1 - gm_val * r)
            srr_q = SrrParams(st.srr.lsrr, fx.c_asrr, q, fx.k_value())
            res = resonator.equivalent_resonator(srr_q, line)
            return resonator.output_phase_slope(res, z0)

        fd = (slope_for(st.gm.gm0 + dgm) - slope_for(st.gm.gm0 - dgm)) / (2 * v_fn)
        assert fd == pytest.approx(noise.flicker_sres_sensitivity(st), rel=0.01)

    def test_channel_length_modulation_enters_slopes(self, fx):
        import dataclasses

        st = fx.state()
        gm_lam = dataclasses.replace(st.gm, lam=0.1)
        st_lam = active.AsrrState(srr=st.srr, gm=gm_lam)
        factor_vgs = 1 + 0.1 * (st.gm.vdd - st.gm.vth)
        factor_vdd = (0.5 + 0.05 * (st.gm.vdd - st.gm.vth)) / 0.5
        assert noise.gm_slope_vgs(st_lam, "n") == pytest.approx(
            st.gm.kn_wl * factor_vgs, rel=1e-12)
        assert noise.supply_sres_sensitivity(st_lam) == pytest.approx(
            noise.supply_sres_sensitivity(st) * factor_vdd, rel=1e-12)

    def test_supply_against_perturbation_chain(self, fx):
        st = fx.state()
        line = fx.line()
        z0 = fx.z0
        r = st.r_srr_parallel()
        v_dd = 1e-4
        dgm = (noise.gm_slope_vdd(st, "n") + noise.gm_slope_vdd(st, "p")) / 2 * v_dd

        def slope_for(gm_val):
            q = st.srr.q_off / (1 - gm_val * r)
            srr_q = SrrParams(st.srr.lsrr, fx.c_asrr, q, fx.k_value())
            res = resonator.equivalent_resonator(srr_q, line)
            return resonator.output_phase_slope(res, z0)

        fd = (slope_for(st.gm.gm0 + dgm) - slope_for(st.gm.gm0 - dgm)) / (2 * v_dd)
        assert fd == pytest.approx(noise.supply_sres_sensitivity(st), rel=0.01)


class TestFlickerPhaseNoise:
    def test_notch_floors_at_white(self, fx):
        ctx = make_ctx(fx, delta_omega_s=0.0)
        assert noise.flicker_phase_noise(ctx, 1e3) == noise.white_ssb_phase_noise(ctx)

    def test_six_db_per_detuning_doubling(self, fx):
        ctx1 = make_ctx(fx)
        ctx2 = make_ctx(fx, delta_omega_s=2 * ctx1.delta_omega_s)
        diff = noise.flicker_phase_noise(ctx2, 1e3, floor_at_white=False) \
            - noise.flicker_phase_noise(ctx1, 1e3, floor_at_white=False)
        assert diff == pytest.approx(10 * math.log10(4.0), abs=1e-9)

    def test_ten_db_per_offset_decade(self, fx):
        ctx = make_ctx(fx)
        diff = noise.flicker_phase_noise(ctx, 1e4, floor_at_white=False) \
            - noise.flicker_phase_noise(ctx, 1e3, floor_at_white=False)
        assert diff == pytest.approx(-10.0, abs=1e-9)


class TestSupplyPhaseNoise:
    def test_quadratic_in_psd_and_detuning(self, fx):
        ctx = make_ctx(fx)
        base = noise.supply_phase_noise(ctx, 1e-18)
        assert noise.supply_phase_noise(ctx, 4e-18) - base == pytest.approx(
            10 * math.log10(4.0), abs=1e-9)
        ctx2 = make_ctx(fx, delta_omega_s=2 * ctx.delta_omega_s)
        assert noise.supply_phase_noise(ctx2, 1e-18) - base == pytest.approx(
            10 * math.log10(4.0), abs=1e-9)

    def test_notch_at_resonance(self, fx):
        ctx = make_ctx(fx, delta_omega_s=0.0)
        assert noise.supply_phase_noise(ctx, 1e-18) == -math.inf


class TestInputPhaseTransfer:
    def test_unity_at_dc(self, fx):
        assert noise.input_phase_transfer(54.0, fx.w0, 0.0) == 1.0

    def test_corner_doubles(self, fx):
        w0 = fx.w0
        gain = noise.input_phase_transfer(54.0, w0, w0 / (2 * 54.0))
        assert gain == pytest.approx(2.0, abs=1e-9)

    def test_low_offset_flat(self, fx):
        # transfer stays below 1.01 for offsets under 0.05 * w0/Q
        w0 = fx.w0
        q = 54.0
        for frac in (0.01, 0.02, 0.045):
            assert noise.input_phase_transfer(q, w0, frac * w0 / q) < 1.01

    def test_never_below_unity(self, fx):
        offsets = np.geomspace(1.0, 1e10, 40)
        gains = noise.input_phase_transfer(54.0, fx.w0, offsets)
        assert np.all(gains >= 1.0)


class TestPmToAm:
    def _sweep(self, fx, span_factor=3.0, points_per_bw=200):
        srr = fx.boosted_srr()
        line = fx.line()
        w0, q = fx.w0, fx.q_on
        span = span_factor * w0 / q
        step = w0 / (points_per_bw * q)
        n = (2 * int(span / step)) | 1
        grid = np.linspace(w0 - span, w0 + span, n)
        return resonator.s_parameters(srr, line, grid, z0_ref=fx.z0)

    def test_null_at_resonance(self, fx):
        sweep = self._sweep(fx)
        assert noise.pm_to_am_gain(sweep, fx.w0, 2 * math.pi * 1e6) < -60.0

    def test_six_db_per_offset_doubling(self, fx):
        sweep = self._sweep(fx)
        w_in = fx.w0 * (1 + 0.3 / fx.q_on)
        d = noise.pm_to_am_gain(sweep, w_in, 2e6) - noise.pm_to_am_gain(sweep, w_in, 1e6)
        assert d == pytest.approx(20 * math.log10(2.0), abs=1e-9)

    def test_edge_rejected(self, fx):
        sweep = self._sweep(fx)
        with pytest.raises(ValueError, match="edge"):
            noise.pm_to_am_gain(sweep, float(sweep.freqs[0]), 1e6)

    def test_even_in_detuning_near_resonance(self, fx):
        # the symmetric matched lineshape (fixed-element parallel RLC)
        # converts evenly in the carrier detuning; the exact transform
        # shifts the transmission minimum ~0.3/Q^2 above resonance and so
        # carries a genuine slope offset at w0
        res = resonator.equivalent_resonator(fx.boosted_srr(), fx.line())
        w0, z0 = fx.w0, fx.z0
        grid = np.linspace(w0 * (1 - 1e-4), w0 * (1 + 1e-4), 2001)
        z = res.impedance(grid)
        sweep = resonator.TwoPortSweep(
            freqs=grid, s11=z / (z + 2 * z0), s21=2 * z0 / (z + 2 * z0), z0_ref=z0
        )
        for frac in (1e-5, 2e-5, 3e-5):
            up = noise.pm_to_am_gain(sweep, w0 * (1 + frac), 1e6)
            dn = noise.pm_to_am_gain(sweep, w0 * (1 - frac), 1e6)
            assert abs(up - dn) < 1e-3


class TestFivePointStencil:
    def test_polynomial_exact(self):
        x = np.linspace(0.0, 1.0, 101)
        y = x**4
        d = noise.five_point_derivative(y, x)
        assert np.max(np.abs(d[2:-2] - 4 * x[2:-2] ** 3)) < 1e-10

    def test_nonuniform_rejected(self):
        x = np.array([0.0, 1.0, 2.5, 3.0, 4.0])
        with pytest.raises(ValueError, match="uniform"):
            noise.five_point_derivative(x, x**2)


class TestFlickerRms:
    def test_degenerate_band(self):
        assert noise.flicker_rms(1e-10, (1e3, 1e3)) == 0.0

    def test_natural_log_band(self):
        assert noise.flicker_rms(1e-10, (1.0, math.e)) == pytest.approx(math.sqrt(1e-10), rel=1e-12)

    def test_against_quadrature(self):
        kf = 3e-11
        band = (1.0, 1e3)
        f = np.geomspace(band[0], band[1], 200_001)
        num = math.sqrt(np.trapezoid(kf / f, f))
        assert noise.flicker_rms(kf, band) == pytest.approx(num, rel=1e-6)


class TestSnr:
    def test_detuning_invariance_bit_exact(self, fx):
        st = fx.state()
        vals_c, vals_r = set(), set()
        for df in (1e6, 10e6, 100e6):
            _ = df  # the closed forms carry no detuning dependence at all
            vals_c.add(noise.snr_delta_c(st, fx.kf, (1.0, 1e3)))
            vals_r.add(noise.snr_delta_r(st, fx.kf, (1.0, 1e3), 1.0))
        assert len(vals_c) == 1 and len(vals_r) == 1

    def test_full_chain_recomputation(self, fx):
        # signal: matched phase slope; noise: four-device flicker-driven
        # slope wobble (amplitude weight 4); detuning cancels
        st = fx.state()
        band = (1.0, 1e3)
        res = resonator.equivalent_resonator(fx.boosted_srr(), fx.line())
        s_res = resonator.output_phase_slope(res, fx.z0)
        chain = s_res / (4 * noise.flicker_rms(fx.kf, band) * noise.flicker_sres_sensitivity(st))
        assert chain == pytest.approx(noise.snr_delta_c(st, fx.kf, band), rel=1e-6)

    def test_loss_snr_scaling(self, fx):
        st = fx.state()
        band = (1.0, 1e3)
        base = noise.snr_delta_r(st, fx.kf, band, 1.0)
        assert noise.snr_delta_r(st, fx.kf, band, 3.0) == pytest.approx(3 * base, rel=1e-12)
        # inverse-square in the ring loss at fixed alpha and band
        import dataclasses

        srr2 = SrrParams(st.srr.lsrr * 2, st.srr.csrr, st.srr.q_off, st.srr.k)
        gm2 = dataclasses.replace(st.gm, gm0=st.gm.gm0 / 2.075)  # keep it stable
        st2 = active.AsrrState(srr=srr2, gm=gm2)
        ratio = noise.snr_delta_r(st2, fx.kf, band, 1.0) / base
        assert ratio == pytest.approx((st.r_srr_parallel() / st2.r_srr_parallel()) ** 2, rel=1e-9)


class TestResultRecord:
    def test_contributor_validated(self):
        with pytest.raises(ValueError, match="contributor"):
            PhaseNoiseResult(1e3, -120.0, "cosmic")
        with pytest.raises(ValueError, match="finite"):
            PhaseNoiseResult(1e3, math.inf, "white")


class TestContextGuards:
    def test_context_validation(self, fx):
        with pytest.raises(ValueError, match="temperature"):
            make_ctx(fx, temperature=0.0)
        with pytest.raises(ValueError, match="band"):
            make_ctx(fx, flicker_band=(1e3, 1.0))
        with pytest.raises(ValueError, match="p_in"):
            make_ctx(fx, p_in=0.0)

    def test_bad_offsets_rejected(self, fx):
        ctx = make_ctx(fx)
        with pytest.raises(ValueError, match="offset"):
            noise.flicker_phase_noise(ctx, 0.0)
        with pytest.raises(ValueError, match="PSD"):
            noise.supply_phase_noise(ctx, -1e-18)
        with pytest.raises(ValueError, match="band"):
            noise.flicker_rms(1e-10, (0.0, 1e3))
