"""Attenuation laws, material models, admissibility, complete monotonicity."""

import cmath
import math

import numpy as np
import pytest
from scipy.special import erfc

import viscowave as vw


def polar_power(z: complex, alpha: float) -> complex:
    """Independent principal-branch power via explicit polar decomposition."""
    r = abs(z)
    theta = math.atan2(z.imag, z.real)
    return r**alpha * cmath.exp(1j * alpha * theta)


class TestEvalB:
    def test_single_atom(self):
        law = vw.MeasureLaw(nu=vw.SpectralMeasure(atoms=((1.0, 1.0),)))
        assert law.evaluate(1.0) == pytest.approx(0.5)

    def test_power(self):
        assert vw.PowerLaw(a=2.0, alpha=0.5).evaluate(9.0) == pytest.approx(6.0)

    def test_log_power(self):
        law = vw.LogPowerLaw(alpha=1.0)
        assert law.evaluate(math.e - 1.0) == pytest.approx(math.e - 1.0)

    def test_cole(self):
        law = vw.ColeLaw(c=2.0, a=3.0, alpha=0.5)
        assert law.evaluate(4.0) == pytest.approx(2.0 * 2.0 / 5.0)

    def test_two_exponent(self):
        law = vw.TwoExponentLaw(c=1.0, tau=2.0, alpha=0.8, beta=0.4)
        p = 3.0
        want = (1 + 2 * p) ** 0.4 * (2 * p) ** 0.4
        assert law.evaluate(p) == pytest.approx(want)

    @pytest.mark.parametrize("law", [
        vw.PowerLaw(a=1.0, alpha=0.5),
        vw.PowerLaw(a=-1.0, alpha=1.5),
        vw.LogPowerLaw(alpha=0.7),
        vw.ColeLaw(c=1.0, a=1.0, alpha=0.5),
        vw.TwoExponentLaw(c=1.0, tau=1.0, alpha=0.8, beta=0.4),
        vw.MeasureLaw(nu=vw.SpectralMeasure(atoms=((0.5, 1.0), (4.0, 2.0)))),
    ])
    def test_conjugate_symmetry(self, law):
        for p in (1.0 + 2.0j, 0.3 + 0.01j, -0.5 + 1.0j):
            assert law.evaluate(np.conj(p)) == pytest.approx(
                np.conj(law.evaluate(p)), rel=1e-12)

    def test_principal_branch_against_polar_oracle(self):
        for alpha in (0.3, 0.5, 1.5, 2.5):
            law = vw.PowerLaw(a=1.0 if alpha <= 1 else -1.0, alpha=alpha)
            for p in (-1j * 2.0, 1.0 + 1.0j, 0.1 - 0.4j):
                want = law.a * polar_power(p, alpha)
                assert law.evaluate(p) == pytest.approx(want, rel=1e-14)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            vw.PowerLaw(a=-1.0, alpha=0.5)   # negative amplitude needs alpha > 1
        with pytest.raises(ValueError):
            vw.PowerLaw(a=1.0, alpha=3.5)
        with pytest.raises(ValueError):
            vw.LogPowerLaw(alpha=0.0)
        with pytest.raises(ValueError):
            vw.ColeLaw(c=1.0, a=-1.0, alpha=0.5)
        with pytest.raises(ValueError):
            vw.TwoExponentLaw(c=1.0, tau=1.0, alpha=0.4, beta=0.8)

    def test_vectorized_evaluation(self):
        law = vw.PowerLaw(a=1.0, alpha=0.5)
        ps = np.array([1.0, 4.0, 9.0], dtype=complex)
        np.testing.assert_allclose(law.evaluate(ps), [1.0, 2.0, 3.0])


class TestMaterialModel:
    def test_wave_operator(self, power_half_model):
        assert power_half_model.wave_operator(4.0) == pytest.approx(6.0)

    def test_elastic_wave_operator(self):
        m = vw.MaterialModel(rho=1.0, c0=2.0, law=vw.MeasureLaw())
        assert m.wave_operator(10.0) == pytest.approx(5.0)

    def test_wave_operator_imaginary_axis(self, power_half_model):
        got = power_half_model.wave_operator(-1j)
        want = complex(math.sqrt(2) / 2, -(1 + math.sqrt(2) / 2))
        assert got == pytest.approx(want, rel=1e-14)

    def test_modulus_elastic(self, elastic_model):
        assert elastic_model.modulus_transform(3.0) == pytest.approx(1.0)

    def test_modulus_power_law(self, power_half_model):
        # rho p^2/B^2 at p=1 for this model
        assert power_half_model.modulus_transform(1.0) == pytest.approx(0.25)

    def test_modulus_power_law_closed_form_grid(self, power_half_model):
        # rho c0^2 p^2 / (p + a p^alpha)^2 across the sampled range
        A = power_half_model.rho * power_half_model.c0**2
        for p in np.logspace(-3, 3, 13):
            g = p + p**0.5
            assert power_half_model.modulus_transform(p) == pytest.approx(
                A * p**2 / g**2, rel=1e-12)

    def test_modulus_from_measure(self):
        m = vw.MaterialModel(rho=1.0, mu=vw.SpectralMeasure(atoms=((1.0, 1.0),)),
                             mu0=0.0)
        assert m.modulus_transform(1.0, route="measure") == pytest.approx(0.5)
        assert m.c0 == pytest.approx(1.0)  # from the instantaneous modulus

    def test_inconsistent_sides_rejected(self):
        with pytest.raises(ValueError, match="disagree"):
            vw.MaterialModel(rho=1.0, c0=1.0, law=vw.PowerLaw(a=1.0, alpha=0.5),
                             mu=vw.SpectralMeasure(atoms=((1.0, 1.0),)), mu0=0.0)

    def test_missing_pieces_rejected(self):
        with pytest.raises(ValueError):
            vw.MaterialModel(rho=1.0)
        with pytest.raises(ValueError):
            vw.MaterialModel(rho=1.0, law=vw.PowerLaw(a=1.0, alpha=0.5))
        with pytest.raises(ValueError):
            vw.MaterialModel(rho=-1.0, c0=1.0, law=vw.MeasureLaw())

    def test_json_roundtrip(self, power_half_model):
        again = vw.MaterialModel.from_json(power_half_model.to_json())
        assert again.rho == power_half_model.rho
        assert again.c0 == power_half_model.c0
        assert again.law == power_half_model.law


class TestRelaxationModulus:
    def test_equilibrium_only(self):
        m = vw.MaterialModel(rho=1.0, mu=vw.SpectralMeasure(), mu0=1.0)
        for t in (0.1, 1.0, 10.0):
            assert m.relaxation_modulus(t) == 1.0

    def test_single_relaxation_time(self):
        m = vw.MaterialModel(rho=1.0, mu=vw.SpectralMeasure(atoms=((1.0, 1.0),)))
        assert m.relaxation_modulus(1.0) == pytest.approx(math.exp(-1.0))

    def test_power_half_closed_form(self, power_half_model):
        # inverse transform of p/(p + p^(1/2))^2 in closed form
        for t in (0.1, 1.0, 5.0):
            want = ((1 + 2 * t) * math.exp(t) * erfc(math.sqrt(t))
                    - 2 * math.sqrt(t / math.pi))
            assert power_half_model.relaxation_modulus(t) == pytest.approx(
                want, rel=1e-8)

    def test_two_contours_agree(self):
        m = vw.MaterialModel(rho=1.0, c0=1.0, law=vw.PowerLaw(a=1.0, alpha=0.6))
        from viscowave.green import bromwich_invert, ContourParams

        def g_tilde(p):
            B = p / m.c0 + m.law.evaluate(p)
            return m.rho * p / B**2

        for t in (0.3, 2.0):
            v1 = bromwich_invert(g_tilde, t, ContourParams(eps=1.0 / t)).value
            v2 = bromwich_invert(g_tilde, t, ContourParams(eps=2.5 / t)).value
            assert v1 == pytest.approx(v2, rel=1e-6)

    def test_power_law_curve_positive_decreasing(self):
        m = vw.MaterialModel(rho=1.0, c0=1.0, law=vw.PowerLaw(a=1.0, alpha=0.6))
        ts = np.logspace(-1, 1, 9)
        gs = [m.relaxation_modulus(t) for t in ts]
        assert all(g > 0 for g in gs)
        assert all(b < a for a, b in zip(gs, gs[1:]))

    def test_rejects_nonpositive_time(self, power_half_model):
        with pytest.raises(ValueError):
            power_half_model.relaxation_modulus(0.0)


class TestAdmissibility:
    def test_power_law_passes(self):
        assert vw.admissibility_check(vw.PowerLaw(a=1.0, alpha=0.5)).passed

    def test_quadratic_fails_sublinearity(self):
        report = vw.admissibility_check(vw.PowerLaw(a=1.0, alpha=2.0))
        assert not report.passed
        assert not report.sublinear_ok

    def test_cole_passes(self):
        assert vw.admissibility_check(vw.ColeLaw(c=1.0, a=1.0, alpha=0.5)).passed

    def test_two_exponent_passes(self):
        assert vw.admissibility_check(
            vw.TwoExponentLaw(c=1.0, tau=1.0, alpha=0.8, beta=0.4)).passed

    @pytest.mark.parametrize("law", [
        vw.MeasureLaw(nu=vw.SpectralMeasure(atoms=((1.0, 1.0),))),
        vw.MeasureLaw(nu=vw.SpectralMeasure(atoms=((0.2, 0.5), (30.0, 2.0)))),
        vw.MeasureLaw(nu=vw.SpectralMeasure(
            density=vw.PowerLawDensity(a=1.0, alpha=0.9))),
    ])
    def test_measure_backed_always_passes(self, law):
        assert vw.admissibility_check(law).passed

    def test_zero_law_passes(self):
        assert vw.admissibility_check(vw.MeasureLaw()).passed

    def test_superlinear_fails(self):
        report = vw.admissibility_check(vw.PowerLaw(a=-1.0, alpha=1.5))
        assert not report.passed

    def test_log_power_at_boundary_fails_origin_limit(self):
        # b(0+) = 1 for the boundary exponent: not a vanishing-origin law
        report = vw.admissibility_check(vw.LogPowerLaw(alpha=1.0))
        assert not report.vanishes_at_origin_ok

    def test_derivative_bound(self):
        # 0 <= b'(p) <= b(p)/p on the positive axis
        laws = [vw.PowerLaw(a=1.0, alpha=0.5),
                vw.ColeLaw(c=1.0, a=1.0, alpha=0.5),
                vw.MeasureLaw(nu=vw.SpectralMeasure(atoms=((1.0, 1.0), (9.0, 3.0))))]
        for law in laws:
            for p in np.logspace(-2, 2, 9):
                h = 1e-5 * p
                b = law.evaluate(p).real
                db = (law.evaluate(p + h).real - law.evaluate(p - h).real) / (2 * h)
                assert -1e-9 <= db <= b / p * (1 + 1e-6)

    def test_wave_operator_maps_upper_half_plane(self, power_half_model):
        radii = np.logspace(-3, 3, 13)
        args = np.linspace(0.05, math.pi - 0.05, 9)
        for r in radii:
            for th in args:
                p = r * cmath.exp(1j * th)
                assert power_half_model.wave_operator(p).imag >= -1e-12 * r


class TestCmCheck:
    def test_exponential_passes(self):
        assert vw.cm_check(lambda t: math.exp(-t)).passed

    def test_cosine_fails(self):
        result = vw.cm_check(lambda t: math.cos(t),
                             grid=np.linspace(0.5, 4.0, 12))
        assert not result.passed
        assert result.first_violation is not None

    def test_order_cap(self):
        with pytest.raises(ValueError):
            vw.cm_check(lambda t: math.exp(-t), orders=7)

    def test_stretched_exponential_passes(self):
        assert vw.cm_check(lambda t: math.exp(-math.sqrt(t))).passed

    def test_increasing_function_fails_first_order(self):
        result = vw.cm_check(lambda t: t)
        assert not result.passed
        assert result.first_violation[1] == 1

    def test_step_size_underflow(self):
        with pytest.raises(ValueError, match="underflow"):
            vw.cm_check(lambda t: math.exp(-t), grid=[1.0], rel_step=1e-17)


class TestLawJson:
    @pytest.mark.parametrize("law", [
        vw.PowerLaw(a=2.0, alpha=0.5),
        vw.LogPowerLaw(alpha=1.5),
        vw.ColeLaw(c=1.0, a=2.0, alpha=0.3),
        vw.TwoExponentLaw(c=0.5, tau=2.0, alpha=0.7, beta=0.2),
        vw.MeasureLaw(nu=vw.SpectralMeasure(atoms=((1.0, 1.0),))),
    ])
    def test_roundtrip(self, law):
        assert vw.law_from_json(law.to_json()) == law

    def test_unknown_type(self):
        with pytest.raises(ValueError):
            vw.law_from_json({"type": "nope"})
