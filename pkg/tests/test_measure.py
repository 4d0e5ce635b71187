"""Spectral measures: growth condition, Stieltjes transforms, invariants."""

import math

import numpy as np
import pytest

import viscowave as vw
from viscowave.errors import InconclusiveError


def brute_force_stieltjes(measure, p, n=400_000, lo=1e-12, hi=1e12):
    """Independent oracle: trapezoid rule on a dense logarithmic grid, with
    first-order analytic corrections for the truncated power-law ends."""
    total = sum(c / (p + r) for r, c in measure.atoms)
    dens = measure.density
    if dens is not None:
        u = np.linspace(math.log(lo), math.log(hi), n)
        xi = np.exp(u)
        total += np.trapezoid(dens(xi) * xi / (p + xi), u)
        if isinstance(dens, vw.PowerLawDensity):
            C, alpha = dens.prefactor, dens.alpha
            total += C * lo**alpha / (alpha * p)          # head: kernel ~ 1/p
            total += C * hi ** (alpha - 1.0) / (1.0 - alpha)  # tail: kernel ~ 1/xi
    return total


class TestGrowthCheck:
    def test_single_atom_exact(self):
        m = vw.SpectralMeasure(atoms=((1.0, 2.0),))
        value, convergent = m.growth_check()
        assert convergent
        assert value == pytest.approx(1.0, abs=0.0)

    def test_power_density_converges(self):
        m = vw.SpectralMeasure(density=vw.PowerLawDensity(a=1.0, alpha=0.5))
        value, convergent = m.growth_check()
        assert convergent
        # closed form: the growth integral of this density is exactly a
        assert value == pytest.approx(1.0, rel=1e-7)

    def test_constant_tail_diverges(self):
        grid = tuple((float(x), 1.0) for x in np.logspace(0, 6, 25))
        m = vw.SpectralMeasure(density=vw.TabulatedDensity(points=grid,
                                                           tail_exponent=0.0))
        value, convergent = m.growth_check()
        assert not convergent
        assert value == math.inf

    def test_undeclared_tail_is_inconclusive(self):
        grid = tuple((float(x), 1.0) for x in np.logspace(0, 3, 10))
        m = vw.SpectralMeasure(density=vw.TabulatedDensity(points=grid))
        with pytest.raises(InconclusiveError):
            m.growth_check()

    def test_declared_decaying_tail_converges(self):
        grid = tuple((float(x), 1.0 / float(x)) for x in np.logspace(0, 3, 30))
        m = vw.SpectralMeasure(density=vw.TabulatedDensity(points=grid,
                                                           tail_exponent=-1.0))
        value, convergent = m.growth_check()
        assert convergent and value > 0


class TestStieltjes:
    def test_single_atom(self):
        m = vw.SpectralMeasure(atoms=((1.0, 2.0),))
        assert m.stieltjes(1.0) == pytest.approx(1.0)

    def test_power_density_closed_form(self):
        # the transform of this density is p^(alpha-1)
        m = vw.SpectralMeasure(density=vw.PowerLawDensity(a=1.0, alpha=0.5))
        assert m.stieltjes(4.0).real == pytest.approx(0.5, rel=1e-8)

    def test_complex_p_against_brute_force(self):
        m = vw.SpectralMeasure(density=vw.PowerLawDensity(a=1.0, alpha=0.3))
        got = m.stieltjes(1j)
        assert got.real > 0 and got.imag < 0
        ref = brute_force_stieltjes(m, 1j)
        assert got == pytest.approx(ref, rel=1e-5)

    def test_mixed_measure_against_brute_force(self):
        m = vw.SpectralMeasure(atoms=((0.5, 1.5), (20.0, 0.25)),
                               density=vw.PowerLawDensity(a=0.7, alpha=0.6))
        for p in (0.3, 2.0, 1.0 + 3.0j):
            assert m.stieltjes(p) == pytest.approx(
                brute_force_stieltjes(m, p), rel=1e-5)

    def test_rejects_bad_p(self):
        m = vw.SpectralMeasure(atoms=((1.0, 1.0),))
        with pytest.raises(ValueError):
            m.stieltjes(0.0)
        with pytest.raises(ValueError):
            m.stieltjes(-2.0)

    def test_tabulated_density(self):
        grid = tuple((float(x), float(x) ** -0.5) for x in np.logspace(-3, 3, 200))
        m = vw.SpectralMeasure(density=vw.TabulatedDensity(points=grid,
                                                           tail_exponent=-0.5))
        got = m.stieltjes(1.0)
        ref = brute_force_stieltjes(m, 1.0)
        assert got.real == pytest.approx(ref.real, rel=1e-4)


class TestInvariants:
    @pytest.fixture
    def measures(self):
        return [
            vw.SpectralMeasure(atoms=((1.0, 2.0),)),
            vw.SpectralMeasure(atoms=((0.1, 0.3), (5.0, 1.0))),
            vw.SpectralMeasure(density=vw.PowerLawDensity(a=1.0, alpha=0.4)),
        ]

    def test_completely_monotone_in_p(self, measures):
        # sampled derivatives up to 4th order alternate in sign
        for m in measures:
            for p in (0.2, 1.0, 7.0):
                h = 0.05 * p
                pts = np.array([m.stieltjes(p + k * h).real for k in range(-2, 3)])
                d1 = (pts[3] - pts[1]) / (2 * h)
                d2 = (pts[3] - 2 * pts[2] + pts[1]) / h**2
                d3 = (pts[4] - 2 * pts[3] + 2 * pts[1] - pts[0]) / (2 * h**3)
                d4 = (pts[4] - 4 * pts[3] + 6 * pts[2] - 4 * pts[1] + pts[0]) / h**4
                assert pts[2] > 0
                assert d1 < 0 and d2 > 0 and d3 < 0 and d4 > 0

    def test_real_positive_decreasing(self, measures):
        ps = np.logspace(-2, 2, 17)
        for m in measures:
            vals = [m.stieltjes(p) for p in ps]
            assert all(abs(v.imag) < 1e-12 * abs(v) for v in vals)
            reals = [v.real for v in vals]
            assert all(v > 0 for v in reals)
            assert all(b < a for a, b in zip(reals, reals[1:]))

    def test_conjugate_symmetry(self, measures):
        for m in measures:
            for p in (1.0 + 2.0j, 0.2 + 0.1j, 3.0 - 0.5j):
                assert m.stieltjes(np.conj(p)) == pytest.approx(
                    np.conj(m.stieltjes(p)), rel=1e-9)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9])
    def test_power_density_reproduces_closed_form(self, a, alpha):
        m = vw.SpectralMeasure(density=vw.PowerLawDensity(a=a, alpha=alpha))
        for p in np.logspace(-3, 3, 7):
            got = p * m.stieltjes(p).real
            assert got == pytest.approx(a * p**alpha, rel=1e-6)


class TestValidationAndJson:
    def test_rejects_bad_atoms(self):
        with pytest.raises(ValueError):
            vw.SpectralMeasure(atoms=((0.0, 1.0),))
        with pytest.raises(ValueError):
            vw.SpectralMeasure(atoms=((1.0, -1.0),))

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError):
            vw.PowerLawDensity(a=-1.0, alpha=0.5)
        with pytest.raises(ValueError):
            vw.PowerLawDensity(a=1.0, alpha=1.5)
        with pytest.raises(ValueError):
            vw.TabulatedDensity(points=((1.0, 1.0), (0.5, 1.0)))
        with pytest.raises(ValueError):
            vw.TabulatedDensity(points=((1.0, -1.0), (2.0, 1.0)))

    def test_json_roundtrip(self):
        ms = [
            vw.SpectralMeasure(atoms=((1.0, 2.0), (3.0, 4.0))),
            vw.SpectralMeasure(density=vw.PowerLawDensity(a=1.5, alpha=0.25)),
            vw.SpectralMeasure(atoms=((2.0, 1.0),),
                               density=vw.TabulatedDensity(
                                   points=((1.0, 1.0), (2.0, 0.5)),
                                   tail_exponent=-2.0)),
        ]
        for m in ms:
            again = vw.SpectralMeasure.from_json(m.to_json())
            assert again == m

    def test_total_mass(self):
        assert vw.SpectralMeasure(atoms=((1.0, 2.0), (3.0, 1.0))).total_mass() == 3.0
        assert vw.SpectralMeasure(
            density=vw.PowerLawDensity(a=1.0, alpha=0.5)).total_mass() == math.inf
