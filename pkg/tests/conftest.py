import numpy as np
import pytest

import viscowave as vw


@pytest.fixture
def atom_measure():
    return vw.SpectralMeasure(atoms=((1.0, 2.0),))


@pytest.fixture
def power_half_density():
    return vw.SpectralMeasure(density=vw.PowerLawDensity(a=1.0, alpha=0.5))


@pytest.fixture
def power_half_model():
    return vw.MaterialModel(rho=1.0, c0=1.0, law=vw.PowerLaw(a=1.0, alpha=0.5))


@pytest.fixture
def elastic_model():
    return vw.MaterialModel(rho=1.0, c0=1.0, law=vw.MeasureLaw())


def log_grid(lo, hi, n):
    return np.logspace(np.log10(lo), np.log10(hi), n)
