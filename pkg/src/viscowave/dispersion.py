"""Frequency-domain observables: attenuation, dispersion, phase speed, and
growth-exponent diagnostics.

With p = -i omega on the principal branch, the attenuation is
Re b(-i omega) and the dispersion -Im b(-i omega).  For measure-backed laws
both also have parametric quadrature forms against the spectral measure,
used as an independent evaluation route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import PathologyWarning
from .laws import AttenuationLaw, MaterialModel, MeasureLaw, PowerLaw
from .measure import PowerLawDensity, TabulatedDensity

__all__ = [
    "FrequencyGrid", "attenuation", "dispersion", "phase_speed", "slowness",
    "critical_frequency", "CriticalFrequencyResult", "variable_exponent",
    "local_exponent",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing positive angular frequencies with spacing metadata."""

    omegas: tuple
    spacing: str = "log"

    def __post_init__(self):
        om = tuple(float(w) for w in self.omegas)
        if not om or any(w <= 0 for w in om):
            raise ValueError("frequencies must be positive")
        if any(b <= a for a, b in zip(om, om[1:])):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "omegas", om)

    @classmethod
    def log_spaced(cls, omega_min: float, omega_max: float, n: int) -> "FrequencyGrid":
        if not 0 < omega_min < omega_max:
            raise ValueError("need 0 < omega_min < omega_max")
        return cls(tuple(np.logspace(math.log10(omega_min), math.log10(omega_max), n)),
                   spacing="log")

    @classmethod
    def linear(cls, omega_min: float, omega_max: float, n: int) -> "FrequencyGrid":
        if not 0 < omega_min < omega_max:
            raise ValueError("need 0 < omega_min < omega_max")
        return cls(tuple(np.linspace(omega_min, omega_max, n)), spacing="linear")

    def __len__(self):
        return len(self.omegas)

    def as_array(self) -> np.ndarray:
        return np.array(self.omegas)


def _measure_kernel_integral(law: MeasureLaw, omega: float, kernel, rtol: float) -> float:
    """integral kernel(xi) nu(dxi) for the parametric route."""
    from .measure import _segment_gauss
    nu = law.nu
    total = sum(c * kernel(r) for r, c in nu.atoms)
    dens = nu.density
    if dens is None:
        return float(total)
    if isinstance(dens, PowerLawDensity):
        # in u = ln xi the integrand decays at least like exp(alpha u)
        # towards -inf and exp(-(1-alpha) u) towards +inf for both kernels
        knee = math.log(omega)
        alpha = dens.alpha
        lo = knee + math.log(rtol) / alpha
        hi = knee - math.log(rtol) / (1.0 - alpha)
        pieces = sorted({lo, min(max(knee, lo), hi), hi})
        for a_, b_ in zip(pieces, pieces[1:]):
            if b_ <= a_:
                continue
            val, _ = quad(lambda u: float(dens(math.exp(u))) * math.exp(u)
                          * kernel(math.exp(u)), a_, b_, epsrel=rtol,
                          epsabs=1e-300, limit=400)
            total += val
        return float(total)
    total += _segment_gauss(dens, kernel).real
    if dens.tail_exponent is not None and dens.values[-1] > 0:
        s, v_last, xi_last = dens.tail_exponent, dens.values[-1], dens.grid[-1]
        val, _ = quad(lambda u: v_last * math.exp(s * u) * (xi_last * math.exp(u))
                      * kernel(xi_last * math.exp(u)), 0.0, 50.0,
                      epsrel=rtol, epsabs=1e-300, limit=200)
        total += val
    return float(total)


def attenuation(law: AttenuationLaw, omega: float, method: str = "direct",
                rtol: float = 1e-10) -> float:
    """Attenuation Re b(-i omega) >= 0 for admissible laws.

    method="parametric" evaluates the measure-side quadrature form
    omega^2 * integral nu(dxi)/(xi^2 + omega^2) instead (measure-backed
    laws only); the two routes agree for well-formed laws.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if method == "direct":
        return float(np.real(law.evaluate(-1j * omega)))
    if method == "parametric":
        if not isinstance(law, MeasureLaw):
            raise ValueError("parametric route needs a measure-backed law")
        return _measure_kernel_integral(
            law, omega, lambda xi: omega**2 / (xi**2 + omega**2), rtol)
    raise ValueError(f"unknown method {method!r}")


def dispersion(law: AttenuationLaw, omega: float, method: str = "direct",
               rtol: float = 1e-10) -> float:
    """Dispersion -Im b(-i omega); parametric form
    omega * integral xi nu(dxi)/(xi^2 + omega^2) for measure-backed laws."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if method == "direct":
        return float(-np.imag(law.evaluate(-1j * omega)))
    if method == "parametric":
        if not isinstance(law, MeasureLaw):
            raise ValueError("parametric route needs a measure-backed law")
        return _measure_kernel_integral(
            law, omega, lambda xi: omega * xi / (xi**2 + omega**2), rtol)
    raise ValueError(f"unknown method {method!r}")


def slowness(model: MaterialModel, omega: float) -> float:
    """Phase slowness Re[i B(-i omega)] / omega (reciprocal phase speed)."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    B = model.wave_operator(-1j * omega)
    return float(np.real(1j * B) / omega)


def phase_speed(model: MaterialModel, omega: float) -> float:
    """Frequency-dependent phase speed omega / Re[i B(-i omega)].

    A nonpositive slowness has no physical meaning; the signed reciprocal is
    returned and a PathologyWarning is issued.
    """
    s = slowness(model, omega)
    if s <= 0:
        warnings.warn(f"nonpositive slowness {s:.6g} at omega={omega:.6g}; "
                      "phase speed is unphysical here", PathologyWarning,
                      stacklevel=2)
        if s == 0:
            return math.inf
    return 1.0 / s


@dataclass(frozen=True)
class CriticalFrequencyResult:
    """Root of the slowness for superlinear power laws.

    ``omega`` is the bisection root; the two closed-form candidates (the
    bracketed base to the powers -1/(alpha-1) and +1/(alpha-1)) are reported
    for diagnosis, the first of which matches the root.
    """

    omega: float
    closed_form: float
    closed_form_alternate: float

    def to_json(self) -> dict:
        return {"omega": self.omega, "closed_form": self.closed_form,
                "closed_form_alternate": self.closed_form_alternate}


def critical_frequency(model: MaterialModel,
                       bracket: tuple = (1e-12, 1e12)) -> CriticalFrequencyResult:
    """Frequency at which the slowness of a superlinear power-law model
    (a < 0, 1 < alpha < 2) crosses zero, found by bisection."""
    law = model.law
    if not (isinstance(law, PowerLaw) and law.a < 0 and 1.0 < law.alpha < 2.0):
        raise ValueError("critical frequency needs a power law with "
                         "a < 0 and 1 < alpha < 2")
    lo, hi = bracket
    f = lambda w: slowness(model, w)
    if f(lo) <= 0 or f(hi) >= 0:
        raise ValueError(f"slowness does not change sign on {bracket}")
    root = brentq(f, lo, hi, xtol=1e-30, rtol=1e-15, maxiter=300)
    base = model.c0 * abs(law.a) * math.sin(law.alpha * math.pi / 2.0)
    return CriticalFrequencyResult(
        omega=float(root),
        closed_form=base ** (-1.0 / (law.alpha - 1.0)),
        closed_form_alternate=base ** (1.0 / (law.alpha - 1.0)),
    )


def variable_exponent(law: AttenuationLaw, p: float) -> float:
    """Growth exponent ln b(p) / ln p, the power to which b raises p.

    Defined for real p > 0 away from the singular point p = 1; requires
    b(p) > 0.
    """
    if p <= 0:
        raise ValueError("variable exponent needs p > 0")
    if p == 1.0:
        raise ValueError("variable exponent is singular at p = 1")
    b = float(np.real(law.evaluate(p + 0.0j)))
    if b <= 0:
        raise ValueError("variable exponent needs b(p) > 0")
    return math.log(b) / math.log(p)


def local_exponent(law: AttenuationLaw, p: float, rel_step: float = 1e-5) -> float:
    """Local growth exponent d ln b / d ln p by central differences.

    This is the slope of b in log-log coordinates: the exponent a frequency
    window around p would measure.  Unlike the global ln b / ln p ratio it
    is finite and smooth through p = 1.
    """
    if p <= 0:
        raise ValueError("local exponent needs p > 0")
    h = rel_step
    b_hi = float(np.real(law.evaluate(p * math.exp(h) + 0.0j)))
    b_lo = float(np.real(law.evaluate(p * math.exp(-h) + 0.0j)))
    if b_hi <= 0 or b_lo <= 0:
        raise ValueError("local exponent needs b > 0 near p")
    return (math.log(b_hi) - math.log(b_lo)) / (2.0 * h)
