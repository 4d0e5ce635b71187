"""Positive measures on (0, inf) and Stieltjes-type transforms against them.

A measure is a finite list of atoms plus an optional named density.  The
central operation is the Stieltjes transform

    S(p) = sum_n c_n / (p + r_n) + integral density(xi) / (p + xi) dxi

evaluated by adaptive quadrature after the substitution xi = exp(u), which
compresses (0, inf) and makes power-law heads and tails exponentially
decaying in u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyError, InconclusiveError

DEFAULT_RTOL = 1e-9

# A tail contribution is negligible when it is below this fraction of the body.
_NEGLIGIBLE = 1e-12


@dataclass(frozen=True)
class PowerLawDensity:
    """Density (a sin(pi alpha) / pi) * xi^(alpha - 1) on (0, inf).

    The prefactor is chosen so that the induced attenuation law is exactly
    a * p^alpha; see AttenuationLaw.
    """

    a: float
    alpha: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("power-law density requires a > 0")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("power-law density requires 0 < alpha < 1")

    @property
    def prefactor(self) -> float:
        return self.a * math.sin(math.pi * self.alpha) / math.pi

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return self.prefactor * xi ** (self.alpha - 1.0)

    def to_json(self) -> dict:
        return {"type": "power", "a": self.a, "alpha": self.alpha}


@dataclass(frozen=True)
class TabulatedDensity:
    """Sampled density with value interpolated linearly in ln(xi).

    The density is zero below the first grid point.  Behaviour beyond the
    last point must be declared through ``tail_exponent`` s, meaning
    value ~ v_last * (xi / xi_last)^s; convergence questions are undecidable
    from the finite samples alone.
    """

    points: tuple = field()  # ((xi, value), ...) with xi ascending, value >= 0
    tail_exponent: float | None = None

    def __post_init__(self):
        pts = tuple((float(x), float(v)) for x, v in self.points)
        if len(pts) < 2:
            raise ValueError("tabulated density needs at least two points")
        xs = [x for x, _ in pts]
        if any(x <= 0 for x in xs) or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("grid must be positive and strictly increasing")
        if any(v < 0 for _, v in pts):
            raise ValueError("density values must be >= 0")
        object.__setattr__(self, "points", pts)

    @property
    def grid(self) -> np.ndarray:
        return np.array([x for x, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points])

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        xs, vs = self.grid, self.values
        out = np.interp(np.log(np.maximum(xi, 1e-300)), np.log(xs), vs,
                        left=0.0, right=0.0)
        if self.tail_exponent is not None:
            tail = xi > xs[-1]
            if np.any(tail):
                out = np.where(tail, vs[-1] * (xi / xs[-1]) ** self.tail_exponent, out)
        return out

    def to_json(self) -> dict:
        return {
            "type": "table",
            "points": [[x, v] for x, v in self.points],
            "tail_exponent": self.tail_exponent,
        }


def density_from_json(obj: dict | None):
    if obj is None:
        return None
    kind = obj.get("type")
    if kind == "power":
        return PowerLawDensity(a=obj["a"], alpha=obj["alpha"])
    if kind == "table":
        return TabulatedDensity(points=tuple((x, v) for x, v in obj["points"]),
                                tail_exponent=obj.get("tail_exponent"))
    raise ValueError(f"unknown density type {kind!r}")


@dataclass(frozen=True)
class SpectralMeasure:
    """Positive measure on (0, inf): atoms plus an optional density."""

    atoms: tuple = ()  # ((location r > 0, weight c > 0), ...)
    density: PowerLawDensity | TabulatedDensity | None = None

    def __post_init__(self):
        atoms = tuple((float(r), float(c)) for r, c in self.atoms)
        for r, c in atoms:
            if r <= 0 or c <= 0:
                raise ValueError("atoms need positive locations and weights")
        object.__setattr__(self, "atoms", atoms)

    # -- basic queries ---------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.atoms and self.density is None

    def total_mass(self) -> float:
        """Total mass; inf when the density does not integrate."""
        mass = sum(c for _, c in self.atoms)
        if isinstance(self.density, PowerLawDensity):
            return math.inf  # xi^(alpha-1) is not integrable at infinity
        if isinstance(self.density, TabulatedDensity):
            s = self.density.tail_exponent
            xs, vs = self.density.grid, self.density.values
            body = np.trapezoid(vs * xs, np.log(xs))
            mass += float(body)
            if vs[-1] > 0:
                if s is None or s >= -1.0:
                    return math.inf
                mass += float(vs[-1] * xs[-1] / (-s - 1.0))
        return mass

    # -- transforms ------------------------------------------------------

    def stieltjes(self, p: complex, rtol: float = DEFAULT_RTOL) -> complex:
        """Evaluate sum c/(p+r) + integral density(xi)/(p+xi) dxi.

        Requires Re p >= 0 and p != 0 (p off the closed negative axis is
        accepted as well); raises AccuracyError if the quadrature cannot
        reach the requested relative tolerance.
        """
        p = complex(p)
        _check_p(p)
        total = complex(sum(c / (p + r) for r, c in self.atoms))
        if self.density is not None:
            total += _density_stieltjes(self.density, p, rtol)
        return total

    def growth_check(self, rtol: float = DEFAULT_RTOL) -> tuple[float, bool]:
        """Value and convergence of integral measure(dr)/(1+r).

        Returns (value, True) when finite, (inf, False) when the declared
        tail makes it diverge, and raises InconclusiveError for a tabulated
        density with significant mass at the last grid point but no declared
        tail behaviour.
        """
        value = sum(c / (1.0 + r) for r, c in self.atoms)
        dens = self.density
        if dens is None:
            return float(value), True
        if isinstance(dens, PowerLawDensity):
            # integrand ~ xi^(alpha-2) at infinity: always convergent
            value += _density_stieltjes(dens, 1.0 + 0.0j, rtol).real
            return float(value), True
        # tabulated
        body = _tabulated_body_integral(dens, lambda xi: 1.0 / (1.0 + xi))
        s = dens.tail_exponent
        v_last = dens.values[-1]
        xi_last = dens.grid[-1]
        if v_last > 0 and s is None:
            if v_last * xi_last / (1.0 + xi_last) > _NEGLIGIBLE * (body + value + 1e-300):
                raise InconclusiveError(
                    "tabulated density has significant mass at the last grid "
                    "point but no declared tail exponent")
            return float(value + body), True
        if v_last > 0 and s >= 0:
            return math.inf, False
        if v_last > 0:
            # tail integrand ~ xi^(s-1), s < 0: finite remainder
            tail, _ = quad(lambda u: v_last * math.exp(s * u) * xi_last
                           * math.exp(u) / (1.0 + xi_last * math.exp(u)),
                           0.0, max(10.0, -40.0 / s))
            body += tail
        return float(value + body), True

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "atoms": [{"r": r, "c": c} for r, c in self.atoms],
            "density": self.density.to_json() if self.density is not None else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpectralMeasure":
        atoms = tuple((a["r"], a["c"]) for a in obj.get("atoms") or ())
        return cls(atoms=atoms, density=density_from_json(obj.get("density")))


def _check_p(p: complex) -> None:
    if p == 0:
        raise ValueError("transform not defined at p = 0")
    if p.imag == 0 and p.real < 0:
        raise ValueError("p on the closed negative real axis")


def _distance_to_support(p: complex) -> float:
    """Lower bound for |p + xi| over xi > 0."""
    if p.real >= 0:
        return abs(p)
    return abs(p.imag)


def _density_stieltjes(dens, p: complex, rtol: float) -> complex:
    if isinstance(dens, PowerLawDensity):
        return _power_density_stieltjes(dens, p, rtol)
    return _tabulated_density_stieltjes(dens, p, rtol)


def _power_density_stieltjes(dens: PowerLawDensity, p: complex, rtol: float) -> complex:
    """integral C xi^(alpha-1) / (p + xi) dxi with xi = exp(u).

    The integrand decays like exp(alpha*u) towards -inf and
    exp((alpha-1)*u) towards +inf, so the truncation points follow from the
    requested tolerance and the closed-form magnitude scale |p|^(alpha-1).
    """
    alpha, C = dens.alpha, dens.prefactor
    scale = dens.a * abs(p) ** (alpha - 1.0)
    floor = rtol * scale / 8.0
    m = _distance_to_support(p)
    u_lo = (math.log(floor * m * alpha) - math.log(C)) / alpha
    u_hi = (math.log(floor * (1.0 - alpha)) - math.log(C)) / (alpha - 1.0)
    knee = math.log(abs(p))

    def integrand(u):
        xi = np.exp(u)
        return C * np.exp(alpha * u) / (p + xi)

    pieces = sorted({u_lo, min(max(knee, u_lo), u_hi), u_hi})
    total = 0.0 + 0.0j
    err = 0.0
    for a_, b_ in zip(pieces, pieces[1:]):
        if b_ <= a_:
            continue
        val, e = quad(integrand, a_, b_, complex_func=True,
                      epsabs=floor, epsrel=rtol, limit=400)
        total += val
        err += abs(e)
    if err > 100.0 * rtol * max(abs(total), scale):
        raise AccuracyError("density quadrature did not converge",
                            estimate=total, error_estimate=err)
    return total


def _segment_gauss(dens: TabulatedDensity, kernel, min_nodes: int = 8) -> complex:
    """Integrate density(xi) * kernel(xi) dxi over the tabulated support.

    The interpolant is linear in u = ln xi on each segment, so fixed-order
    Gauss panels per segment are exact up to the kernel's smooth variation;
    everything vectorizes over all segments at once.
    """
    from ._numeric import gauss_legendre
    us = np.log(dens.grid)
    widths = np.diff(us)
    n = min_nodes if np.max(widths) < 0.25 else 16
    x, w = gauss_legendre(n)
    mid = 0.5 * (us[:-1] + us[1:])
    half = 0.5 * widths
    nodes = mid[:, None] + half[:, None] * x[None, :]
    xi = np.exp(nodes)
    vals = dens(xi) * xi * kernel(xi)
    return complex(np.sum(half[:, None] * w[None, :] * vals))


def _tabulated_density_stieltjes(dens: TabulatedDensity, p: complex, rtol: float) -> complex:
    xs = dens.grid
    v_last = dens.values[-1]
    s = dens.tail_exponent
    total = _segment_gauss(dens, lambda xi: 1.0 / (p + xi))
    if v_last > 0:
        if s is None:
            raise InconclusiveError(
                "tabulated density needs a declared tail exponent for "
                "transforms over (0, inf)")
        if s >= 0:
            raise ValueError("declared tail exponent >= 0: transform diverges")
        # tail integrand ~ v_last exp(s u'), u' measured from the last point
        width = max(10.0, math.log(max(abs(total), v_last) / (rtol * v_last + 1e-300) + 1.0) / -s)
        val, _ = quad(lambda w: v_last * np.exp(s * w) * (xs[-1] * np.exp(w))
                      / (p + xs[-1] * np.exp(w)),
                      0.0, width, complex_func=True, epsrel=rtol, limit=200)
        total += val
    return total


def _tabulated_body_integral(dens: TabulatedDensity, kernel) -> float:
    """integral density(xi) * kernel(xi) dxi over the tabulated support."""
    return _segment_gauss(dens, kernel).real
