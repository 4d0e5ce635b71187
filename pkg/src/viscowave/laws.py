"""Attenuation laws, material models, and their admissibility diagnostics.

An attenuation law is the sublinear part b(p) of the wave operator
B(p) = p/c0 + b(p).  Laws are either backed by a spectral measure,
b(p) = p * S_nu(p) with S_nu the Stieltjes transform of nu, or given by a
closed-form family.  All evaluations use principal branches and satisfy
b(conj p) = conj b(p).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from ._numeric import central_derivative
from .measure import SpectralMeasure, DEFAULT_RTOL

__all__ = [
    "AttenuationLaw", "MeasureLaw", "PowerLaw", "LogPowerLaw", "ColeLaw",
    "TwoExponentLaw", "MaterialModel", "AdmissibilityReport",
    "admissibility_check", "CmCheckResult", "cm_check", "law_from_json",
]


def _as_complex(p):
    arr = np.asarray(p, dtype=complex)
    return arr, np.ndim(p) == 0


class AttenuationLaw(ABC):
    """Dispersion-attenuation function b(p)."""

    @abstractmethod
    def evaluate(self, p):
        """b(p) for scalar or array p off the closed negative real axis."""

    def __call__(self, p):
        return self.evaluate(p)

    @abstractmethod
    def to_json(self) -> dict:
        ...


@dataclass(frozen=True)
class MeasureLaw(AttenuationLaw):
    """b(p) = p * integral nu(dr)/(p + r) for a positive spectral measure nu."""

    nu: SpectralMeasure = field(default_factory=SpectralMeasure)
    rtol: float = DEFAULT_RTOL

    def evaluate(self, p):
        arr, scalar = _as_complex(p)
        if self.nu.is_empty:
            out = np.zeros_like(arr)
        elif self.nu.density is None:
            locs = np.array([r for r, _ in self.nu.atoms])
            wts = np.array([c for _, c in self.nu.atoms])
            out = arr * np.sum(wts / (arr[..., None] + locs), axis=-1)
        else:
            flat = arr.ravel()
            out = np.array([q * self.nu.stieltjes(q, self.rtol) for q in flat],
                           dtype=complex).reshape(arr.shape)
        return complex(out) if scalar else out

    def to_json(self) -> dict:
        return {"type": "measure", "nu": self.nu.to_json()}


@dataclass(frozen=True)
class PowerLaw(AttenuationLaw):
    """b(p) = a * p^alpha, 0 < alpha < 3.

    Negative amplitude is accepted only for alpha > 1; it produces the
    superlinear test laws with positive attenuation, which are never
    admissible but drive the pathology demonstrations.
    """

    a: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 3.0:
            raise ValueError("power law requires 0 < alpha < 3")
        if self.a == 0:
            raise ValueError("power law requires a != 0 (use an empty measure law)")
        if self.a < 0 and self.alpha <= 1.0:
            raise ValueError("negative amplitude is only meaningful for alpha > 1")

    def evaluate(self, p):
        arr, scalar = _as_complex(p)
        out = self.a * arr**self.alpha
        return complex(out) if scalar else out

    def to_json(self) -> dict:
        return {"type": "power", "a": self.a, "alpha": self.alpha}


@dataclass(frozen=True)
class LogPowerLaw(AttenuationLaw):
    """b(p) = p / ln(1 + p)^alpha.

    The family sits on the logarithmic boundary of sublinear growth.  It is
    a complete Bernstein function for alpha <= 1; larger exponents are still
    evaluable and are used by the causality decision table.
    """

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("log-power law requires alpha > 0")

    def evaluate(self, p):
        arr, scalar = _as_complex(p)
        out = arr / np.log1p(arr) ** self.alpha
        return complex(out) if scalar else out

    def to_json(self) -> dict:
        return {"type": "log_power", "alpha": self.alpha}


@dataclass(frozen=True)
class ColeLaw(AttenuationLaw):
    """b(p) = c * p^alpha / (a + p^alpha): bounded, Cole-Cole-type."""

    c: float
    a: float
    alpha: float

    def __post_init__(self):
        if self.c <= 0 or self.a <= 0 or not 0.0 < self.alpha < 1.0:
            raise ValueError("cole law requires c > 0, a > 0, 0 < alpha < 1")

    def evaluate(self, p):
        arr, scalar = _as_complex(p)
        pa = arr**self.alpha
        out = self.c * pa / (self.a + pa)
        return complex(out) if scalar else out

    def to_json(self) -> dict:
        return {"type": "cole", "c": self.c, "a": self.a, "alpha": self.alpha}


@dataclass(frozen=True)
class TwoExponentLaw(AttenuationLaw):
    """b(p) = c * (1 + tau p)^(alpha - beta) * (tau p)^beta.

    The local growth exponent rises from beta at low p to alpha at high p.
    """

    c: float
    tau: float
    alpha: float
    beta: float

    def __post_init__(self):
        if self.c <= 0 or self.tau <= 0:
            raise ValueError("two-exponent law requires c > 0 and tau > 0")
        if not 0.0 < self.beta <= self.alpha < 1.0:
            raise ValueError("two-exponent law requires 0 < beta <= alpha < 1")

    def evaluate(self, p):
        arr, scalar = _as_complex(p)
        tp = self.tau * arr
        out = self.c * (1.0 + tp) ** (self.alpha - self.beta) * tp**self.beta
        return complex(out) if scalar else out

    def to_json(self) -> dict:
        return {"type": "two_exponent", "c": self.c, "tau": self.tau,
                "alpha": self.alpha, "beta": self.beta}


_LAW_TYPES = {
    "measure": lambda o: MeasureLaw(nu=SpectralMeasure.from_json(o["nu"])),
    "power": lambda o: PowerLaw(a=o["a"], alpha=o["alpha"]),
    "log_power": lambda o: LogPowerLaw(alpha=o["alpha"]),
    "cole": lambda o: ColeLaw(c=o["c"], a=o["a"], alpha=o["alpha"]),
    "two_exponent": lambda o: TwoExponentLaw(c=o["c"], tau=o["tau"],
                                             alpha=o["alpha"], beta=o["beta"]),
}


def law_from_json(obj: dict) -> AttenuationLaw:
    kind = obj.get("type")
    if kind not in _LAW_TYPES:
        raise ValueError(f"unknown law type {kind!r}")
    return _LAW_TYPES[kind](obj)


# ---------------------------------------------------------------------------
# Material models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaterialModel:
    """Mass density, front speed and attenuation law; optionally the
    relaxation-side measure mu with its mass mu0 at zero (the equilibrium
    modulus).

    The wave operator is B(p) = p/c0 + b(p); the modulus transform is
    Q(p) = rho p^2 / B(p)^2, or mu0 + p * S_mu(p) when built from mu.
    When both sides are supplied they are cross-checked on a small grid.
    """

    rho: float
    c0: float | None = None
    law: AttenuationLaw | None = None
    mu: SpectralMeasure | None = None
    mu0: float = 0.0

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")
        if self.mu0 < 0:
            raise ValueError("mu0 must be >= 0")
        if self.law is None and self.mu is None:
            raise ValueError("need an attenuation law or a relaxation measure")
        if self.law is not None and self.c0 is None:
            raise ValueError("a law-based model needs a front speed c0")
        if self.c0 is not None and self.c0 <= 0:
            raise ValueError("c0 must be positive")
        if self.c0 is None:
            # front speed from the instantaneous modulus Q(inf)
            mass = self.mu.total_mass() + self.mu0
            if not math.isfinite(mass) or mass <= 0:
                raise ValueError("relaxation measure must have positive finite mass")
            object.__setattr__(self, "c0", math.sqrt(mass / self.rho))
        if self.law is not None and self.mu is not None:
            self._check_consistency()

    def _check_consistency(self, rtol: float = 1e-6):
        for p in (0.1, 0.7, 3.0, 20.0, 400.0):
            qa = self.modulus_transform(p, route="law")
            qb = self.modulus_transform(p, route="measure")
            if abs(qa - qb) > rtol * max(abs(qa), abs(qb)):
                raise ValueError(
                    f"law and relaxation measure disagree at p={p}: "
                    f"{qa!r} vs {qb!r}")

    def wave_operator(self, p):
        """B(p) = p/c0 + b(p), or p * sqrt(rho / Q(p)) for measure-only models."""
        if self.law is not None:
            arr, scalar = _as_complex(p)
            out = arr / self.c0 + self.law.evaluate(arr)
            return complex(out) if scalar else out
        arr, scalar = _as_complex(p)
        flat = arr.ravel()
        q = np.array([self.modulus_transform(x, route="measure") for x in flat],
                     dtype=complex).reshape(arr.shape)
        out = arr * np.sqrt(self.rho / q)
        return complex(out) if scalar else out

    def modulus_transform(self, p, route: str = "auto"):
        """Q(p): law route rho p^2/B(p)^2, measure route mu0 + p S_mu(p)."""
        if route == "auto":
            route = "law" if self.law is not None else "measure"
        if route == "law":
            if self.law is None:
                raise ValueError("model has no attenuation law")
            arr, scalar = _as_complex(p)
            B = arr / self.c0 + self.law.evaluate(arr)
            out = self.rho * arr**2 / B**2
            return complex(out) if scalar else out
        if route == "measure":
            if self.mu is None:
                raise ValueError("model has no relaxation measure")
            arr, scalar = _as_complex(p)
            flat = arr.ravel()
            vals = np.array([self.mu0 + x * self.mu.stieltjes(x) for x in flat],
                            dtype=complex).reshape(arr.shape)
            return complex(vals) if scalar else vals
        raise ValueError(f"unknown route {route!r}")

    def relaxation_modulus(self, t: float, rtol: float = 1e-10) -> float:
        """G(t): exponential sum/quadrature over mu, or numerical inversion
        of Q(p)/p when only the law side is available."""
        if t <= 0:
            raise ValueError("relaxation modulus needs t > 0")
        if self.mu is not None:
            total = self.mu0
            total += sum(c * math.exp(-t * r) for r, c in self.mu.atoms)
            dens = self.mu.density
            if dens is not None:
                hi = math.log(745.0 / t)
                lo = hi - 60.0
                val, _ = quad(lambda u: float(dens(math.exp(u))) * math.exp(u)
                              * math.exp(-t * math.exp(u)), lo, hi, limit=300)
                total += val
            return float(total)
        from .green import bromwich_invert  # deferred: green builds on laws

        def g_tilde(p):
            B = p / self.c0 + self.law.evaluate(p)
            return self.rho * p / B**2

        return bromwich_invert(g_tilde, t, tol=rtol).value

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "c0": self.c0,
            "law": self.law.to_json() if self.law is not None else None,
            "mu": self.mu.to_json() if self.mu is not None else None,
            "mu0": self.mu0,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MaterialModel":
        law = obj.get("law")
        mu = obj.get("mu")
        return cls(
            rho=obj["rho"],
            c0=obj.get("c0"),
            law=law_from_json(law) if law is not None else None,
            mu=SpectralMeasure.from_json(mu) if mu is not None else None,
            mu0=obj.get("mu0", 0.0) or 0.0,
        )


# ---------------------------------------------------------------------------
# Admissibility: sampling certificate for the four defining properties
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibilityReport:
    upper_half_plane_ok: bool     # Im b >= 0 on the sampled upper half plane
    positive_nondecreasing_ok: bool  # b >= 0 and nondecreasing on (0, inf)
    sublinear_ok: bool            # b(p)/p -> 0 along sampled p -> inf
    vanishes_at_origin_ok: bool   # b(0+) -> 0
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return (self.upper_half_plane_ok and self.positive_nondecreasing_ok
                and self.sublinear_ok and self.vanishes_at_origin_ok)

    def to_json(self) -> dict:
        return {
            "upper_half_plane": self.upper_half_plane_ok,
            "positive_nondecreasing": self.positive_nondecreasing_ok,
            "sublinear": self.sublinear_ok,
            "vanishes_at_origin": self.vanishes_at_origin_ok,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def admissibility_check(law: AttenuationLaw, p_min: float = 1e-6,
                        p_max: float = 1e6, per_decade: int = 5,
                        tol: float = 1e-10) -> AdmissibilityReport:
    """Sampled certificate that b maps the upper half plane into itself, is
    nonnegative and nondecreasing on (0, inf), grows sublinearly, and
    vanishes at the origin.

    Violations beyond tol * |b| count as failures; trend checks (sublinearity
    and the origin limit) use log-log slopes over the outermost decades.
    """
    n = int(per_decade * math.log10(p_max / p_min)) + 1
    radii = np.logspace(math.log10(p_min), math.log10(p_max), n)
    notes = []

    b_real = np.asarray(law.evaluate(radii + 0.0j)).real
    scale = float(np.max(np.abs(b_real)))
    if scale == 0.0:
        return AdmissibilityReport(True, True, True, True,
                                   notes=("identically zero law",))

    # (i) upper half plane fan
    args = np.array([1, 2, 3, 4, 5, 6, 7]) * (math.pi / 8.0)
    fan = radii[:, None] * np.exp(1j * args[None, :])
    bf = np.asarray(law.evaluate(fan))
    uhp_ok = bool(np.all(bf.imag >= -tol * (np.abs(bf) + 1e-300)))

    # (ii) nonnegative and nondecreasing on the positive axis
    pos_ok = bool(np.all(b_real >= -tol * scale))
    mono_ok = bool(np.all(np.diff(b_real) >= -tol * (np.abs(b_real[1:]) + 1e-300)))

    # (iii) sublinearity: slope of ln(b/p) over the top two decades < 0
    top = radii >= p_max / 100.0
    ratio = b_real[top] / radii[top]
    sub_ok = False
    if np.all(ratio > 0):
        slope = np.polyfit(np.log(radii[top]), np.log(ratio), 1)[0]
        sub_ok = bool(slope <= -1e-3)
        if not sub_ok:
            notes.append(f"b(p)/p log-slope {slope:+.3g} at large p")
    else:
        notes.append("b not positive near p_max")

    # (iv) decay towards the origin: slope of ln b over the bottom two decades
    bottom = radii <= p_min * 100.0
    origin_ok = False
    if np.all(b_real[bottom] > 0):
        slope0 = np.polyfit(np.log(radii[bottom]), np.log(b_real[bottom]), 1)[0]
        origin_ok = bool(slope0 >= 1e-2)
        if not origin_ok:
            notes.append(f"b log-slope {slope0:+.3g} near the origin")
    else:
        notes.append("b not positive near p_min")

    return AdmissibilityReport(uhp_ok, pos_ok and mono_ok, sub_ok, origin_ok,
                               notes=tuple(notes))


# ---------------------------------------------------------------------------
# Complete monotonicity by sampled finite differences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CmCheckResult:
    passed: bool
    first_violation: tuple | None  # (t, order, value)
    orders: int

    def to_json(self) -> dict:
        out = {"passed": self.passed, "orders": self.orders}
        if self.first_violation is not None:
            t, n, v = self.first_violation
            out["first_violation"] = {"t": t, "order": n, "value": v}
        return out


def cm_check(f, orders: int = 4, grid=None, rel_step: float = 0.08,
             noise: float = 1e-9) -> CmCheckResult:
    """Check (-1)^n d^n f / dt^n >= 0 for n = 0..orders at the grid points.

    Derivatives come from central differences with Richardson extrapolation;
    step sizes are relative to t.  `noise` is the per-evaluation absolute
    uncertainty of f and sets the sign tolerance, which grows like
    noise / h^n.  Orders above 6 are rejected: beyond that the differences
    are meaningless in double precision.
    """
    if orders > 6:
        raise ValueError("orders above 6 are not resolvable in double precision")
    if grid is None:
        grid = np.logspace(-1, 1, 21)
    cache: dict[float, float] = {}

    def fc(t: float) -> float:
        key = float(t)
        if key not in cache:
            cache[key] = float(f(key))
        return cache[key]

    for t in grid:
        h = rel_step * t
        if t + h / 2.0 == t:
            raise ValueError(f"step size underflow at t={t}: h={h} is not "
                             "representable next to t")
        for n in range(0, orders + 1):
            d = central_derivative(fc, t, n, h)
            tol = 64.0 * noise / (h / 2.0) ** n + 1e-9 * abs(d)
            if (-1.0) ** n * d < -tol:
                return CmCheckResult(False, (float(t), n, float(d)), orders)
    return CmCheckResult(True, None, orders)
