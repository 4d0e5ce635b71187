"""Discrete spectrum fitting and conversion between the attenuation and
relaxation sides.

Fitting is a nonnegative least-squares problem on a fixed candidate grid
(the model is linear in the weights), conversion between atomic spectra is
exact rational-function algebra, and density recovery extracts boundary
values of the transform just below the negative real axis, extrapolated in
the offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import nnls

from ._numeric import extrapolate_to_zero
from .laws import AttenuationLaw, admissibility_check
from .measure import TabulatedDensity

__all__ = [
    "AttenuationSamples", "RationalSpectrum", "PoleInfo",
    "ConversionDiagnostic", "ConversionResult", "RecoveredSpectrum",
    "fit_atoms", "attenuation_to_relaxation", "relaxation_to_attenuation",
    "perron_density", "recover_density",
]

# Roots closer than this (relative) are treated as one pole of higher order.
_ROOT_CLUSTER_RTOL = 1e-8
DEFAULT_ETAS = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class AttenuationSamples:
    """Measured attenuation versus angular frequency, optionally weighted."""

    omegas: tuple
    values: tuple
    weights: tuple | None = None

    def __post_init__(self):
        om = tuple(float(w) for w in self.omegas)
        vals = tuple(float(v) for v in self.values)
        if len(om) != len(vals) or not om:
            raise ValueError("need matching, nonempty frequency and value lists")
        if any(w <= 0 for w in om) or any(b <= a for a, b in zip(om, om[1:])):
            raise ValueError("frequencies must be positive and strictly increasing")
        if any(v < 0 for v in vals):
            raise ValueError("attenuation samples must be >= 0")
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "values", vals)
        if self.weights is not None:
            wt = tuple(float(w) for w in self.weights)
            if len(wt) != len(om) or any(w <= 0 for w in wt):
                raise ValueError("weights must be positive and match the samples")
            object.__setattr__(self, "weights", wt)


@dataclass(frozen=True)
class RationalSpectrum:
    """Discrete spectrum: atoms plus (relaxation side) a mass at zero."""

    side: str  # "attenuation" | "relaxation"
    atoms: tuple  # ((location, weight), ...)
    mass_at_zero: float = 0.0
    residual: float | None = None

    def __post_init__(self):
        if self.side not in ("attenuation", "relaxation"):
            raise ValueError("side must be 'attenuation' or 'relaxation'")
        atoms = tuple((float(r), float(c)) for r, c in self.atoms)
        if any(r <= 0 or c <= 0 for r, c in atoms):
            raise ValueError("atoms need positive locations and weights")
        if self.mass_at_zero < 0:
            raise ValueError("mass at zero must be >= 0")
        if self.side == "attenuation" and self.mass_at_zero != 0.0:
            raise ValueError("the attenuation side carries no mass at zero")
        object.__setattr__(self, "atoms", atoms)

    def to_json(self) -> dict:
        out = {"side": self.side,
               "atoms": [{"r": r, "c": c} for r, c in self.atoms],
               "mass_at_zero": self.mass_at_zero}
        if self.residual is not None:
            out["residual"] = self.residual
        return out


def fit_atoms(samples: AttenuationSamples, candidates) -> RationalSpectrum:
    """Nonnegative least squares for atom weights on a fixed location grid.

    Minimizes || sum_n c_n w_k^2/(r_n^2 + w_k^2) - A_k || over c_n >= 0,
    optionally weighted; returns only the strictly positive atoms together
    with the residual norm.
    """
    locs = np.asarray(candidates, dtype=float)
    if locs.ndim != 1 or len(locs) == 0 or np.any(locs <= 0):
        raise ValueError("candidate locations must be a positive 1-d grid")
    om = np.array(samples.omegas)
    y = np.array(samples.values)
    design = om[:, None] ** 2 / (locs[None, :] ** 2 + om[:, None] ** 2)
    if samples.weights is not None:
        sw = np.sqrt(np.array(samples.weights))
        design = design * sw[:, None]
        y = y * sw

    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0.0):
        bad = locs[norms == 0.0]
        raise ValueError(f"candidate columns are identically zero at r={bad}")
    unit = design / norms
    gram = unit.T @ unit
    iu = np.triu_indices(len(locs), k=1)
    worst = np.argmax(gram[iu]) if len(iu[0]) else None
    if worst is not None and gram[iu][worst] > 1.0 - 1e-12:
        i, j = iu[0][worst], iu[1][worst]
        raise ValueError(
            f"design matrix is degenerate: candidate locations "
            f"r={locs[i]:g} and r={locs[j]:g} give collinear columns")

    coef, rnorm = nnls(design, y)
    # drop active-set dust: weights this far below the leading one are
    # indistinguishable from zero at the solver's working precision
    tiny = 1e-12 * float(coef.max(initial=0.0))
    atoms = tuple((float(r), float(c)) for r, c in zip(locs, coef) if c > tiny)
    return RationalSpectrum(side="attenuation", atoms=atoms,
                            residual=float(rnorm))


# ---------------------------------------------------------------------------
# Atomic attenuation spectrum -> relaxation spectrum (exact rational algebra)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoleInfo:
    """One pole of the modulus transform with its Laurent coefficients.

    coefficients[k] multiplies (p - location)^-(k+1); index 0 is the
    simple-pole coefficient.
    """

    location: complex
    order: int
    coefficients: tuple

    def to_json(self) -> dict:
        return {"location": [self.location.real, self.location.imag],
                "order": self.order,
                "coefficients": [[c.real, c.imag] for c in self.coefficients]}


@dataclass(frozen=True)
class ConversionDiagnostic:
    """Structural obstruction report when no positive atomic measure exists."""

    constant_term: float
    value_at_zero: float
    poles: tuple
    reason: str

    def to_json(self) -> dict:
        return {"constant_term": self.constant_term,
                "value_at_zero": self.value_at_zero,
                "poles": [p.to_json() for p in self.poles],
                "reason": self.reason}


@dataclass(frozen=True)
class ConversionResult:
    spectrum: RationalSpectrum | None
    diagnostic: ConversionDiagnostic | None

    @property
    def succeeded(self) -> bool:
        return self.spectrum is not None

    def to_json(self) -> dict:
        return {"succeeded": self.succeeded,
                "spectrum": self.spectrum.to_json() if self.spectrum else None,
                "diagnostic": self.diagnostic.to_json() if self.diagnostic else None}


def _cluster_roots(roots: np.ndarray) -> list[tuple[complex, int]]:
    """Group numerically coincident roots into (location, multiplicity)."""
    out: list[tuple[complex, int]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for i, (loc, m) in enumerate(out):
            if abs(r - loc) <= _ROOT_CLUSTER_RTOL * max(1.0, abs(loc)):
                out[i] = ((loc * m + r) / (m + 1), m + 1)
                break
        else:
            out.append((complex(r), 1))
    return out


def attenuation_to_relaxation(nu_atoms, rho: float, c0: float) -> ConversionResult:
    """Convert an atomic attenuation spectrum to a relaxation spectrum.

    Forms B(p) = p [1/c0 + sum c_n/(p + r_n)] and expands
    Q(p) = rho p^2 / B(p)^2 in partial fractions by exact rational algebra.
    A positive atomic relaxation measure exists only when every pole of Q is
    simple, real, and negative with the right coefficient signs; otherwise
    the structural obstruction is reported in full.
    """
    if rho <= 0 or c0 <= 0:
        raise ValueError("rho and c0 must be positive")
    atoms = tuple((float(r), float(c)) for r, c in nu_atoms)
    if any(r <= 0 or c <= 0 for r, c in atoms):
        raise ValueError("attenuation atoms need positive locations and weights")
    if not atoms:
        return ConversionResult(
            spectrum=RationalSpectrum(side="relaxation", atoms=(),
                                      mass_at_zero=rho * c0**2),
            diagnostic=None)

    locs = [r for r, _ in atoms]
    # B(p)/p = N(p)/D(p) with D = prod (p + r_n), both of degree len(atoms)
    D = Polynomial.fromroots([-r for r in locs])
    N = D / c0
    for k, (r, c) in enumerate(atoms):
        others = [-rr for j, rr in enumerate(locs) if j != k]
        cofactor = Polynomial.fromroots(others) if others else Polynomial([1.0])
        N = N + c * cofactor

    q_const = rho * c0**2          # Q at infinity
    q_zero = rho * (D(0.0) / N(0.0)) ** 2   # Q at zero = equilibrium modulus
    clusters = _cluster_roots(np.asarray(N.roots(), dtype=complex))

    poles = []
    relax_atoms = []
    obstructions = []
    for idx, (loc, mult) in enumerate(clusters):
        order = 2 * mult
        if mult == 1:
            # Q (p - loc)^2 = rho D(p)^2 / Ntil(p)^2 with Ntil = N/(p - loc)
            lead = N.coef[-1]
            other_roots = []
            for jdx, (loc2, m2) in enumerate(clusters):
                if jdx != idx:
                    other_roots.extend([loc2] * m2)
            Ntil = lead * (Polynomial.fromroots(other_roots) if other_roots
                           else Polynomial([1.0]))
            Dv, Dd = complex(D(loc)), complex(D.deriv()(loc))
            Nv, Nd = complex(Ntil(loc)), complex(Ntil.deriv()(loc))
            c2 = rho * Dv**2 / Nv**2
            c1 = 2.0 * rho * Dv * (Dd * Nv - Dv * Nd) / Nv**3
            coeffs = (c1, c2)
        else:
            coeffs = ()  # higher-order cluster: structure already disqualifies
        poles.append(PoleInfo(location=loc, order=order, coefficients=coeffs))

        real = abs(loc.imag) <= 1e-9 * max(1.0, abs(loc))
        negative = real and loc.real < 0
        top = coeffs[-1] if coeffs else None
        # a pole counts as simple only when its quadratic coefficient is
        # rounding noise next to the simple part; the obstruction must stay
        # structural, not a matter of atom size
        effectively_simple = (top is not None and
                              abs(top) <= 1e-13 * max(q_const, abs(coeffs[0]) * abs(loc)))
        if not real:
            obstructions.append(f"pole at {loc:.6g} is not real")
        elif not negative:
            obstructions.append(f"pole at {loc.real:.6g} is not negative")
        elif not effectively_simple:
            msg = f"pole at {loc.real:.6g} has order {order}"
            if coeffs:
                msg += f" with simple-pole coefficient {coeffs[0].real:.6g}"
            obstructions.append(msg)
        else:
            # a genuinely simple pole: Q residue R gives the atom weight -R/s
            s = -loc.real
            d = -coeffs[0].real / s
            if d <= 0:
                obstructions.append(
                    f"pole at {loc.real:.6g} carries nonpositive weight {d:.6g}")
            else:
                relax_atoms.append((s, d))

    if not obstructions and q_zero >= -1e-12 * q_const:
        return ConversionResult(
            spectrum=RationalSpectrum(side="relaxation",
                                      atoms=tuple(relax_atoms),
                                      mass_at_zero=max(q_zero, 0.0)),
            diagnostic=None)
    reason = ("modulus transform is not a positive atomic spectrum: "
              + "; ".join(obstructions))
    return ConversionResult(
        spectrum=None,
        diagnostic=ConversionDiagnostic(constant_term=float(q_const),
                                        value_at_zero=float(q_zero),
                                        poles=tuple(poles), reason=reason))


# ---------------------------------------------------------------------------
# Relaxation spectrum -> attenuation density (boundary-value extraction)
# ---------------------------------------------------------------------------

def perron_density(transform, r: float, eta: float) -> float:
    """Boundary-value density (1/pi) Im S(-r (1 + i eta)) of a Stieltjes
    transform S, with the offset measured relative to r."""
    p = -r * (1.0 + 1j * eta)
    return float(np.imag(transform(p)) / math.pi)


def _law_stieltjes(law: AttenuationLaw):
    return lambda p: law.evaluate(p) / p


def recover_density(law: AttenuationLaw, r_grid,
                    etas=DEFAULT_ETAS, extrapolate: bool = True,
                    check_admissible: bool = True) -> TabulatedDensity:
    """Recover the spectral density of an admissible law on a grid.

    Evaluates (1/pi) Im[b(p)/p] just below the negative axis at the offsets
    eta (relative to r) and extrapolates to eta = 0; atoms appear as
    Lorentzian peaks whose integrated window weight converges to the atom
    weight as eta shrinks.
    """
    if check_admissible:
        report = admissibility_check(law)
        if not report.passed:
            raise ValueError(f"law is not admissible: {report.to_json()['notes']}")
    rs = np.asarray(r_grid, dtype=float)
    if np.any(rs <= 0) or np.any(np.diff(rs) <= 0):
        raise ValueError("r grid must be positive and strictly increasing")
    S = _law_stieltjes(law)
    vals = np.empty_like(rs)
    for i, r in enumerate(rs):
        samples = [perron_density(S, r, eta) for eta in etas]
        v = extrapolate_to_zero(etas, samples) if extrapolate else samples[-1]
        vals[i] = max(v, 0.0)
    return TabulatedDensity(points=tuple(zip(rs, vals)), tail_exponent=-2.0)


@dataclass(frozen=True)
class RecoveredSpectrum:
    """Attenuation side reconstructed from a relaxation spectrum."""

    front_speed: float
    density: TabulatedDensity
    etas: tuple

    def to_json(self) -> dict:
        return {"front_speed": self.front_speed,
                "density": self.density.to_json(),
                "etas": list(self.etas)}


def relaxation_to_attenuation(mu_atoms, mu0: float, rho: float,
                              r_grid=None, etas=DEFAULT_ETAS,
                              n_grid: int = 1200) -> RecoveredSpectrum:
    """Convert an atomic relaxation spectrum to a tabulated attenuation
    density plus the front speed.

    Q(p) = mu0 + sum d_m p/(p + s_m) determines c0 = sqrt(Q(inf)/rho) and
    b(p) = p sqrt(rho/Q(p)) - p/c0; the density comes from boundary values
    of b(p)/p below the negative axis, extrapolated in the offset.
    """
    atoms = tuple((float(s), float(d)) for s, d in mu_atoms)
    if any(s <= 0 or d <= 0 for s, d in atoms):
        raise ValueError("relaxation atoms need positive locations and weights")
    if mu0 < 0:
        raise ValueError("mu0 must be >= 0")
    q_inf = mu0 + sum(d for _, d in atoms)
    if q_inf <= 0:
        raise ValueError("total relaxation mass must be positive")
    c0 = math.sqrt(q_inf / rho)

    def Q(p):
        return mu0 + sum(d * p / (p + s) for s, d in atoms)

    def S(p):  # b(p)/p
        return np.sqrt(rho / Q(p)) - 1.0 / c0

    if r_grid is None:
        if not atoms:
            r_grid = np.logspace(-2, 2, 32)
        else:
            # support is bounded by the outermost pole/zero of Q; the grid
            # reaches far below the innermost breakpoint because the density
            # may carry an integrable inverse-square-root head near r = 0
            locs = [s for s, _ in atoms]
            num = mu0 * Polynomial.fromroots([-s for s in locs])
            for k, (s, d) in enumerate(atoms):
                others = [-ss for j, (ss, _) in enumerate(atoms) if j != k]
                term = Polynomial([0.0, d]) * (Polynomial.fromroots(others)
                                               if others else Polynomial([1.0]))
                num = num + term
            breakpoints = sorted({abs(z.real) for z in np.atleast_1d(num.roots())
                                  if abs(z.imag) < 1e-9 and z.real < 0} | set(locs))
            r_hi = 1.02 * max(breakpoints)
            r_lo = min(breakpoints) * 1e-12
            base = np.logspace(math.log10(r_lo), math.log10(r_hi), n_grid)
            extra = []
            for b in breakpoints:
                extra.extend(b * (1.0 - 10.0 ** -np.arange(1.0, 7.0)))
                extra.extend(b * (1.0 + 10.0 ** -np.arange(1.0, 7.0)))
            r_grid = np.unique(np.concatenate([
                base, np.array([b for b in extra if 0 < b <= r_hi])]))

    density = recover_density_from_transform(S, r_grid, etas)
    return RecoveredSpectrum(front_speed=c0, density=density, etas=tuple(etas))


def recover_density_from_transform(transform, r_grid, etas=DEFAULT_ETAS) -> TabulatedDensity:
    """Boundary-value density of an arbitrary Stieltjes-transform callable."""
    rs = np.asarray(r_grid, dtype=float)
    vals = np.empty_like(rs)
    for i, r in enumerate(rs):
        samples = [perron_density(transform, r, eta) for eta in etas]
        vals[i] = max(extrapolate_to_zero(etas, samples), 0.0)
    return TabulatedDensity(points=tuple(zip(rs, vals)), tail_exponent=-2.0)
