"""Finite- versus infinite-speed classification of attenuation laws.

A law propagates with a sharp front when the attenuation integral

    integral_0^inf A(omega) / (1 + omega^2) d omega

converges and exp(-A(omega) r) is square integrable for the radii of
interest.  Convergence is an asymptotic question, so truth is assigned from
a fitted tail model A(omega) ~ C omega^s ln(omega)^q rather than from raw
quadrature: no finite integral can distinguish ln(ln) growth from
boundedness.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .dispersion import attenuation
from .errors import InconclusiveError
from .laws import AttenuationLaw

__all__ = [
    "Classification", "TailFit", "PaleyWienerResult", "CausalityVerdict",
    "fit_attenuation_tail", "pw_integral", "square_integrability", "classify",
]

# Fitted exponents within this distance of the boundary s = 1 are treated
# as exactly on it and decided by the logarithmic power q.
_S_BAND = 0.05
# Relative margin around boundary decisions below which we refuse to decide.
_DELTA_MARGIN = 0.10


class Classification(str, enum.Enum):
    FINITE_SPEED = "finite"
    INFINITE_SPEED = "infinite"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TailFit:
    """Least-squares model A(omega) ~ C omega^s ln(omega)^q on a log window."""

    C: float
    s: float
    q: float
    residual: float
    window: tuple

    def to_json(self) -> dict:
        return {"C": self.C, "s": self.s, "q": self.q,
                "residual": self.residual, "window": list(self.window)}


def fit_attenuation_tail(law: AttenuationLaw, omega_max: float = 1e6,
                         decades: float = 2.0, n: int = 96) -> TailFit:
    """Fit ln A against (1, ln omega, ln ln omega) over the top decades."""
    w_lo = omega_max / 10.0**decades
    omegas = np.logspace(math.log10(w_lo), math.log10(omega_max), n)
    A = np.array([attenuation(law, w) for w in omegas])
    if np.all(A == 0.0):
        return TailFit(C=0.0, s=0.0, q=0.0, residual=0.0,
                       window=(w_lo, omega_max))
    if np.any(A <= 0.0):
        raise InconclusiveError("attenuation is not positive on the fit window")
    lw = np.log(omegas)
    design = np.column_stack([np.ones_like(lw), lw, np.log(lw)])
    coef, *_ = np.linalg.lstsq(design, np.log(A), rcond=None)
    resid = float(np.sqrt(np.mean((design @ coef - np.log(A)) ** 2)))
    return TailFit(C=float(math.exp(coef[0])), s=float(coef[1]),
                   q=float(coef[2]), residual=resid, window=(w_lo, omega_max))


def _tail_convergent(tail: TailFit) -> bool:
    """Convergence of integral A/omega^2 to infinity under the fitted model."""
    if tail.C == 0.0:
        return True
    if tail.s < 1.0 - _S_BAND:
        return True
    if tail.s > 1.0 + _S_BAND:
        return False
    # on the boundary: omega^-1 ln^q needs q < -1
    if abs(tail.q + 1.0) < _DELTA_MARGIN:
        raise InconclusiveError(
            f"tail sits at the logarithmic convergence boundary "
            f"(s={tail.s:.3f}, q={tail.q:.3f})")
    return tail.q < -1.0


def _tail_integral_estimate(tail: TailFit, omega_max: float) -> float:
    """integral_{omega_max}^inf C omega^(s-2) ln^q omega d omega (inf if divergent)."""
    if tail.C == 0.0:
        return 0.0
    if not _tail_convergent(tail):
        return math.inf
    v0 = math.log(omega_max)
    if abs(tail.s - 1.0) <= _S_BAND:
        # integral C v^q dv from v0
        return tail.C * v0 ** (tail.q + 1.0) / (-(tail.q + 1.0))
    # substitute omega = omega_max e^v
    decay = 1.0 - tail.s
    width = min(200.0 / decay, 5000.0)
    val, _ = quad(lambda v: tail.C * math.exp((tail.s - 1.0) * v)
                  * (v0 + v) ** tail.q, 0.0, width, limit=200)
    return float(val * omega_max ** (tail.s - 1.0))


@dataclass(frozen=True)
class PaleyWienerResult:
    value: float            # head quadrature plus tail estimate (inf if divergent)
    convergent: bool
    head: float
    tail_estimate: float
    tail: TailFit

    def to_json(self) -> dict:
        return {"value": self.value, "convergent": self.convergent,
                "head": self.head, "tail_estimate": self.tail_estimate,
                "tail": self.tail.to_json()}


def pw_integral(law: AttenuationLaw, omega_max: float = 1e6,
                fit_decades: float = 2.0, rtol: float = 1e-8) -> PaleyWienerResult:
    """Attenuation integral over (0, omega_max] plus an analytic tail estimate.

    The head uses the exact kernel 1/(1 + omega^2); the asymptotic argument
    applies only to the fitted tail.  Raises InconclusiveError when the tail
    fit cannot decide.
    """
    if omega_max < 1e3:
        raise ValueError("omega_max must be at least 1e3")
    tail = fit_attenuation_tail(law, omega_max, decades=fit_decades)
    if tail.C > 0.0 and tail.residual > 0.05:
        raise InconclusiveError(
            f"tail fit residual {tail.residual:.3g} too large to classify")
    convergent = _tail_convergent(tail)

    # head: log-substituted adaptive quadrature; the remainder below the
    # smallest frequency is bounded by A(w_lo) * w_lo -> 0
    w_lo = 1e-8
    head, _ = quad(lambda u: attenuation(law, math.exp(u)) * math.exp(u)
                   / (1.0 + math.exp(2.0 * u)),
                   math.log(w_lo), math.log(omega_max),
                   epsrel=rtol, epsabs=1e-300, limit=500)
    tail_val = _tail_integral_estimate(tail, omega_max)
    value = head + tail_val if convergent else math.inf
    return PaleyWienerResult(value=float(value), convergent=convergent,
                             head=float(head), tail_estimate=float(tail_val),
                             tail=tail)


def square_integrability(law: AttenuationLaw, r: float,
                         tail: TailFit | None = None,
                         omega_max: float = 1e6) -> bool | None:
    """Whether exp(-2 A(omega) r) is integrable over omega, from the tail fit.

    True needs A(omega) r to outgrow (1/2) ln omega; returns None
    (inconclusive) when the fitted tail sits within the declared margin of
    that boundary.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if tail is None:
        tail = fit_attenuation_tail(law, omega_max)
    if tail.C == 0.0:
        return False
    if tail.s > _S_BAND:
        return True           # polynomial growth beats any logarithm
    if tail.s < -_S_BAND:
        return False          # attenuation decays; integrand tends to 1
    # s ~ 0: A ~ C ln^q omega
    if abs(tail.q) <= 0.1:
        return False          # bounded attenuation: integrand tends to a constant
    if tail.q > 1.0 + _DELTA_MARGIN:
        return True
    if abs(tail.q - 1.0) <= _DELTA_MARGIN:
        crit = 2.0 * tail.C * r  # integrand omega^-crit: need crit > 1
        if abs(crit - 1.0) <= _DELTA_MARGIN:
            return None
        return crit > 1.0
    return None


def classify(law: AttenuationLaw, omega_max: float = 1e6,
             radii: tuple = (0.1, 1.0, 10.0)) -> "CausalityVerdict":
    """Classify a law as finite-speed, infinite-speed, or inconclusive.

    Finite speed requires the attenuation integral to converge and the
    square-integrability condition to hold at the sampled radii; a divergent
    integral gives infinite speed; anything else is inconclusive.
    """
    notes = []
    try:
        pw = pw_integral(law, omega_max)
    except InconclusiveError as exc:
        tail = fit_attenuation_tail(law, omega_max)
        return CausalityVerdict(Classification.INCONCLUSIVE, math.nan, tail,
                                tuple(), (str(exc),))
    sq = []
    for r in radii:
        try:
            sq.append((float(r), square_integrability(law, r, tail=pw.tail)))
        except InconclusiveError as exc:
            sq.append((float(r), None))
            notes.append(str(exc))
    if not pw.convergent:
        cls = Classification.INFINITE_SPEED
        notes.append("attenuation integral diverges")
    elif all(flag is True for _, flag in sq):
        cls = Classification.FINITE_SPEED
    else:
        cls = Classification.INCONCLUSIVE
        notes.append("square-integrability fails or is undecided at some radii; "
                     "the L2 front argument does not apply")
    return CausalityVerdict(cls, pw.value, pw.tail, tuple(sq), tuple(notes))


@dataclass(frozen=True)
class CausalityVerdict:
    classification: Classification
    pw_value: float
    tail: TailFit
    square_integrable_at: tuple  # ((r, True/False/None), ...)
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "class": self.classification.value,
            "pw_value": self.pw_value if math.isfinite(self.pw_value) else None,
            "tail": self.tail.to_json(),
            "square_integrable_at": [[r, flag] for r, flag in self.square_integrable_at],
            "notes": list(self.notes),
        }
