"""Green's-function synthesis: Bromwich inversion and stable-density fast paths.

The inverse Laplace transform is computed on a vertical contour Re p = eps,
exploiting conjugate symmetry so the result is real by construction:

    f(t) = (e^(eps t) / pi) * integral_0^inf Re[e^(i w t) F(eps + i w)] dw

The frequency axis is split into panels (half oscillation periods, capped by
the decay scale of |F|); slowly decaying oscillatory tails are summed with
Wynn's epsilon acceleration on the panel partial sums, and panel quadrature
error is estimated by node halving.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, asdict
from typing import TYPE_CHECKING, Callable

import numpy as np
from scipy.integrate import quad

from ._numeric import gauss_legendre, wynn_epsilon
from .errors import AccuracyError, AccuracyWarning

if TYPE_CHECKING:  # pragma: no cover
    from .laws import MaterialModel

__all__ = [
    "ContourParams", "InversionResult", "bromwich_invert", "stable_density",
    "green_1d", "green_3d", "snapshot", "GreenSnapshot",
]


@dataclass(frozen=True)
class ContourParams:
    """Contour and truncation controls for the Bromwich inversion."""

    eps: float | None = None        # contour shift; default 1/t
    omega_max: float | None = None  # hard cap on the frequency range
    nodes: int = 24                 # Gauss nodes per panel
    max_blocks: int = 800
    tol: float = 1e-9

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class InversionResult:
    value: float
    error_estimate: float
    omega_used: float
    blocks: int


def _ensure_vectorized(F) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([1.0 + 1.0j, 2.0 + 0.5j])
    try:
        out = np.asarray(F(probe))
        if out.shape == probe.shape:
            return F
    except Exception:
        pass
    return np.vectorize(F, otypes=[complex])


def bromwich_invert(F, t: float, contour: ContourParams | None = None,
                    tol: float | None = None,
                    time_scale: float | None = None) -> InversionResult:
    """Invert the Laplace transform F at time t on a shifted vertical contour.

    F must be analytic for Re p >= eps with F(conj p) = conj F(p); it may be
    called with numpy arrays (scalar-only callables are wrapped).  For t <= 0
    (used when probing ahead of a wavefront) a positive ``time_scale`` must
    supply the contour shift; the result is then the two-sided inversion of
    transforms that decay along the contour.
    """
    cp = contour or ContourParams()
    tol = cp.tol if tol is None else tol
    T = max(abs(t), time_scale or 0.0)
    if T <= 0:
        raise ValueError("need t != 0 or a positive time_scale")
    eps = cp.eps if cp.eps is not None else 1.0 / T
    Fv = _ensure_vectorized(F)

    # Decay probe: smallest frequency beyond which |F| stays negligible.
    wprobe = np.exp(np.linspace(math.log(1e-3 / T), math.log(1e12 / T), 128))
    with np.errstate(all="ignore"):
        fabs = np.abs(Fv(eps + 1j * wprobe))
    fabs = np.where(np.isfinite(fabs), fabs, np.inf)
    fmax = float(np.max(np.where(np.isfinite(fabs), fabs, 0.0)))
    if fmax == 0.0:
        return InversionResult(0.0, 0.0, 0.0, 0)
    suffix_max = np.maximum.accumulate(fabs[::-1])[::-1]
    below = np.nonzero(suffix_max < 5e-3 * fmax)[0]
    w_decay = float(wprobe[below[0]]) if len(below) else math.inf

    h_osc = math.pi / abs(t) if t != 0 else math.inf
    h = min(h_osc, w_decay / 8.0 if math.isfinite(w_decay) else math.inf)
    if not math.isfinite(h):
        raise AccuracyError("transform neither oscillates nor decays; "
                            "cannot truncate the contour integral")

    w_cap = cp.omega_max if cp.omega_max is not None else math.inf
    n_full = cp.nodes
    n_half = max(6, n_full // 2)
    x_f, w_f = gauss_legendre(n_full)
    x_h, w_h = gauss_legendre(n_half)

    vals: list[float] = []
    qerr = 0.0
    est = None
    prev_est = None
    delta = 0.0
    chunk = 8
    scale_i = fmax * h

    def _panel_sums(k0: int, count: int) -> tuple[np.ndarray, np.ndarray]:
        lefts = h * (k0 + np.arange(count))[:, None]
        nodes_f = lefts + 0.5 * h * (x_f[None, :] + 1.0)
        nodes_h = lefts + 0.5 * h * (x_h[None, :] + 1.0)
        allnodes = np.concatenate([nodes_f.ravel(), nodes_h.ravel()])
        fz = Fv(eps + 1j * allnodes)
        g = np.real(np.exp(1j * allnodes * t) * fz)
        gf = g[: nodes_f.size].reshape(count, n_full)
        gh = g[nodes_f.size:].reshape(count, n_half)
        s_full = 0.5 * h * gf @ w_f
        s_half = 0.5 * h * gh @ w_h
        return s_full, s_half

    done = False
    while not done:
        k0 = len(vals)
        if k0 >= cp.max_blocks or (k0 + 1) * h > w_cap:
            best = est if est is not None else float(np.sum(vals))
            raise AccuracyError(
                "contour integral not converged within the truncation budget",
                estimate=math.exp(eps * t) / math.pi * best,
                error_estimate=abs(best - (prev_est or 0.0)))
        count = min(chunk, cp.max_blocks - k0,
                    max(1, int(w_cap / h) - k0) if math.isfinite(w_cap) else chunk)
        s_full, s_half = _panel_sums(k0, count)
        qerr += float(np.sum(np.abs(s_full - s_half)))
        vals.extend(s_full.tolist())

        tail = np.abs(vals[-4:])
        if len(vals) >= 8 and np.all(tail < 5e-3 * tol * max(scale_i, 1e-300)):
            est = float(np.sum(vals))
            delta = float(np.max(tail))
            break
        if len(vals) >= 16:
            est = wynn_epsilon(np.cumsum(vals))
            if prev_est is not None:
                delta = abs(est - prev_est)
                if delta < tol * max(abs(est), 1e-2 * scale_i):
                    done = True
            prev_est = est
    pref = math.exp(eps * t) / math.pi
    return InversionResult(value=pref * est,
                           error_estimate=pref * (qerr + delta),
                           omega_used=h * len(vals), blocks=len(vals))


# ---------------------------------------------------------------------------
# One-sided stable density
# ---------------------------------------------------------------------------

def _stable_shape(phi: np.ndarray, alpha: float) -> np.ndarray:
    """Zolotarev integrand shape U(phi) on (0, pi); increasing, U(0+) finite."""
    a = alpha / (1.0 - alpha)
    sphi = np.sin(phi)
    return (np.sin(alpha * phi) / sphi) ** a * np.sin((1.0 - alpha) * phi) / sphi


# exp(-s U) underflows near 745; beyond this exponent switch to the
# saddle-point form (its relative error there is ~1/exponent, far below
# the magnitude of the value itself).
_ASYMPTOTIC_EXPONENT = 500.0


def stable_density(alpha: float, z: float, rtol: float = 1e-10) -> float:
    """Density of the one-sided (totally skewed) stable law with Laplace
    transform exp(-y^alpha), 0 < alpha < 1; zero for z <= 0.

    Evaluated by a single real integral over (0, pi); for very small
    arguments the stretched-exponential saddle-point form takes over and an
    AccuracyWarning is issued.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("stable density requires 0 < alpha < 1")
    if z <= 0.0:
        return 0.0
    a = alpha / (1.0 - alpha)
    s = z ** (-a)
    u0 = alpha**a * (1.0 - alpha)
    if s * u0 > _ASYMPTOTIC_EXPONENT:
        warnings.warn("stable density evaluated deep in the left tail; "
                      "switching to the saddle-point form", AccuracyWarning,
                      stacklevel=2)
        if s * u0 > 744.0:
            return 0.0
        amp = math.sqrt(alpha ** (1.0 / (1.0 - alpha)) / (2.0 * math.pi * (1.0 - alpha)))
        power = -(2.0 - alpha) / (2.0 * (1.0 - alpha))
        return amp * z**power * math.exp(-u0 * s)

    def integrand(phi):
        u = _stable_shape(np.asarray(phi), alpha)
        with np.errstate(over="ignore"):
            return np.where(s * u > 745.0, 0.0, u * np.exp(-s * u))

    val, _ = quad(integrand, 0.0, math.pi, epsabs=1e-300, epsrel=rtol, limit=300)
    pref = alpha / (math.pi * (1.0 - alpha)) * z ** (-1.0 / (1.0 - alpha))
    return float(pref * val)


# ---------------------------------------------------------------------------
# Green's functions
# ---------------------------------------------------------------------------

def _is_zero_law(law) -> bool:
    from .laws import MeasureLaw
    return isinstance(law, MeasureLaw) and law.nu.is_empty


def _char_time(model: "MaterialModel", r: float, tau: float) -> float:
    """Time scale of the wave arrival used for the default contour shift."""
    from .laws import PowerLaw
    law = model.law
    if isinstance(law, PowerLaw) and law.a > 0 and law.alpha < 1:
        kappa = law.a * r
        return max(abs(tau), kappa ** (1.0 / law.alpha))
    return max(abs(tau), 0.1 * r / model.c0)


def green_1d(model: "MaterialModel", t: float, x: float,
             contour: ContourParams | None = None,
             with_error: bool = False):
    """Displacement response to a point impulse in one dimension.

    Inverts exp(-b(p)|x|) / B(p) at the retarded time t - |x|/c0 with
    prefactor 1/(2 rho c0^3); the elastic limit is the sharp step
    theta(t - |x|/c0) / (2 rho c0^2).  With with_error=True returns
    (value, error_estimate).
    """
    if model.law is None:
        raise ValueError("green_1d needs a law-based model")
    r = abs(x)
    if r == 0:
        raise ValueError("green_1d needs x != 0")
    tau = t - r / model.c0
    if _is_zero_law(model.law):
        step = 1.0 if tau > 0 else (0.5 if tau == 0 else 0.0)
        value = step / (2.0 * model.rho * model.c0**2)
        return (value, 0.0) if with_error else value

    def transform(p):
        B = p / model.c0 + model.law.evaluate(p)
        return np.exp(-model.law.evaluate(p) * r) / B

    res = bromwich_invert(transform, tau, contour=contour,
                          time_scale=_char_time(model, r, tau))
    pref = 1.0 / (2.0 * model.rho * model.c0**3)
    if with_error:
        return pref * res.value, pref * res.error_estimate
    return pref * res.value


def green_3d(model: "MaterialModel", t: float, r: float,
             contour: ContourParams | None = None,
             method: str = "auto", with_error: bool = False):
    """Radial impulse response in three dimensions at radius r > 0.

    General route: Bromwich inversion of exp(-b(p) r) at the retarded time,
    with prefactor 1/(4 pi rho c0^3 r).  For power-law attenuation the same
    quantity has the closed scaling form in the one-sided stable density,
    used as the fast path.  With with_error=True returns
    (value, error_estimate).
    """
    from .laws import PowerLaw
    if model.law is None:
        raise ValueError("green_3d needs a law-based model")
    if r <= 0:
        raise ValueError("green_3d needs r > 0")
    if _is_zero_law(model.law):
        raise ValueError("the elastic 3-d response is an attenuated impulse "
                         "at the front and has no pointwise values")
    tau = t - r / model.c0
    pref = 1.0 / (4.0 * math.pi * model.rho * model.c0**3 * r)
    law = model.law
    fast_ok = isinstance(law, PowerLaw) and law.a > 0 and 0 < law.alpha < 1

    if method == "auto":
        method = "fast" if fast_ok else "bromwich"
    if method == "fast":
        if not fast_ok:
            raise ValueError("fast path needs a sublinear power law")
        kappa = law.a * r
        scale = kappa ** (-1.0 / law.alpha)
        if tau <= 0:
            return (0.0, 0.0) if with_error else 0.0
        value = pref * scale * stable_density(law.alpha, tau * scale)
        return (value, 1e-9 * abs(value)) if with_error else value
    if method != "bromwich":
        raise ValueError(f"unknown method {method!r}")

    def transform(p):
        return np.exp(-law.evaluate(p) * r)

    res = bromwich_invert(transform, tau, contour=contour,
                          time_scale=_char_time(model, r, tau))
    if with_error:
        return pref * res.value, pref * res.error_estimate
    return pref * res.value


@dataclass(frozen=True)
class GreenSnapshot:
    """Spatial samples of the wave field at a fixed time."""

    t: float
    positions: tuple
    values: tuple
    dimension: int
    contour: dict
    front_position: float
    error_estimate: float = 0.0

    def __post_init__(self):
        pos = tuple(float(x) for x in self.positions)
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")
        vals = tuple(float(v) for v in self.values)
        if any(not math.isfinite(v) for v in vals):
            raise ValueError("snapshot values must be finite")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "values", vals)

    def metadata(self, model: "MaterialModel") -> dict:
        return {
            "model": model.to_json(),
            "t": self.t,
            "dimension": self.dimension,
            "front_position": self.front_position,
            "contour": self.contour,
            "error_estimate": self.error_estimate,
            "points": len(self.positions),
        }


def snapshot(model: "MaterialModel", t: float, positions,
             dimension: int = 3, contour: ContourParams | None = None,
             method: str = "auto") -> GreenSnapshot:
    """Batch-evaluate the Green's function on a position grid."""
    if dimension not in (1, 3):
        raise ValueError("dimension must be 1 or 3")
    values = []
    errors = []
    for x in positions:
        if dimension == 3:
            v, e = green_3d(model, t, float(x), contour=contour,
                            method=method, with_error=True)
        else:
            v, e = green_1d(model, t, float(x), contour=contour,
                            with_error=True)
        values.append(v)
        errors.append(e)
    cp = contour or ContourParams()
    return GreenSnapshot(t=float(t), positions=tuple(positions),
                         values=tuple(values), dimension=dimension,
                         contour=cp.to_json(),
                         front_position=float(model.c0 * t),
                         error_estimate=float(max(errors, default=0.0)))
