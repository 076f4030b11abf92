"""Equilibrium moments of the damped oscillator, by two independent routes.

The bath is Ohmic with a Drude cutoff; its Laplace-domain damping kernel is
ghat(z) = gamma * wD / (z + wD). Route one sums the Matsubara series with an
Euler-Maclaurin tail closure; route two integrates the fluctuation-dissipation
form of the same susceptibility along the real frequency axis. Agreement of
the two is itself a correctness check, and both are certified against the
explicit discrete-bath model in :mod:`clausius_lab.oracle`.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import NumericalFailure
from .gaussian import Constants, Moments, OscillatorParams

_TARGET_REL = 1e-8
# quad's reported error near a sharp resonance is conservative by one to two
# orders, so the spectral route gates on a looser (still sub-1e-6) threshold
_SPECTRAL_TARGET_REL = 1e-7


@dataclass(frozen=True)
class BathSpec:
    """Bath temperature, damping rate gamma, and Drude cutoff frequency."""

    temperature: float
    damping: float
    cutoff: float

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.damping < 0:
            raise ValueError(f"damping must be non-negative, got {self.damping}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")

    def warn_if_cutoff_low(self, o: OscillatorParams) -> None:
        if self.cutoff < 10 * o.frequency:
            warnings.warn(
                f"Drude cutoff {self.cutoff} is below 10x the oscillator frequency "
                f"{o.frequency}; continuum formulas assume a wide-band bath",
                stacklevel=3,
            )


class MomentRoute(enum.Enum):
    MATSUBARA = "matsubara"
    SPECTRAL_INTEGRAL = "spectral_integral"


@dataclass(frozen=True)
class MomentDerivatives:
    df1: float
    df2: float
    df1_error: float
    df2_error: float


def _drude_kernel(nu, damping, cutoff):
    """Laplace-domain kernel at real positive argument."""
    return damping * cutoff / (nu + cutoff)


def _tail(g, a: float) -> tuple[float, float]:
    """Euler-Maclaurin closure of sum_{n>=a} g(n) with an error estimate.

    The integral part is evaluated on the substitution t = 1/x, which maps the
    infinite range onto (0, 1/a] and keeps quad on a bounded interval. The
    error estimate is the disagreement with a midpoint-rule closure, an
    independent second-order approximation of the same tail.
    """
    integral, int_err = quad(lambda t: g(1.0 / t) / t**2, 0.0, 1.0 / a, epsrel=1e-12, limit=200)
    h = 1e-4 * a
    dg = (g(a + h) - g(a - h)) / (2 * h)
    em = integral + g(a) / 2 - dg / 12
    mid, _ = quad(lambda t: g(1.0 / t) / t**2, 0.0, 1.0 / (a - 0.5), epsrel=1e-12, limit=200)
    return em, abs(em - mid) + int_err


def moments_matsubara(
    o: OscillatorParams,
    b: BathSpec,
    c: Constants = Constants(),
    rel_tol: float = _TARGET_REL,
) -> Moments:
    """Moments from the Matsubara sum, truncated with an analytic tail.

    f1 = (1/M beta) sum_n [nu_n^2 + w^2 + |nu_n| ghat(|nu_n|)]^-1
    f2 = (M/beta) sum_n [w^2 + |nu_n| ghat(|nu_n|)] [same denominator]^-1
    """
    b.warn_if_cutoff_low(o)
    if b.damping == 0:
        from .gaussian import thermal_moments_decoupled

        return thermal_moments_decoupled(o, b.temperature, c)

    beta = 1.0 / (c.kB * b.temperature)
    nu1 = 2 * math.pi * c.kB * b.temperature / c.hbar
    w2 = o.frequency**2
    scale = max(o.frequency, b.cutoff, math.sqrt(b.damping * b.cutoff))
    n_terms = int(60 * scale / nu1) + 2000
    if n_terms > 50_000_000:
        raise NumericalFailure(
            "Matsubara sum would need too many terms; use the spectral route",
            n_terms=n_terms,
            temperature=b.temperature,
        )

    s1 = 0.0
    s2 = 0.0
    chunk = 2_000_000
    for lo in range(1, n_terms + 1, chunk):
        n = np.arange(lo, min(lo + chunk, n_terms + 1))
        nu = nu1 * n
        ghat = _drude_kernel(nu, b.damping, b.cutoff)
        den = nu**2 + w2 + nu * ghat
        s1 += float(np.sum(1.0 / den))
        s2 += float(np.sum((w2 + nu * ghat) / den))

    def g1(x):
        nu = nu1 * x
        return 1.0 / (nu**2 + w2 + nu * _drude_kernel(nu, b.damping, b.cutoff))

    def g2(x):
        nu = nu1 * x
        k = nu * _drude_kernel(nu, b.damping, b.cutoff)
        return (w2 + k) / (nu**2 + w2 + k)

    t1, e1 = _tail(g1, n_terms + 1)
    t2, e2 = _tail(g2, n_terms + 1)
    sum1 = 1.0 / w2 + 2 * (s1 + t1)
    sum2 = 1.0 + 2 * (s2 + t2)
    if 2 * e1 > rel_tol * sum1 or 2 * e2 > rel_tol * sum2:
        raise NumericalFailure(
            "Matsubara tail correction did not converge",
            tail_error_f1=2 * e1 / sum1,
            tail_error_f2=2 * e2 / sum2,
            n_terms=n_terms,
        )
    f1 = sum1 / (o.mass * beta)
    f2 = o.mass / beta * sum2
    return Moments(f1=f1, f2=f2, cross=0.0)


def _susceptibility_im(u, o: OscillatorParams, damping, cutoff):
    """Im chi(u) for the Drude kernel continued to the real frequency axis."""
    kernel = damping * cutoff / (cutoff - 1j * u)
    chi = 1.0 / (o.mass * (o.frequency**2 - u**2 - 1j * u * kernel))
    return chi.imag


def moments_spectral(
    o: OscillatorParams,
    b: BathSpec,
    c: Constants = Constants(),
    rel_tol: float = _SPECTRAL_TARGET_REL,
) -> Moments:
    """Moments from the fluctuation-dissipation integral.

    f1 = (hbar/pi) int_0^inf coth(hbar u / 2 kB T) Im chi(u) du, and f2 the
    same with an extra M^2 u^2 weight. The integration range is split at the
    resonance and at the cutoff. At gamma = 0 the Lorentzian in Im chi
    collapses to a delta function at the bare frequency; that limit is taken
    analytically rather than integrated over a vanishing width.
    """
    b.warn_if_cutoff_low(o)
    if b.damping == 0:
        from .gaussian import thermal_moments_decoupled

        return thermal_moments_decoupled(o, b.temperature, c)
    damping = b.damping
    x0 = c.hbar / (2 * c.kB * b.temperature)

    def coth(u):
        return 1.0 / math.tanh(x0 * u)

    def i1(u):
        return coth(u) * _susceptibility_im(u, o, damping, b.cutoff)

    def i2(u):
        return u * u * coth(u) * _susceptibility_im(u, o, damping, b.cutoff)

    w = o.frequency
    width = max(damping, 1e-9 * w)
    # geometric ladders away from the resonance keep each segment's scale
    # ratio modest even when the Lorentzian width is orders of magnitude
    # below the frequency or the cutoff
    points = {0.0, w, b.cutoff, 10 * b.cutoff}
    offset = width
    while offset < 10 * b.cutoff:
        points.add(w + offset)
        if w - offset > 0:
            points.add(w - offset)
        offset *= 10
    breaks = sorted(x for x in points if 0.0 <= x <= 10 * b.cutoff)

    f1 = f2 = err1 = err2 = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        val, err = quad(i1, lo, hi, epsrel=1e-11, limit=400)
        f1 += val
        err1 += err
        val, err = quad(i2, lo, hi, epsrel=1e-11, limit=400)
        f2 += val
        err2 += err
    # the tail converges slowly in u but quickly in t = 1/u
    t_hi = 1.0 / breaks[-1]
    val, err = quad(lambda t: i1(1.0 / t) / t**2, 0.0, t_hi, epsrel=1e-11, limit=400)
    f1 += val
    err1 += err
    val, err = quad(lambda t: i2(1.0 / t) / t**2, 0.0, t_hi, epsrel=1e-11, limit=400)
    f2 += val
    err2 += err

    f1 *= c.hbar / math.pi
    f2 *= c.hbar * o.mass**2 / math.pi
    err1 *= c.hbar / math.pi
    err2 *= c.hbar * o.mass**2 / math.pi
    if err1 > rel_tol * abs(f1) or err2 > rel_tol * abs(f2):
        raise NumericalFailure(
            "spectral quadrature did not reach its target accuracy",
            achieved_rel_f1=err1 / abs(f1),
            achieved_rel_f2=err2 / abs(f2),
        )
    return Moments(f1=f1, f2=f2, cross=0.0)


def equilibrium_moments(
    o: OscillatorParams,
    b: BathSpec,
    c: Constants = Constants(),
    route: MomentRoute | None = None,
) -> Moments:
    """Route dispatcher; Matsubara by default, spectral at very low temperature
    where the term count of the sum explodes."""
    if route is None:
        t_ratio = c.kB * b.temperature / (c.hbar * o.frequency)
        route = MomentRoute.SPECTRAL_INTEGRAL if t_ratio < 0.02 else MomentRoute.MATSUBARA
    if route is MomentRoute.MATSUBARA:
        return moments_matsubara(o, b, c)
    return moments_spectral(o, b, c)


def coupling_free_energy(
    o: OscillatorParams,
    b: BathSpec,
    c: Constants = Constants(),
    rel_tol: float = _TARGET_REL,
) -> float:
    """Free energy of coupling: F_MF(gamma) - F_MF(0) at fixed M, w, T.

    Matsubara product formula for the mean-force partition function,
    (1/beta) sum_{n>=1} ln[1 + nu_n ghat(nu_n) / (nu_n^2 + w^2)],
    closed with the same Euler-Maclaurin tail as the moment sums. This is the
    quasistatic work needed to switch the coupling on isothermally.
    """
    if b.damping == 0:
        return 0.0
    beta = 1.0 / (c.kB * b.temperature)
    nu1 = 2 * math.pi * c.kB * b.temperature / c.hbar
    w2 = o.frequency**2
    scale = max(o.frequency, b.cutoff, math.sqrt(b.damping * b.cutoff))
    n_terms = int(60 * scale / nu1) + 2000

    s = 0.0
    chunk = 2_000_000
    for lo in range(1, n_terms + 1, chunk):
        n = np.arange(lo, min(lo + chunk, n_terms + 1))
        nu = nu1 * n
        s += float(np.sum(np.log1p(nu * _drude_kernel(nu, b.damping, b.cutoff) / (nu**2 + w2))))

    def g(x):
        nu = nu1 * x
        return math.log1p(nu * _drude_kernel(nu, b.damping, b.cutoff) / (nu**2 + w2))

    t, e = _tail(g, n_terms + 1)
    total = s + t
    if e > rel_tol * abs(total):
        raise NumericalFailure(
            "free-energy tail correction did not converge",
            tail_error=e / abs(total),
            n_terms=n_terms,
        )
    return total / beta


def _derivative_with_error(f, x0: float, step: float, lower_bound: float | None):
    """Richardson-extrapolated finite difference with an error estimate.

    Central stencils when the domain allows, one-sided otherwise.
    """
    if lower_bound is None or x0 - step >= lower_bound:
        d_h = (f(x0 + step) - f(x0 - step)) / (2 * step)
        d_h2 = (f(x0 + step / 2) - f(x0 - step / 2)) / step
    else:
        d_h = (-3 * f(x0) + 4 * f(x0 + step) - f(x0 + 2 * step)) / (2 * step)
        d_h2 = (-3 * f(x0) + 4 * f(x0 + step / 2) - f(x0 + step)) / step
    value = (4 * d_h2 - d_h) / 3
    error = abs(d_h2 - d_h) / 3 + 1e-14 * abs(value)
    return value, error


def moment_derivatives(
    o: OscillatorParams,
    b: BathSpec,
    alpha: str,
    route: MomentRoute = MomentRoute.MATSUBARA,
    c: Constants = Constants(),
) -> MomentDerivatives:
    """d f1/d alpha and d f2/d alpha for alpha in {"mass", "damping"}.

    The mass derivative holds the microscopic oscillator-bath coupling fixed:
    the damping rate is mass-normalized, so gamma scales as 1/M along a mass
    change. Holding gamma itself fixed would make the mass dependence a pure
    prefactor and the sweep a null process even at strong coupling.
    """
    compute = moments_matsubara if route is MomentRoute.MATSUBARA else moments_spectral

    if alpha == "mass":
        coupling = o.mass * b.damping

        def f(m_val):
            osc = OscillatorParams(mass=m_val, frequency=o.frequency)
            bath = BathSpec(temperature=b.temperature, damping=coupling / m_val, cutoff=b.cutoff)
            return compute(osc, bath, c)

        x0 = o.mass
        lower = None
    elif alpha == "damping":

        def f(g_val):
            bath = BathSpec(temperature=b.temperature, damping=g_val, cutoff=b.cutoff)
            return compute(o, bath, c)

        x0 = b.damping
        lower = 0.0
    else:
        raise ValueError(f"unknown sweep parameter {alpha!r}")

    step = max(1e-5 * abs(x0), 1e-7)
    cache: dict[float, Moments] = {}

    def cached(x):
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    df1, e1 = _derivative_with_error(lambda x: cached(x).f1, x0, step, lower)
    df2, e2 = _derivative_with_error(lambda x: cached(x).f2, x0, step, lower)

    ref1 = max(abs(df1), 1e-3 * cached(x0).f1 / max(abs(x0), 1.0))
    ref2 = max(abs(df2), 1e-3 * cached(x0).f2 / max(abs(x0), 1.0))
    if e1 > 1e-5 * ref1 or e2 > 1e-5 * ref2:
        raise NumericalFailure(
            "moment derivative error estimate exceeds tolerance",
            alpha=alpha,
            df1_rel_error=e1 / ref1,
            df2_rel_error=e2 / ref2,
        )
    return MomentDerivatives(df1=df1, df2=df2, df1_error=e1, df2_error=e2)
