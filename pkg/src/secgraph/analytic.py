"""Closed-form and quadrature-based predictions for the secrecy graph.

Everything here is a deterministic function of the configuration: degree
PMFs and moments, isolation probabilities, threshold/noise degradation of
the mean degree, the neutralization lower bound, secrecy-rate CDFs to the
i-th neighbor, and the colluding-adversary results built on the one-sided
stable law.  The Monte Carlo harness estimates the same quantities; tests
compare the two routes.

Semi-infinite integrals are evaluated after mapping to a finite interval
(rational map z = a + t/(1-t)); tolerances are absolute 1e-9, relative
1e-7.  Mean-degree functions return math.inf when lambda_e = 0 rather
than raising: the ratio lambda_l/lambda_e is the natural scale of every
degree result and has no finite value there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from . import stable
from .secrecy import NetworkConfig

__all__ = [
    "VoronoiMoments",
    "DegreePmf",
    "TABLE_VORONOI_MOMENTS",
    "stirling2",
    "pmf_out_degree",
    "pmf_out_degree_sectored",
    "moments_in_degree",
    "p_out_isolation",
    "p_in_isolation",
    "p_in_isolation_series",
    "mean_out_degree_thresholded",
    "mean_out_degree_neutralization_lb",
    "cdf_msr_neighbor",
    "p_exist_neighbor",
    "p_outage_neighbor",
    "c_alpha",
    "cdf_msr_colluding",
    "cdf_msr_noncolluding_link",
    "p_exist_colluding",
    "mean_degree_colluding",
    "tv_distance",
]

_ABS_TOL = 1e-9
_REL_TOL = 1e-7


@dataclass(frozen=True)
class VoronoiMoments:
    """Moments E{A^k}, k = 1..K, of the typical unit-density Voronoi cell area.

    source records where the numbers came from: "table" for the published
    reference values, "simulated" for harness re-estimates.  The first
    moment is exactly 1 for the table (the typical cell has unit mean area);
    simulated values carry sampling noise and are not forced to 1.
    """

    moments: tuple
    source: str = "table"

    def __post_init__(self) -> None:
        if len(self.moments) == 0:
            raise ValueError("at least one moment required")
        if any(not (math.isfinite(m) and m > 0) for m in self.moments):
            raise ValueError("moments must be finite and > 0")
        if self.source not in ("table", "simulated"):
            raise ValueError(f"source must be 'table' or 'simulated', got {self.source!r}")
        if self.source == "table" and self.moments[0] != 1.0:
            raise ValueError("table moments must have E{A} = 1 exactly")

    def __len__(self) -> int:
        return len(self.moments)


TABLE_VORONOI_MOMENTS = VoronoiMoments((1.0, 1.280, 1.993, 3.650), source="table")


@dataclass(frozen=True)
class DegreePmf:
    """PMF over degrees 0..len-1; nonnegative, sums to 1 within 1e-12."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.ascontiguousarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite and >= 0")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def support(self) -> np.ndarray:
        return np.arange(len(self.probs))

    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    def moment(self, order: int) -> float:
        return float(np.dot(self.support.astype(np.float64) ** order, self.probs))


def tv_distance(pmf: DegreePmf, analytic_pmf) -> float:
    """Total variation distance between an empirical PMF and an analytic one.

    analytic_pmf is a callable n -> probability with support on all n >= 0;
    the mass it places beyond the empirical support enters as one lump
    (the empirical PMF is zero there).
    """
    n = len(pmf.probs)
    a = np.array([analytic_pmf(k) for k in range(n)])
    tail = max(1.0 - float(a.sum()), 0.0)
    return 0.5 * (float(np.abs(pmf.probs - a).sum()) + tail)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind, S(n, k), by the standard recurrence."""
    if not (isinstance(n, int) and isinstance(k, int)):
        raise ValueError("n and k must be integers")
    if not (1 <= k <= n <= 64):
        raise ValueError(f"need 1 <= k <= n <= 64, got n={n}, k={k}")
    if k == 1 or k == n:
        return 1
    return stirling2(n - 1, k - 1) + k * stirling2(n - 1, k)


def _check_densities(lambda_l: float, lambda_e: float) -> None:
    if not (math.isfinite(lambda_l) and lambda_l > 0):
        raise ValueError(f"lambda_l must be > 0, got {lambda_l}")
    if not (math.isfinite(lambda_e) and lambda_e >= 0):
        raise ValueError(f"lambda_e must be >= 0, got {lambda_e}")


def pmf_out_degree(n: int, lambda_l: float, lambda_e: float) -> float:
    """Geometric out-degree law p^n (1-p), p = lambda_l/(lambda_l+lambda_e)."""
    _check_densities(lambda_l, lambda_e)
    if lambda_e <= 0:
        raise ValueError("out-degree PMF needs lambda_e > 0")
    if n < 0 or n != int(n):
        raise ValueError(f"degree must be a nonnegative integer, got {n}")
    p = lambda_l / (lambda_l + lambda_e)
    return p**n * (1.0 - p)


def pmf_out_degree_sectored(n: int, L: int, lambda_l: float, lambda_e: float) -> float:
    """Negative binomial out-degree law under L sectors: C(L+n-1, L-1) p^n (1-p)^L.

    Evaluated in log space; overflows for large L+n otherwise.
    """
    _check_densities(lambda_l, lambda_e)
    if lambda_e <= 0:
        raise ValueError("sectored PMF needs lambda_e > 0")
    if not (isinstance(L, int) and L >= 1):
        raise ValueError(f"sector count must be an integer >= 1, got {L}")
    if n < 0 or n != int(n):
        raise ValueError(f"degree must be a nonnegative integer, got {n}")
    p = lambda_l / (lambda_l + lambda_e)
    logc = gammaln(L + n) - gammaln(L) - gammaln(n + 1)
    return float(math.exp(logc + n * math.log(p) + L * math.log1p(-p)))


def moments_in_degree(order: int, ratio: float, vm: VoronoiMoments) -> float:
    """E{N_in^order} from the cell-area moments: sum_k ratio^k S(order,k) E{A^k}."""
    if not (isinstance(order, int) and order >= 1):
        raise ValueError(f"order must be an integer >= 1, got {order}")
    if order > len(vm):
        raise ValueError(f"order {order} needs {order} area moments, only {len(vm)} supplied")
    if not (math.isfinite(ratio) and ratio >= 0):
        raise ValueError(f"ratio must be >= 0, got {ratio}")
    return float(sum(ratio**k * stirling2(order, k) * vm.moments[k - 1] for k in range(1, order + 1)))


def p_out_isolation(lambda_l: float, lambda_e: float) -> float:
    """Probability a typical node can transmit to nobody: lambda_e/(lambda_l+lambda_e)."""
    _check_densities(lambda_l, lambda_e)
    return lambda_e / (lambda_l + lambda_e)


def p_in_isolation(ratio: float, area_samples):
    """Probability a typical node can receive from nobody, from cell-area draws.

    Returns an Estimate: the sample mean of exp(-ratio * A) over the supplied
    typical-cell areas, with its standard error.  The ratio is
    lambda_l/lambda_e.  See p_in_isolation_series for the moment-series route.
    """
    from .montecarlo import Estimate  # deferred: montecarlo imports this module

    a = np.asarray(area_samples, dtype=np.float64)
    if a.size == 0:
        raise ValueError("area_samples must be nonempty")
    if not (math.isfinite(ratio) and ratio >= 0):
        raise ValueError(f"ratio must be >= 0, got {ratio}")
    vals = np.exp(-ratio * a)
    se = float(vals.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
    return Estimate(value=float(vals.mean()), std_error=se, trials=int(a.size))


def p_in_isolation_series(ratio: float, vm: VoronoiMoments):
    """Moment-series route to the in-isolation probability.

    E{exp(-c A)} = sum_k (-c)^k E{A^k} / k! with c = ratio; the sum stops
    when a term drops below 1e-12 in magnitude or the supplied moments run
    out.  Returns (value, converged).  With only a handful of moments the
    series converges only for small ratios; converged=False says the
    truncation stopped at the moment list, not at the tolerance.
    """
    if not (math.isfinite(ratio) and ratio >= 0):
        raise ValueError(f"ratio must be >= 0, got {ratio}")
    total = 1.0
    converged = ratio == 0.0
    for k in range(1, len(vm) + 1):
        term = (-ratio) ** k / math.factorial(k) * vm.moments[k - 1]
        total += term
        if abs(term) < 1e-12:
            converged = True
            break
    return total, converged


def _quad_finite(f, a: float, b: float) -> float:
    out = integrate.quad(f, a, b, epsabs=_ABS_TOL, epsrel=_REL_TOL, limit=200, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3:
        raise RuntimeError(f"quadrature did not converge: {out[3]}")
    if err > max(_ABS_TOL, _REL_TOL * abs(val)) * 50.0:
        raise RuntimeError(f"quadrature error estimate {err:.2e} too large for value {val:.6e}")
    return val


def mean_out_degree_thresholded(cfg: NetworkConfig):
    """Mean secure out-degree under threshold rho and unequal noise, with its bound.

    Returns (exact, bound).  The exact value integrates the secure-range map
    against the nearest-eavesdropper law,

        pi^2 lambda_l lambda_e Int_0^inf x e^(-pi lambda_e x) / D(x)^(1/b) dx,
        D(x) = (sigma2_l/sigma2_e) 2^rho + (sigma2_l/P_l)(2^rho - 1) x^b,

    computed after normalizing u = pi lambda_e x; the bound is the Jensen
    substitution x -> E{x} and always dominates.  lambda_e = 0 gives
    (inf, inf).
    """
    if cfg.gain.kind != "unbounded":
        raise ValueError("thresholded mean degree requires the unbounded gain model")
    if cfg.lambda_e == 0:
        return math.inf, math.inf
    b = cfg.gain.b
    a_const = cfg.sigma2_l / cfg.sigma2_e * 2.0**cfg.rho
    b_const = cfg.sigma2_l / cfg.p_l * (2.0**cfg.rho - 1.0)
    pe = math.pi * cfg.lambda_e
    ratio = cfg.lambda_l / cfg.lambda_e

    def f(u: float) -> float:
        return u * math.exp(-u) / (a_const + b_const * (u / pe) ** b) ** (1.0 / b)

    exact = ratio * _quad_finite(f, 0.0, np.inf)
    bound = ratio / (a_const + b_const / pe**b) ** (1.0 / b)
    return exact, bound


def mean_out_degree_neutralization_lb(rho_n: float, lambda_l: float, lambda_e: float) -> float:
    """Lower bound on the mean degree with guard radius rho_n:
    (lambda_l/lambda_e)(pi lambda_e rho_n^2 + exp(pi lambda_l rho_n^2))."""
    _check_densities(lambda_l, lambda_e)
    if not (math.isfinite(rho_n) and rho_n >= 0):
        raise ValueError(f"rho_n must be >= 0, got {rho_n}")
    if lambda_e == 0:
        return math.inf
    r2 = rho_n * rho_n
    return lambda_l / lambda_e * (math.pi * lambda_e * r2 + math.exp(math.pi * lambda_l * r2))


def _neighbor_integrand(z, rho: float, i: int, cfg: NetworkConfig):
    """Density-of-rate integrand times the eavesdropper survival factor."""
    b = cfg.gain.b
    snr_l = cfg.p_l / cfg.sigma2_l
    snr_e = cfg.p_l / cfg.sigma2_e
    pl = math.pi * cfg.lambda_l
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        g_l = np.exp2(z) - 1.0
        g_e = np.exp2(z - rho) - 1.0
        dens = (
            math.log(2.0) / b * pl**i / math.factorial(i - 1) * snr_l ** (i / b)
            * np.exp2(z) * g_l ** (-1.0 - i / b)
            * np.exp(-pl * (snr_l / g_l) ** (1.0 / b))
        )
        surv = np.exp(-math.pi * cfg.lambda_e * (snr_e / g_e) ** (1.0 / b))
        out = dens * surv
    return np.where(np.isfinite(out), out, 0.0)


def cdf_msr_neighbor(rho: float, i: int, cfg: NetworkConfig) -> float:
    """CDF of the secrecy rate to the i-th nearest legitimate node.

    One minus the tail integral of the rate density against the probability
    that every eavesdropper is far enough; integrated over z in (rho, inf)
    by double-exponential quadrature after the rational map z = rho + t/(1-t).
    """
    if cfg.gain.kind != "unbounded":
        raise ValueError("neighbor MSR law requires the unbounded gain model")
    if not (isinstance(i, int) and i >= 1):
        raise ValueError(f"neighbor index must be an integer >= 1, got {i}")
    if math.isnan(rho):
        raise ValueError("rho must not be NaN")
    if rho < 0:
        return 0.0

    def f(t):
        t = np.asarray(t, dtype=np.float64)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            z = rho + t / (1.0 - t)
            jac = (1.0 - t) ** -2.0
        vals = _neighbor_integrand(z, rho, i, cfg) * jac
        return np.where(np.isfinite(vals), vals, 0.0)

    res = integrate.tanhsinh(f, 0.0, 1.0, atol=_ABS_TOL, rtol=_REL_TOL)
    if not res.success:
        raise RuntimeError(f"neighbor MSR quadrature failed: status {res.status}")
    return float(min(max(1.0 - res.integral, 0.0), 1.0))


def p_exist_neighbor(i: int, lambda_l: float, lambda_e: float) -> float:
    """P{positive secrecy rate to the i-th neighbor} = (lambda_l/(lambda_l+lambda_e))^i."""
    _check_densities(lambda_l, lambda_e)
    if not (isinstance(i, int) and i >= 1):
        raise ValueError(f"neighbor index must be an integer >= 1, got {i}")
    return (lambda_l / (lambda_l + lambda_e)) ** i


def p_outage_neighbor(rho: float, i: int, cfg: NetworkConfig) -> float:
    """Secrecy-outage probability at target rate rho.

    For rho > 0 this is exactly the rate CDF at rho (the outage event is the
    rate falling at or below the target); delegation keeps the two readings
    identical by construction.
    """
    return cdf_msr_neighbor(rho, i, cfg)


def c_alpha(alpha: float) -> float:
    """Normalization constant (1-alpha)/(Gamma(2-alpha) cos(pi alpha/2)) of the
    one-sided stable law with exponent alpha in (0, 1)."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return (1.0 - alpha) / (math.gamma(2.0 - alpha) * math.cos(math.pi * alpha / 2.0))


def _colluding_args(r_l: float, cfg: NetworkConfig):
    if cfg.gain.kind != "unbounded":
        raise ValueError("colluding analysis requires the unbounded gain model")
    b = cfg.gain.b
    if b <= 1.0:
        raise ValueError(f"aggregate eavesdropper power diverges for b <= 1 (got b={b})")
    if not (math.isfinite(r_l) and r_l > 0):
        raise ValueError(f"link distance must be > 0, got {r_l}")
    return b


def cdf_msr_colluding(rho: float, r_l: float, cfg: NetworkConfig) -> float:
    """CDF of the secrecy rate of one link against colluding eavesdroppers.

    Zero below 0, one at and above the legitimate capacity; in between,
    1 - F_stable of the normalized aggregate-power threshold with
    alpha = 1/b.
    """
    b = _colluding_args(r_l, cfg)
    if math.isnan(rho):
        raise ValueError("rho must not be NaN")
    if rho < 0:
        return 0.0
    snr_l = cfg.p_l / (r_l ** (2.0 * b) * cfg.sigma2_l)
    cap = math.log2(1.0 + snr_l)
    if rho >= cap:
        return 1.0
    tau = (1.0 + snr_l) * 2.0**-rho - 1.0
    if cfg.lambda_e == 0:
        return 0.0
    scale = (math.pi * cfg.lambda_e / c_alpha(1.0 / b)) ** b * cfg.p_l / cfg.sigma2_e
    return 1.0 - stable.cdf_normalized(tau / scale, 1.0 / b)


def cdf_msr_noncolluding_link(rho: float, r_l: float, cfg: NetworkConfig) -> float:
    """CDF of the same link's secrecy rate when only the nearest eavesdropper counts."""
    b = _colluding_args(r_l, cfg)
    if math.isnan(rho):
        raise ValueError("rho must not be NaN")
    if rho < 0:
        return 0.0
    snr_l = cfg.p_l / (r_l ** (2.0 * b) * cfg.sigma2_l)
    cap = math.log2(1.0 + snr_l)
    if rho >= cap:
        return 1.0
    tau = (1.0 + snr_l) * 2.0**-rho - 1.0
    return 1.0 - math.exp(-math.pi * cfg.lambda_e * (cfg.p_l / cfg.sigma2_e / tau) ** (1.0 / b))


def p_exist_colluding(r_l: float, cfg: NetworkConfig) -> float:
    """P{positive secrecy rate against colluding eavesdroppers}."""
    b = _colluding_args(r_l, cfg)
    if cfg.lambda_e == 0:
        return 1.0
    arg = cfg.sigma2_e / ((math.pi * cfg.lambda_e * r_l**2 / c_alpha(1.0 / b)) ** b * cfg.sigma2_l)
    return stable.cdf_normalized(arg, 1.0 / b)


def mean_degree_colluding(lambda_l: float, lambda_e: float, b: float) -> float:
    """Mean secure degree against colluding eavesdroppers: (lambda_l/lambda_e) sinc(1/b).

    b = 1 returns 0 (the degradation factor vanishes); b < 1 is an error
    (the aggregate power diverges).  lambda_e = 0 gives inf.
    """
    _check_densities(lambda_l, lambda_e)
    if not math.isfinite(b) or b < 1.0:
        raise ValueError(f"b must be >= 1, got {b}")
    if lambda_e == 0:
        return math.inf
    if b == 1.0:
        return 0.0
    return lambda_l / lambda_e * float(np.sinc(1.0 / b))
