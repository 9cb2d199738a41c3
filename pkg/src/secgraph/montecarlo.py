"""Repeated-realization estimators for every quantity the analytic module predicts.

Estimator design notes, per experiment:

  out_degree_pmf     no fading: exact in the distance domain.  The nearest
                     eavesdropper's squared distance is Exp(1/(pi lambda_e));
                     given it, the secure count is Poisson(lambda_l pi R^2).
                     No window, no truncation bias.  With fading the graph
                     predicate is simulated spatially inside a window sized
                     by the fading tail (recorded in bias_note).
  in_degree_pmf      legitimate points in a disk of radius W, eavesdroppers
                     in 2W: every eavesdropper that could capture a counted
                     point lies within twice that point's radius, so the
                     only bias is legitimate points beyond W, bounded by
                     (lambda_l/lambda_e) exp(-lambda_e pi W^2).
  voronoi_moments    typical-cell clipping against sorted candidates; when a
                     cell fails the safety condition (max vertex radius under
                     half the window) the same realization is extended with a
                     fresh annulus, which preserves the Poisson law and keeps
                     the estimator unbiased.
  thresholded_mean   exact: the secure range is a deterministic map of the
                     nearest-eavesdropper distance, so count draws stay in
                     the distance domain.
  sector_pmf         sectors are independent wedges: per sector the nearest
                     eavesdropper's squared distance is Exp at rate
                     pi lambda_e / L and the secure count Poisson on the
                     wedge.  Exact.
  neutralization     spatial: survivors of the guard-disk filter determine
                     the effective nearest eavesdropper; windows grow per
                     trial until a survivor exists, so there is no truncation
                     event, only occasional extra work.
  colluding_*        aggregate power summed inside a window plus the
                     deterministic mean of the truncated tail,
                     2 pi lambda_e P_l W^(2-2b)/(2b-2).

Reproducibility: trials are partitioned into fixed-size blocks, each block
seeded by its own substream of the base seed and reduced in block order.
Thread count changes only which worker executes a block, never the numbers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic
from .analytic import DegreePmf, VoronoiMoments
from .kernels import cell_area, count_in_cell, neutral_survivors
from .pointprocess import Rng
from .propagation import FadingModel, gain, sample_fading
from .secrecy import NetworkConfig, msr_link, secure_range_thresholded

__all__ = [
    "Estimate",
    "CdfEstimate",
    "IsolationEstimate",
    "ExperimentSpec",
    "estimate_out_degree_pmf",
    "estimate_in_degree_pmf",
    "estimate_voronoi_moments",
    "estimate_colluding_power",
    "estimate_generic",
    "in_degree_window",
    "colluding_window",
    "fading_window",
]

_BLOCK = 256

_KINDS = (
    "out_degree_pmf",
    "in_degree_pmf",
    "isolation",
    "voronoi_moments",
    "thresholded_mean",
    "sector_pmf",
    "neutralization_mean",
    "msr_cdf_neighbor",
    "colluding_power",
    "colluding_msr_cdf",
    "colluding_mean_degree",
)


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo estimate: value, standard error, trial count, audit note."""

    value: float
    std_error: float
    trials: int
    bias_note: str | None = None

    def __post_init__(self) -> None:
        if not self.std_error >= 0:
            raise ValueError(f"std_error must be >= 0, got {self.std_error}")
        if not self.trials >= 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class CdfEstimate:
    """Empirical CDF on a fixed grid, with per-point binomial standard errors."""

    grid: tuple
    values: np.ndarray
    std_errors: np.ndarray
    trials: int
    bias_note: str | None = None


@dataclass(frozen=True)
class IsolationEstimate:
    out_isolation: Estimate
    in_isolation: Estimate


@dataclass(frozen=True)
class ExperimentSpec:
    """One named experiment: what to estimate, at which configuration, how long."""

    kind: str
    cfg: NetworkConfig
    trials: int
    base_seed: int
    L: int = 1
    rho_n: float = 0.0
    neighbor_index: int = 1
    rho_grid: tuple = ()
    r_l: float = 1.0
    r_window: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {_KINDS}")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trials must be an integer >= 1, got {self.trials}")
        if self.kind in ("msr_cdf_neighbor", "colluding_msr_cdf") and len(self.rho_grid) == 0:
            raise ValueError(f"{self.kind} requires a nonempty rho_grid")


# ---------------------------------------------------------------------------
# window sizing (first-class, auditable)


def in_degree_window(lambda_l: float, lambda_e: float, bias: float = 1e-4) -> float:
    """Smallest disk radius keeping the expected count of missed legitimate
    points, (lambda_l/lambda_e) exp(-lambda_e pi W^2), below the bias target."""
    if lambda_e <= 0:
        raise ValueError("in-degree window needs lambda_e > 0")
    ratio = lambda_l / lambda_e
    if ratio <= bias:
        return 1.0 / math.sqrt(math.pi * lambda_e)
    w2 = math.log(ratio / bias) / (math.pi * lambda_e)
    return math.sqrt(w2)


def colluding_window(cfg: NetworkConfig, rel_std: float = 1e-3) -> float:
    """Window radius for the aggregate eavesdropper power.

    The mean of the truncated tail is added back deterministically, so the
    residual error is the tail's fluctuation.  Its standard deviation,
    P_l sqrt(2 pi lambda_e W^(2-4b)/(4b-2)), is kept below rel_std times the
    scale gamma^(1/alpha) = (pi lambda_e / C_(1/b))^b P_l of the limiting
    stable law.  (The raw in-window mean diverges as the window grows for
    any b, so it cannot serve as the reference.)
    """
    b = cfg.gain.b
    if b <= 1.0:
        raise ValueError(f"aggregate eavesdropper power diverges for b <= 1 (got b={b})")
    if cfg.lambda_e <= 0:
        raise ValueError("colluding window needs lambda_e > 0")
    scale = (math.pi * cfg.lambda_e / analytic.c_alpha(1.0 / b)) ** b * cfg.p_l
    var_coeff = 2.0 * math.pi * cfg.lambda_e * cfg.p_l**2 / (4.0 * b - 2.0)
    # std_tail(W) = sqrt(var_coeff) * W^(1-2b)  <=  rel_std * scale
    w = (rel_std * scale / math.sqrt(var_coeff)) ** (1.0 / (1.0 - 2.0 * b))
    return max(w, 2.0 / math.sqrt(math.pi * cfg.lambda_e))


_FADING_WINDOW_MULT = {"none": 4.0, "nakagami": 6.0, "lognormal": 8.0, "nakagami_lognormal": 8.0}


def fading_window(fading: FadingModel, lambda_e: float) -> float:
    """Disk radius for the spatial out-degree route under fading.

    Scaled to the nearest-eavesdropper distance 1/sqrt(lambda_e); the
    multiplier grows with the heaviness of the propagation-effect upper
    tail (lognormal needs the most room).
    """
    if lambda_e <= 0:
        raise ValueError("fading window needs lambda_e > 0")
    return _FADING_WINDOW_MULT[fading.kind] / math.sqrt(lambda_e)


# ---------------------------------------------------------------------------
# block harness


def _blocks(trials: int) -> list[tuple[int, int]]:
    out = []
    start = 0
    idx = 0
    while start < trials:
        n = min(_BLOCK, trials - start)
        out.append((idx, n))
        start += n
        idx += 1
    return out


def _run_blocks(trials: int, root: Rng, threads: int, block_fn):
    """Run block_fn(block_rng, block_size) over fixed-size trial blocks.

    Results come back in block order regardless of thread count; block_fn
    must derive all randomness from the Rng it is handed.
    """
    plan = _blocks(trials)
    if threads <= 1:
        return [block_fn(root.substream(i), n) for i, n in plan]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(block_fn, root.substream(i), n) for i, n in plan]
        return [f.result() for f in futures]


def _mean_estimate(partials, trials: int, bias_note: str | None = None) -> Estimate:
    """Reduce per-block (sum, sumsq) pairs into a mean with standard error."""
    s = 0.0
    s2 = 0.0
    for ps, ps2 in partials:
        s += ps
        s2 += ps2
    mean = s / trials
    if trials > 1:
        var = max(s2 - s * s / trials, 0.0) / (trials - 1)
        se = math.sqrt(var / trials)
    else:
        se = 0.0
    return Estimate(value=mean, std_error=se, trials=trials, bias_note=bias_note)


def _reduce_hist(partials) -> np.ndarray:
    width = max(len(h) for h in partials)
    total = np.zeros(width, dtype=np.int64)
    for h in partials:
        total[: len(h)] += h
    return total


def _pmf_and_mean(hists, trials: int, bias_note: str | None):
    counts = _reduce_hist(hists)
    probs = counts / float(trials)
    pmf = DegreePmf(probs)
    n = np.arange(len(counts), dtype=np.float64)
    s = float(np.dot(n, counts))
    s2 = float(np.dot(n * n, counts))
    mean = s / trials
    var = max(s2 - s * s / trials, 0.0) / (trials - 1) if trials > 1 else 0.0
    est = Estimate(value=mean, std_error=math.sqrt(var / trials), trials=trials, bias_note=bias_note)
    return pmf, est


# ---------------------------------------------------------------------------
# out-degree


def _out_degree_exact_block(cfg: NetworkConfig):
    lam = 1.0 / (math.pi * cfg.lambda_e)
    area_rate = cfg.lambda_l * math.pi

    def block(rng: Rng, n: int):
        g = rng.generator()
        re2 = g.exponential(scale=lam, size=n)
        counts = g.poisson(lam=area_rate * re2)
        return np.bincount(counts)

    return block


def _disk_block_draw(g, lam: float, w: float, n: int):
    """Counts and squared radii plus angles for n disk realizations."""
    counts = g.poisson(lam * math.pi * w * w, size=n)
    total = int(counts.sum())
    r = w * np.sqrt(g.random(total))
    theta = g.uniform(0.0, 2.0 * math.pi, total)
    return counts, r, theta


def _out_degree_fading_block(cfg: NetworkConfig, w: float):
    b2 = 2.0 * cfg.gain.b

    def block(rng: Rng, n: int):
        g = rng.generator()
        nl = g.poisson(cfg.lambda_l * math.pi * w * w, size=n)
        ne = g.poisson(cfg.lambda_e * math.pi * w * w, size=n)
        tl, te = int(nl.sum()), int(ne.sum())
        rl = w * np.sqrt(g.random(tl))
        re = w * np.sqrt(g.random(te))
        zl = sample_fading(cfg.fading, rng.substream(1), size=tl)
        ze = sample_fading(cfg.fading, rng.substream(2), size=te)
        gl = gain(cfg.gain, rl, zl)
        ge = gain(cfg.gain, re, ze)
        seg_l = np.repeat(np.arange(n), nl)
        seg_e = np.repeat(np.arange(n), ne)
        best = np.zeros(n)
        np.maximum.at(best, seg_e, ge)
        hits = gl > best[seg_l]
        counts = np.bincount(seg_l[hits], minlength=n)
        return np.bincount(counts)

    return block


def estimate_out_degree_pmf(spec: ExperimentSpec, threads: int = 1):
    """Empirical out-degree PMF of a typical node, with an Estimate of the mean."""
    cfg = spec.cfg
    if cfg.lambda_e <= 0:
        raise ValueError("out-degree estimation needs lambda_e > 0")
    if cfg.fading.kind == "none":
        block = _out_degree_exact_block(cfg)
        note = "exact distance-domain sampling, no truncation"
    else:
        w = fading_window(cfg.fading, cfg.lambda_e)
        block = _out_degree_fading_block(cfg, w)
        note = f"spatial window radius {w:.3g} sized for {cfg.fading.kind} tails"
    hists = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    return _pmf_and_mean(hists, spec.trials, note)


# ---------------------------------------------------------------------------
# in-degree


def _in_degree_block(cfg: NetworkConfig, w: float):
    def block(rng: Rng, n: int):
        g = rng.generator()
        nl, rl, thl = _disk_block_draw(g, cfg.lambda_l, w, n)
        ne, re, the = _disk_block_draw(g, cfg.lambda_e, 2.0 * w, n)
        lx = rl * np.cos(thl)
        ly = rl * np.sin(thl)
        ex = re * np.cos(the)
        ey = re * np.sin(the)
        loff = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(nl, out=loff[1:])
        eoff = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(ne, out=eoff[1:])
        counts = count_in_cell(lx, ly, loff, ex, ey, eoff)
        return np.bincount(counts)

    return block


def estimate_in_degree_pmf(spec: ExperimentSpec, threads: int = 1):
    """Empirical in-degree PMF of a typical node (legitimate points inside the
    origin's eavesdropper-Voronoi cell), with an Estimate of the mean."""
    cfg = spec.cfg
    if cfg.lambda_e <= 0:
        raise ValueError("in-degree estimation needs lambda_e > 0")
    w = in_degree_window(cfg.lambda_l, cfg.lambda_e)
    bias = cfg.lambda_l / cfg.lambda_e * math.exp(-cfg.lambda_e * math.pi * w * w)
    note = f"window radius {w:.3g}, truncation bias bound {bias:.2e}"
    hists = _run_blocks(spec.trials, Rng(spec.base_seed), threads, _in_degree_block(cfg, w))
    return _pmf_and_mean(hists, spec.trials, note)


# ---------------------------------------------------------------------------
# Voronoi typical cell


def _voronoi_block(k_max: int):
    w0 = 4.0

    def block(rng: Rng, n: int):
        g = rng.generator()
        areas = np.empty(n)
        for t in range(n):
            w = w0
            cnt = g.poisson(math.pi * w * w)
            r = w * np.sqrt(g.random(cnt))
            th = g.uniform(0.0, 2.0 * math.pi, cnt)
            xs = r * np.cos(th)
            ys = r * np.sin(th)
            for _attempt in range(12):
                order = np.argsort(xs * xs + ys * ys, kind="stable")
                sx = np.ascontiguousarray(xs[order])
                sy = np.ascontiguousarray(ys[order])
                area, max_r, used, complete = cell_area(sx, sy, w / 2.0)
                if complete and max_r < w / 2.0:
                    break
                # cell not provably exact: extend the same realization
                w_new = 1.5 * w
                extra = g.poisson(math.pi * (w_new * w_new - w * w))
                r2 = np.sqrt(g.random(extra) * (w_new * w_new - w * w) + w * w)
                th2 = g.uniform(0.0, 2.0 * math.pi, extra)
                xs = np.concatenate([xs, r2 * np.cos(th2)])
                ys = np.concatenate([ys, r2 * np.sin(th2)])
                w = w_new
            else:
                raise RuntimeError("typical-cell window exhausted after repeated extension")
            areas[t] = area
        hist = np.zeros(k_max + 1)
        for k in range(1, k_max + 1):
            hist[k] = float(np.sum(areas**k))
        return hist, areas

    return block


def estimate_voronoi_moments(k_max: int, trials: int, rng: Rng, threads: int = 1):
    """Simulated moments E{A^k}, k=1..k_max, of the typical unit-density cell area.

    Returns (VoronoiMoments, areas): the raw area samples feed the
    in-isolation estimator and let callers compute their own standard errors.
    """
    if not (isinstance(k_max, int) and 1 <= k_max <= 6):
        raise ValueError(f"k_max must be an integer in 1..6, got {k_max}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    results = _run_blocks(trials, rng, threads, _voronoi_block(k_max))
    sums = np.zeros(k_max + 1)
    chunks = []
    for hist, areas in results:
        sums += hist
        chunks.append(areas)
    moments = tuple(float(sums[k] / trials) for k in range(1, k_max + 1))
    return VoronoiMoments(moments, source="simulated"), np.concatenate(chunks)


# ---------------------------------------------------------------------------
# colluding aggregate power


def _colluding_power_block(cfg: NetworkConfig, w: float, tail: float):
    b = cfg.gain.b

    def block(rng: Rng, n: int):
        g = rng.generator()
        ne = g.poisson(cfg.lambda_e * math.pi * w * w, size=n)
        total = int(ne.sum())
        r2 = w * w * g.random(total)
        contrib = cfg.p_l * r2 ** (-b)
        seg = np.repeat(np.arange(n), ne)
        agg = np.bincount(seg, weights=contrib, minlength=n) + tail
        return agg

    return block


def _tail_mean(cfg: NetworkConfig, w: float) -> float:
    b = cfg.gain.b
    return 2.0 * math.pi * cfg.lambda_e * cfg.p_l * w ** (2.0 - 2.0 * b) / (2.0 * b - 2.0)


def estimate_colluding_power(cfg: NetworkConfig, r_window: float, trials: int, rng: Rng, threads: int = 1):
    """Aggregate eavesdropper power samples: windowed sum plus mean-tail correction.

    Returns (Estimate of the windowed-sum mean, samples).  The samples are
    the per-trial corrected sums, in trial order, for distribution tests.
    """
    if cfg.gain.kind != "unbounded" or cfg.gain.b <= 1.0:
        raise ValueError("aggregate eavesdropper power requires unbounded gain with b > 1")
    if not (math.isfinite(r_window) and r_window > 0):
        raise ValueError(f"r_window must be positive and finite, got {r_window}")
    if cfg.lambda_e <= 0:
        samples = np.zeros(trials)
        return Estimate(0.0, 0.0, trials, bias_note="no eavesdroppers"), samples
    tail = _tail_mean(cfg, r_window)
    parts = _run_blocks(trials, rng, threads, _colluding_power_block(cfg, r_window, tail))
    samples = np.concatenate(parts)
    note = f"window radius {r_window:.4g}, mean-tail correction {tail:.3e}"
    pairs = [(float(p.sum()), float(np.dot(p, p))) for p in parts]
    return _mean_estimate(pairs, trials, note), samples


# ---------------------------------------------------------------------------
# generic dispatch


def _thresholded_mean_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    lam = 1.0 / (math.pi * cfg.lambda_e)
    area_rate = cfg.lambda_l * math.pi

    def block(rng: Rng, n: int):
        g = rng.generator()
        re = np.sqrt(g.exponential(scale=lam, size=n))
        psi = secure_range_thresholded(re, cfg)
        counts = g.poisson(lam=area_rate * psi * psi)
        return float(counts.sum()), float(np.dot(counts, counts))

    parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    return _mean_estimate(parts, spec.trials, "exact distance-domain sampling")


def _sector_pmf_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    L = spec.L
    lam = 1.0 / (math.pi * cfg.lambda_e / L)
    wedge_rate = cfg.lambda_l * math.pi / L

    def block(rng: Rng, n: int):
        g = rng.generator()
        dmin2 = g.exponential(scale=lam, size=(n, L))
        counts = g.poisson(lam=wedge_rate * dmin2).sum(axis=1)
        return np.bincount(counts)

    hists = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    return _pmf_and_mean(hists, spec.trials, f"exact per-sector distance-domain sampling, L={L}")


def _neutralization_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    rho_n = spec.rho_n
    if rho_n == 0.0:
        # no guard disks: identical to the baseline out-degree law
        est = _thresholded_like_baseline(spec, threads)
        return est
    lam_eff = cfg.lambda_e * math.exp(-cfg.lambda_l * math.pi * rho_n * rho_n)
    w0 = max(2.0 * rho_n, math.sqrt(math.log(400.0) / (math.pi * lam_eff)))

    def block(rng: Rng, n: int):
        g = rng.generator()
        s = 0.0
        s2 = 0.0
        for _ in range(n):
            we = w0
            wl = we + rho_n
            ne = g.poisson(cfg.lambda_e * math.pi * we * we)
            re_r = we * np.sqrt(g.random(ne))
            re_t = g.uniform(0.0, 2.0 * math.pi, ne)
            ex = re_r * np.cos(re_t)
            ey = re_r * np.sin(re_t)
            nl = g.poisson(cfg.lambda_l * math.pi * wl * wl)
            rl_r = wl * np.sqrt(g.random(nl))
            rl_t = g.uniform(0.0, 2.0 * math.pi, nl)
            lx = rl_r * np.cos(rl_t)
            ly = rl_r * np.sin(rl_t)
            while True:
                # the origin is itself a legitimate node and neutralizes
                fx = np.concatenate([lx, [0.0]])
                fy = np.concatenate([ly, [0.0]])
                surv = neutral_survivors(ex, ey, fx, fy, rho_n)
                if np.any(surv):
                    d2 = ex[surv] ** 2 + ey[surv] ** 2
                    re1_2 = float(d2.min())
                    break
                # no survivor inside the window: extend both processes
                we_new = 1.5 * we
                wl_new = we_new + rho_n
                n2 = g.poisson(cfg.lambda_e * math.pi * (we_new**2 - we**2))
                rr = np.sqrt(g.random(n2) * (we_new**2 - we**2) + we**2)
                tt = g.uniform(0.0, 2.0 * math.pi, n2)
                ex = np.concatenate([ex, rr * np.cos(tt)])
                ey = np.concatenate([ey, rr * np.sin(tt)])
                n3 = g.poisson(cfg.lambda_l * math.pi * (wl_new**2 - wl**2))
                rr = np.sqrt(g.random(n3) * (wl_new**2 - wl**2) + wl**2)
                tt = g.uniform(0.0, 2.0 * math.pi, n3)
                lx = np.concatenate([lx, rr * np.cos(tt)])
                ly = np.concatenate([ly, rr * np.sin(tt)])
                we, wl = we_new, wl_new
            deg = int(np.count_nonzero(lx * lx + ly * ly < re1_2))
            s += deg
            s2 += deg * deg
        return s, s2

    parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    note = f"guard radius {rho_n}, initial eavesdropper window {w0:.3g}, grown per trial until a survivor exists"
    return _mean_estimate(parts, spec.trials, note)


def _thresholded_like_baseline(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    lam = 1.0 / (math.pi * cfg.lambda_e)
    area_rate = cfg.lambda_l * math.pi

    def block(rng: Rng, n: int):
        g = rng.generator()
        re2 = g.exponential(scale=lam, size=n)
        counts = g.poisson(lam=area_rate * re2)
        return float(counts.sum()), float(np.dot(counts, counts))

    parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    return _mean_estimate(parts, spec.trials, "exact distance-domain sampling")


def _ecdf_reduce(parts, grid, trials: int, note: str):
    counts = np.zeros(len(grid), dtype=np.int64)
    for p in parts:
        counts += p
    vals = counts / float(trials)
    ses = np.sqrt(np.maximum(vals * (1.0 - vals), 0.0) / trials)
    return CdfEstimate(grid=tuple(grid), values=vals, std_errors=ses, trials=trials, bias_note=note)


def _msr_neighbor_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    i = spec.neighbor_index
    if not (isinstance(i, int) and i >= 1):
        raise ValueError(f"neighbor index must be an integer >= 1, got {i}")
    b = cfg.gain.b
    grid = np.asarray(spec.rho_grid, dtype=np.float64)

    def block(rng: Rng, n: int):
        g = rng.generator()
        rl2 = g.gamma(shape=float(i), scale=1.0 / (math.pi * cfg.lambda_l), size=n)
        re2 = g.exponential(scale=1.0 / (math.pi * cfg.lambda_e), size=n)
        msr = msr_link(cfg.p_l * rl2 ** (-b), cfg.p_l * re2 ** (-b), cfg.sigma2_l, cfg.sigma2_e)
        return (msr[None, :] <= grid[:, None]).sum(axis=1).astype(np.int64)

    parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    return _ecdf_reduce(parts, grid, spec.trials, f"exact distance-domain sampling, neighbor {i}")


def _colluding_cdf_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    b = cfg.gain.b
    w = spec.r_window if spec.r_window is not None else colluding_window(cfg)
    tail = _tail_mean(cfg, w)
    grid = np.asarray(spec.rho_grid, dtype=np.float64)
    prx_l = cfg.p_l * spec.r_l ** (-2.0 * b)
    power_block = _colluding_power_block(cfg, w, tail)

    def block(rng: Rng, n: int):
        agg = power_block(rng, n)
        msr = msr_link(np.full(n, prx_l), agg, cfg.sigma2_l, cfg.sigma2_e)
        return (msr[None, :] <= grid[:, None]).sum(axis=1).astype(np.int64)

    parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    note = f"window radius {w:.4g}, mean-tail correction {tail:.3e}"
    return _ecdf_reduce(parts, grid, spec.trials, note)


def _colluding_mean_degree_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    b = cfg.gain.b
    w = spec.r_window if spec.r_window is not None else colluding_window(cfg)
    tail = _tail_mean(cfg, w)
    power_block = _colluding_power_block(cfg, w, tail)
    # secure radius r with P_l r^(-2b)/sigma2_l > P_agg/sigma2_e
    c = cfg.p_l * cfg.sigma2_e / cfg.sigma2_l

    def block(rng: Rng, n: int):
        g_power = rng.substream(0)
        agg = power_block(g_power, n)
        g = rng.substream(1).generator()
        r2 = (c / agg) ** (1.0 / b)
        counts = g.poisson(lam=cfg.lambda_l * math.pi * r2)
        return float(counts.sum()), float(np.dot(counts, counts))

    parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, block)
    note = f"window radius {w:.4g}, mean-tail correction {tail:.3e}"
    return _mean_estimate(parts, spec.trials, note)


def _isolation_blocks(spec: ExperimentSpec, threads: int):
    cfg = spec.cfg
    lam = 1.0 / (math.pi * cfg.lambda_e)
    area_rate = cfg.lambda_l * math.pi

    def out_block(rng: Rng, n: int):
        g = rng.generator()
        re2 = g.exponential(scale=lam, size=n)
        counts = g.poisson(lam=area_rate * re2)
        iso = counts == 0
        return float(iso.sum()), float(iso.sum())

    out_parts = _run_blocks(spec.trials, Rng(spec.base_seed), threads, out_block)
    out_est = _mean_estimate(out_parts, spec.trials, "exact distance-domain sampling")

    w = in_degree_window(cfg.lambda_l, cfg.lambda_e)
    in_block_fn = _in_degree_block(cfg, w)

    def in_block(rng: Rng, n: int):
        hist = in_block_fn(rng, n)
        z = float(hist[0]) if len(hist) else 0.0
        return z, z

    bias = cfg.lambda_l / cfg.lambda_e * math.exp(-cfg.lambda_e * math.pi * w * w)
    in_parts = _run_blocks(spec.trials, Rng(spec.base_seed).substream(1), threads, in_block)
    in_est = _mean_estimate(in_parts, spec.trials, f"window radius {w:.3g}, bias bound {bias:.2e}")
    return IsolationEstimate(out_isolation=out_est, in_isolation=in_est)


def estimate_generic(spec: ExperimentSpec, threads: int = 1):
    """Dispatch an ExperimentSpec to its estimator.

    Scalar experiments return an Estimate; CDF experiments a CdfEstimate on
    spec.rho_grid; the isolation experiment an IsolationEstimate pair.
    The PMF/Voronoi kinds have dedicated entry points with richer returns.
    """
    kind = spec.kind
    if kind == "out_degree_pmf":
        return estimate_out_degree_pmf(spec, threads)[1]
    if kind == "in_degree_pmf":
        return estimate_in_degree_pmf(spec, threads)[1]
    if kind == "isolation":
        return _isolation_blocks(spec, threads)
    if kind == "voronoi_moments":
        vm, _ = estimate_voronoi_moments(4, spec.trials, Rng(spec.base_seed), threads)
        return vm
    if kind == "thresholded_mean":
        return _thresholded_mean_blocks(spec, threads)
    if kind == "sector_pmf":
        return _sector_pmf_blocks(spec, threads)[1]
    if kind == "neutralization_mean":
        return _neutralization_blocks(spec, threads)
    if kind == "msr_cdf_neighbor":
        return _msr_neighbor_blocks(spec, threads)
    if kind == "colluding_power":
        w = spec.r_window if spec.r_window is not None else colluding_window(spec.cfg)
        return estimate_colluding_power(spec.cfg, w, spec.trials, Rng(spec.base_seed), threads)[0]
    if kind == "colluding_msr_cdf":
        return _colluding_cdf_blocks(spec, threads)
    if kind == "colluding_mean_degree":
        return _colluding_mean_degree_blocks(spec, threads)
    raise AssertionError(f"unhandled kind {kind!r}")
