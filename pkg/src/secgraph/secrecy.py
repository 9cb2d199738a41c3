"""Per-link maximum secrecy rate and directed secure-edge graph builders.

A directed edge x_i -> x_j exists when the link from x_i to x_j supports a
secrecy rate above the threshold rho against the eavesdropper field.  Each
builder realizes one variant of that predicate on a fixed realization:

    build_baseline      distance rule: |x_i - x_j| < min_k |x_i - e_k|
    build_fading        gain rule with per-pair propagation effects Z
    build_thresholded   rho > 0 and unequal noise, deterministic channels
    build_sectorized    per-destination sector restricts which eavesdroppers count
    build_neutralized   eavesdroppers inside the guard radius of any
                        legitimate node are removed first

All predicates use strict inequalities; ties are probability-zero events.
With an empty eavesdropper set the builders return the complete digraph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pointprocess import PointSet, Rng
from .propagation import FadingModel, GainModel, gain, sample_fading

__all__ = [
    "NetworkConfig",
    "ISGraph",
    "SectorConfig",
    "NeutralizationConfig",
    "msr_link",
    "secure_range_thresholded",
    "build_baseline",
    "build_thresholded",
    "build_fading",
    "build_sectorized",
    "build_neutralized",
    "colluding_msr",
    "nearest_distances",
]

# brute force below this many eavesdroppers; uniform-grid index above
_GRID_THRESHOLD = 256


@dataclass(frozen=True)
class NetworkConfig:
    """Densities, radio parameters, and channel models of one scenario.

    lambda_l, lambda_e   legitimate / eavesdropper densities (nodes per m^2)
    p_l                  transmit power (linear units)
    sigma2_l, sigma2_e   legitimate / eavesdropper receiver noise powers
    rho                  secrecy rate threshold (bits per complex dimension)
    """

    lambda_l: float = 1.0
    lambda_e: float = 0.1
    p_l: float = 1.0
    sigma2_l: float = 1.0
    sigma2_e: float = 1.0
    rho: float = 0.0
    gain: GainModel = field(default_factory=GainModel)
    fading: FadingModel = field(default_factory=FadingModel)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lambda_l) and self.lambda_l > 0):
            raise ValueError(f"lambda_l must be > 0, got {self.lambda_l}")
        if not (math.isfinite(self.lambda_e) and self.lambda_e >= 0):
            raise ValueError(f"lambda_e must be >= 0, got {self.lambda_e}")
        if not (math.isfinite(self.p_l) and self.p_l > 0):
            raise ValueError(f"p_l must be > 0, got {self.p_l}")
        if not (math.isfinite(self.sigma2_l) and self.sigma2_l > 0):
            raise ValueError(f"sigma2_l must be > 0, got {self.sigma2_l}")
        if not (math.isfinite(self.sigma2_e) and self.sigma2_e > 0):
            raise ValueError(f"sigma2_e must be > 0, got {self.sigma2_e}")
        if not (math.isfinite(self.rho) and self.rho >= 0):
            raise ValueError(f"rho must be >= 0, got {self.rho}")

    @property
    def ratio(self) -> float:
        """lambda_l / lambda_e; infinite when there are no eavesdroppers."""
        return self.lambda_l / self.lambda_e if self.lambda_e > 0 else math.inf


@dataclass(frozen=True)
class SectorConfig:
    """L equal angular transmission sectors with a per-source offset policy.

    The offset law is not pinned down by the sector degree theorem (any joint
    distribution gives the same out-degree PMF); `offsets` selects the
    simulated one: "iid_uniform" draws each phi_i uniformly on [0, 2pi/L),
    "zero" aligns every node's sector boundaries with the x-axis.
    """

    L: int = 1
    offsets: str = "iid_uniform"

    def __post_init__(self) -> None:
        if not (isinstance(self.L, int) and self.L >= 1):
            raise ValueError(f"sector count L must be an integer >= 1, got {self.L}")
        if self.offsets not in ("iid_uniform", "zero"):
            raise ValueError(f"offsets policy must be 'iid_uniform' or 'zero', got {self.offsets!r}")


@dataclass(frozen=True)
class NeutralizationConfig:
    """Guard radius rho_n: no eavesdropper survives within it of a legitimate node."""

    radius: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius >= 0):
            raise ValueError(f"neutralization radius must be >= 0, got {self.radius}")


class ISGraph:
    """Directed secure-edge adjacency over the legitimate points of one realization."""

    __slots__ = ("legit", "eaves", "out_edges")

    def __init__(self, legit: PointSet, eaves: PointSet, out_edges):
        n = len(legit)
        edges = []
        for i, targets in enumerate(out_edges):
            t = np.asarray(targets, dtype=np.int64)
            if t.size and (t.min() < 0 or t.max() >= n or np.any(t == i)):
                raise ValueError("edges must connect distinct legitimate indices")
            edges.append(t)
        if len(edges) != n:
            raise ValueError("adjacency must list every legitimate source")
        self.legit = legit
        self.eaves = eaves
        self.out_edges = tuple(edges)

    def out_degrees(self) -> np.ndarray:
        return np.array([len(t) for t in self.out_edges], dtype=np.int64)

    def in_degrees(self) -> np.ndarray:
        n = len(self.legit)
        if n == 0:
            return np.zeros(0, dtype=np.int64)
        flat = np.concatenate([t for t in self.out_edges]) if n else np.zeros(0, np.int64)
        return np.bincount(flat, minlength=n).astype(np.int64)


def msr_link(prx_legit, prx_eave, sigma2_l: float, sigma2_e: float):
    """Maximum secrecy rate of one wiretap link, bits per complex dimension.

    [log2(1 + prx_legit/sigma2_l) - log2(1 + prx_eave/sigma2_e)]^+
    """
    pl = np.asarray(prx_legit, dtype=np.float64)
    pe = np.asarray(prx_eave, dtype=np.float64)
    if not (np.all(np.isfinite(pl)) and np.all(np.isfinite(pe))):
        raise ValueError("received powers must be finite")
    if np.any(pl < 0) or np.any(pe < 0):
        raise ValueError("received powers must be >= 0")
    if not (sigma2_l > 0 and sigma2_e > 0):
        raise ValueError("noise powers must be > 0")
    out = np.maximum(np.log2(1.0 + pl / sigma2_l) - np.log2(1.0 + pe / sigma2_e), 0.0)
    return out if out.ndim else float(out)


class _UniformGridIndex:
    """Uniform-grid nearest-neighbour index over a fixed planar point set."""

    def __init__(self, xy: np.ndarray):
        self.xy = xy
        n = len(xy)
        lo = xy.min(axis=0)
        hi = xy.max(axis=0)
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-30))
        # aim for O(1) points per cell
        self.ncell = max(int(math.sqrt(n)), 1)
        self.cell = span / self.ncell
        self.lo = lo
        ix = np.clip(((xy[:, 0] - lo[0]) / self.cell).astype(np.int64), 0, self.ncell - 1)
        iy = np.clip(((xy[:, 1] - lo[1]) / self.cell).astype(np.int64), 0, self.ncell - 1)
        flat = ix * self.ncell + iy
        order = np.argsort(flat, kind="stable")
        self.order = order
        self.starts = np.searchsorted(flat[order], np.arange(self.ncell * self.ncell + 1))

    def _cell_points(self, cx: int, cy: int) -> np.ndarray:
        if cx < 0 or cy < 0 or cx >= self.ncell or cy >= self.ncell:
            return self.order[0:0]
        f = cx * self.ncell + cy
        return self.order[self.starts[f] : self.starts[f + 1]]

    def nearest_dist(self, px: float, py: float) -> float:
        cx = int(np.clip((px - self.lo[0]) / self.cell, 0, self.ncell - 1))
        cy = int(np.clip((py - self.lo[1]) / self.cell, 0, self.ncell - 1))
        best2 = math.inf
        ring = 0
        while True:
            if ring > 0 and (ring - 1) * self.cell > math.sqrt(best2):
                break
            found_cell = False
            for dx in range(-ring, ring + 1):
                for dy in range(-ring, ring + 1):
                    if max(abs(dx), abs(dy)) != ring:
                        continue
                    idx = self._cell_points(cx + dx, cy + dy)
                    if idx.size == 0:
                        continue
                    found_cell = True
                    d2 = (self.xy[idx, 0] - px) ** 2 + (self.xy[idx, 1] - py) ** 2
                    m = float(d2.min())
                    if m < best2:
                        best2 = m
            ring += 1
            if ring > 2 * self.ncell and not found_cell and not math.isfinite(best2):
                # empty index
                break
        return math.sqrt(best2)


def nearest_distances(query_xy: np.ndarray, ps: PointSet) -> np.ndarray:
    """Distance from each query position to the nearest point of ps.

    Brute force for small sets, uniform-grid index beyond _GRID_THRESHOLD
    points.  Returns +inf entries when ps is empty.
    """
    query_xy = np.asarray(query_xy, dtype=np.float64).reshape(-1, 2)
    m = len(ps)
    if m == 0:
        return np.full(len(query_xy), math.inf)
    if m <= _GRID_THRESHOLD:
        dx = query_xy[:, 0][:, None] - ps.xy[:, 0][None, :]
        dy = query_xy[:, 1][:, None] - ps.xy[:, 1][None, :]
        return np.sqrt((dx * dx + dy * dy).min(axis=1))
    index = _UniformGridIndex(ps.xy)
    return np.array([index.nearest_dist(float(x), float(y)) for x, y in query_xy])


def _pairwise_sq(xy: np.ndarray) -> np.ndarray:
    dx = xy[:, 0][:, None] - xy[:, 0][None, :]
    dy = xy[:, 1][:, None] - xy[:, 1][None, :]
    return dx * dx + dy * dy


def build_baseline(legit: PointSet, eaves: PointSet) -> ISGraph:
    """Edge x_i -> x_j iff x_j is closer to x_i than every eavesdropper.

    This is the rho=0, path-loss-only, equal-noise secrecy graph; the caller
    is responsible for those assumptions holding in the surrounding model.
    """
    n = len(legit)
    re1 = nearest_distances(legit.xy, eaves)
    d2 = _pairwise_sq(legit.xy)
    edges = []
    for i in range(n):
        hit = np.flatnonzero(d2[i] < re1[i] ** 2)
        edges.append(hit[hit != i])
    return ISGraph(legit, eaves, edges)


def secure_range_thresholded(d_e, cfg: NetworkConfig):
    """Largest secure link distance given the nearest-eavesdropper distance.

    Unbounded gain only: the threshold edge predicate is equivalent to
    |x_i - x_j| < psi(|x_i - e*|) with

        psi(r) = r / (A + B r^(2b))^(1/(2b)),
        A = (sigma2_l/sigma2_e) 2^rho,  B = (sigma2_l/P_l)(2^rho - 1).

    Accepts arrays; d_e = +inf maps to the no-eavesdropper limit (B^(-1/(2b))
    for rho > 0, +inf for rho = 0).
    """
    if cfg.gain.kind != "unbounded":
        raise ValueError("secure range in closed form requires the unbounded gain model")
    b2 = 2.0 * cfg.gain.b
    A = cfg.sigma2_l / cfg.sigma2_e * 2.0**cfg.rho
    B = cfg.sigma2_l / cfg.p_l * (2.0**cfg.rho - 1.0)
    d = np.asarray(d_e, dtype=np.float64)
    inf_mask = np.isinf(d)
    dd = np.where(inf_mask, 1.0, d)
    out = dd / (A + B * dd**b2) ** (1.0 / b2)
    if np.any(inf_mask):
        limit = math.inf if B == 0.0 else B ** (-1.0 / b2)
        out = np.where(inf_mask, limit, out)
    return out if out.ndim else float(out)


def build_thresholded(legit: PointSet, eaves: PointSet, cfg: NetworkConfig) -> ISGraph:
    """Deterministic-channel secrecy graph with threshold rho and unequal noise.

    Edge iff g(|x_i-x_j|) > (sigma2_l/sigma2_e) 2^rho g(|x_i-e*|)
                            + (sigma2_l/P_l)(2^rho - 1),
    e* the eavesdropper nearest to the source.  Works for either gain model;
    fading must be none (the threshold analysis assumes Z = 1).
    """
    n = len(legit)
    re1 = nearest_distances(legit.xy, eaves)
    const = cfg.sigma2_l / cfg.p_l * (2.0**cfg.rho - 1.0)
    scale = cfg.sigma2_l / cfg.sigma2_e * 2.0**cfg.rho
    d2 = _pairwise_sq(legit.xy)
    edges = []
    for i in range(n):
        rhs = const if math.isinf(re1[i]) else scale * gain(cfg.gain, re1[i]) + const
        d = np.sqrt(d2[i])
        d[i] = 1.0  # placeholder: keeps gain() total; the self edge is dropped below
        g_ij = gain(cfg.gain, d)
        g_ij[i] = -math.inf
        hit = np.flatnonzero(g_ij > rhs)
        edges.append(hit[hit != i])
    return ISGraph(legit, eaves, edges)


def build_fading(legit: PointSet, eaves: PointSet, cfg: NetworkConfig, rng: Rng) -> ISGraph:
    """Random-channel secrecy graph at rho=0 and equal noise.

    One propagation effect Z is drawn per ordered source -> target pair
    (legitimate targets and eavesdroppers alike); the edge exists iff the
    legitimate gain beats the best eavesdropper gain:
    g(|x_i-x_j|, Z_ij) > max_k g(|x_i-e_k|, Z_{i,e_k}).
    """
    n, m = len(legit), len(eaves)
    z_legit = sample_fading(cfg.fading, rng.substream(0), size=(n, n))
    z_eave = sample_fading(cfg.fading, rng.substream(1), size=(n, m)) if m else None
    d2 = _pairwise_sq(legit.xy)
    edges = []
    for i in range(n):
        if m:
            de = np.hypot(eaves.xy[:, 0] - legit.xy[i, 0], eaves.xy[:, 1] - legit.xy[i, 1])
            best_eave = gain(cfg.gain, de, z_eave[i]).max()
        else:
            best_eave = 0.0
        d = np.sqrt(d2[i])
        d[i] = 1.0  # placeholder, as in build_thresholded
        g_ij = gain(cfg.gain, d, z_legit[i])
        g_ij[i] = -math.inf
        hit = np.flatnonzero(g_ij > best_eave)
        edges.append(hit[hit != i])
    return ISGraph(legit, eaves, edges)


def build_sectorized(legit: PointSet, eaves: PointSet, sector: SectorConfig, rng: Rng) -> ISGraph:
    """Sectorized baseline graph: only eavesdroppers sharing the destination's
    sector of the source can block an edge.

    Sectors are L equal wedges anchored at each source with offset phi_i drawn
    by the configured policy; edge iff |x_i-x_j| < min over eavesdroppers in
    the destination's wedge (absent eavesdroppers there, the edge exists).
    """
    n, m = len(legit), len(eaves)
    L = sector.L
    width = 2.0 * math.pi / L
    if sector.offsets == "iid_uniform":
        phis = rng.generator().uniform(0.0, width, n)
    else:
        phis = np.zeros(n)
    d2 = _pairwise_sq(legit.xy)
    edges = []
    for i in range(n):
        sect_min = np.full(L, math.inf)
        if m:
            dxe = eaves.xy[:, 0] - legit.xy[i, 0]
            dye = eaves.xy[:, 1] - legit.xy[i, 1]
            de = np.hypot(dxe, dye)
            ke = np.floor(((np.arctan2(dye, dxe) - phis[i]) % (2.0 * math.pi)) / width).astype(np.int64)
            np.minimum.at(sect_min, np.clip(ke, 0, L - 1), de)
        dxl = legit.xy[:, 0] - legit.xy[i, 0]
        dyl = legit.xy[:, 1] - legit.xy[i, 1]
        kl = np.floor(((np.arctan2(dyl, dxl) - phis[i]) % (2.0 * math.pi)) / width).astype(np.int64)
        kl = np.clip(kl, 0, L - 1)
        d = np.sqrt(d2[i])
        hit = np.flatnonzero(d < sect_min[kl])
        edges.append(hit[hit != i])
    return ISGraph(legit, eaves, edges)


def effective_eaves(legit: PointSet, eaves: PointSet, n: NeutralizationConfig) -> np.ndarray:
    """Indices of eavesdroppers surviving neutralization (outside every guard disk)."""
    if n.radius == 0.0 or len(eaves) == 0 or len(legit) == 0:
        return np.arange(len(eaves), dtype=np.int64)
    dmin = nearest_distances(eaves.xy, legit)  # nearest legitimate node per eavesdropper
    return np.flatnonzero(dmin > n.radius).astype(np.int64)


def build_neutralized(legit: PointSet, eaves: PointSet, n: NeutralizationConfig) -> ISGraph:
    """Baseline graph against the eavesdroppers surviving neutralization."""
    keep = effective_eaves(legit, eaves, n)
    surviving = PointSet(eaves.xy[keep], eaves.density, eaves.window_radius)
    g = build_baseline(legit, surviving)
    return ISGraph(legit, eaves, g.out_edges)


def colluding_msr(r_l: float, eaves: PointSet, cfg: NetworkConfig, tail_radius: float | None = None) -> float:
    """MSR of a link of length r_l against eavesdroppers combining their signals.

    The adversary's received power is the windowed sum P_l * sum R_e,i^(-2b)
    plus the deterministic mean of the truncated tail,
    2*pi*lambda_e*P_l*W^(2-2b)/(2b-2), W = tail_radius (defaults to the
    realization's window radius; +inf disables the correction).  Requires the
    unbounded gain model with b > 1; at b <= 1 the aggregate diverges.
    """
    b = cfg.gain.b
    if cfg.gain.kind != "unbounded":
        raise ValueError("colluding analysis requires the unbounded gain model")
    if b <= 1.0:
        raise ValueError(f"aggregate eavesdropper power diverges for b <= 1 (got b={b})")
    if not (math.isfinite(r_l) and r_l > 0):
        raise ValueError(f"link distance must be > 0, got {r_l}")
    w = eaves.window_radius if tail_radius is None else float(tail_radius)
    if w < eaves.window_radius:
        raise ValueError("tail_radius must be at least the realization window radius")
    r = eaves.ordered_r
    prx_e = cfg.p_l * float(np.sum(r ** (-2.0 * b))) if r.size else 0.0
    if math.isfinite(w):
        prx_e += 2.0 * math.pi * eaves.density * cfg.p_l * w ** (2.0 - 2.0 * b) / (2.0 * b - 2.0)
    prx_l = cfg.p_l / r_l ** (2.0 * b)
    return float(msr_link(prx_l, prx_e, cfg.sigma2_l, cfg.sigma2_e))
