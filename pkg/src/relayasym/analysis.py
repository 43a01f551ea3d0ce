"""Diversity metrics and asymptote-vs-simulation sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import mellin, montecarlo
from .mellin import NetworkConfig


@dataclass(frozen=True)
class SweepRow:
    """One gamma_bar grid point of a comparison sweep."""

    gamma_bar_db: float
    p_asym: float
    d_finite: float
    p_mc: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    p_oracle: float | None = None


def finite_diversity(s0: float, k: int, gamma_bar: float) -> float:
    """Finite-SNR diversity: -s0 minus the (k-1) ln ln / ln correction.

    For a simple dominant pole (k = 1) the correction vanishes and the value
    is -s0 for any gamma_bar; for k >= 2 the log-log correction requires
    gamma_bar > e.
    """
    if k < 1:
        raise ValueError("pole order k must be >= 1")
    if k == 1:
        return -s0
    if gamma_bar <= math.e:
        raise ValueError(f"gamma_bar must exceed e for k >= 2, got {gamma_bar}")
    lg = math.log(gamma_bar)
    return -s0 - (k - 1) * math.log(lg) / lg


def log_log_diversity(gamma_bar: float, p: float) -> float:
    """Origin-anchored log-log slope -ln p / ln gamma_bar.

    This is the finite-SNR diversity the lnln-corrected formula expands:
    for p ~ C (ln g)^(k-1) g^s0 it equals -s0 - (k-1) lnln g/ln g - ln C/ln g.
    A two-point difference quotient instead estimates the local derivative,
    whose correction is (k-1)/ln g, a different (and larger) quantity at any
    finite SNR.
    """
    if gamma_bar <= 1.0 or p <= 0.0:
        raise ValueError("need gamma_bar > 1 and p > 0")
    return -math.log(p) / math.log(gamma_bar)


def empirical_slope(points) -> list[tuple[float, float]]:
    """Adjacent-pair log-log slopes of an outage curve.

    points: iterable of (gamma_bar, p) with gamma_bar strictly increasing and
    p > 0.  Returns one (geometric midpoint, -dln p/dln gamma_bar) pair per
    adjacent input pair.
    """
    pts = [(float(g), float(p)) for g, p in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    for (g1, p1), (g2, p2) in zip(pts, pts[1:]):
        if g2 <= g1:
            raise ValueError("gamma_bar values must be strictly increasing")
    for g, p in pts:
        if p <= 0.0:
            raise ValueError(f"nonpositive probability {p} at gamma_bar={g}")
    out = []
    for (g1, p1), (g2, p2) in zip(pts, pts[1:]):
        slope = -(math.log(p2) - math.log(p1)) / (math.log(g2) - math.log(g1))
        out.append((math.sqrt(g1 * g2), slope))
    return out


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def _db_grid(lo: float, hi: float, step: float) -> list[float]:
    if not (hi > lo and step > 0):
        raise ValueError("need lo < hi and step > 0")
    grid = []
    v = lo
    while v <= hi + 1e-9:
        grid.append(round(v, 12))
        v += step
    return grid


def sweep_compare(
    network: NetworkConfig,
    db_range: tuple[float, float, float],
    n_samples: int | None = None,
    oracle: bool = False,
    lambda_max: int = mellin.DEFAULT_LAMBDA_MAX,
    re_min: float | None = None,
    seed: int = 42,
    n_workers: int | None = None,
) -> list[SweepRow]:
    """Evaluate asymptote (always), Monte Carlo and oracle (optional) on a dB grid.

    One expansion is built for the whole sweep; each Monte Carlo row draws
    from its own substream family (seed, row << 32 | block), so the sweep is
    deterministic given the seed and rows never share samples.
    """
    grid = _db_grid(*db_range)
    top_gamma = db_to_linear(grid[-1])
    expansion = mellin.build_expansion(
        network, lambda_max=lambda_max, re_min=re_min, warn_gamma_bar=top_gamma
    )
    s0, k = mellin.leading_pole(network)
    rows = []
    for i, db in enumerate(grid):
        gamma_bar = db_to_linear(db)
        p_asym = mellin.evaluate_expansion(expansion, gamma_bar)
        d_fin = finite_diversity(s0, k, gamma_bar)
        p_mc = ci_low = ci_high = p_oracle = None
        if n_samples:
            est = montecarlo.estimate_outage(
                network,
                gamma_bar,
                n_samples,
                seed=seed,
                stream_base=i << 32,
                n_workers=n_workers,
            )
            p_mc, ci_low, ci_high = est.p_hat, est.ci_low, est.ci_high
        if oracle:
            p_oracle = montecarlo.oracle_outage(network, gamma_bar)
        rows.append(SweepRow(db, p_asym, d_fin, p_mc, ci_low, ci_high, p_oracle))
    return rows
