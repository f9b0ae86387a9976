"""Odd cuts, the odd drift statistic, the odd mixing time and the case classifier.

For a vertex set A, the odd cut is the set of hyperedges meeting A an odd
number of times; these are exactly the moves that change the number of
live/odd vertices in every dynamics of :mod:`hyperdrift.ips`.  The pair
counts

    e_minus = #{(v,e): v in A, e odd}    (moves shrinking the live set)
    e_plus  = #{(w,e): w outside A, e odd}  (moves growing it)

give the drift  d = (e_minus - e_plus) / (e_minus + e_plus), positive
when the dynamics is biased toward annihilation.  All quantities are kept
as exact integers/Fractions; floats appear only in reporting.

Exhaustive profiles enumerate the 2^n subsets with numpy (popcounts on
packed masks); the distinct (e_minus, e_plus) pairs are then aggregated
exactly, so even the per-size means are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable

import numpy as np

from .hypergraph import (
    Hypergraph,
    OddCase,
    degrees,
    edge_masks,
    odd_case,
    vertex_mask,
)
from .rng import SplitMix64, spawn

ENUM_GUARD = 24  # largest n for full 2^n enumeration


class Unbounded:
    """Sentinel for an infinite odd mixing time (some admissible cut has
    no shrinking pair at all)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Unbounded"


UNBOUNDED = Unbounded()


@dataclass(frozen=True)
class CutReport:
    a_mask: int
    odd_cut: tuple[int, ...]  # edge indices, ascending
    e_minus: int
    e_plus: int
    d_odd: Fraction | None  # None when the odd cut is empty

    def __post_init__(self) -> None:
        assert self.e_minus >= len(self.odd_cut)


def cut_report(h: Hypergraph, a: int | Iterable[int]) -> CutReport:
    a_mask = a if isinstance(a, int) else vertex_mask(a)
    if a_mask < 0 or a_mask >> h.n:
        raise ValueError("vertex set does not fit the hypergraph")
    odd = []
    em = ep = 0
    for e, mask in enumerate(edge_masks(h)):
        inter = (mask & a_mask).bit_count()
        if inter & 1:
            odd.append(e)
            em += inter
            ep += mask.bit_count() - inter
    d = Fraction(em - ep, em + ep) if odd else None
    return CutReport(a_mask, tuple(odd), em, ep, d)


# ---------------------------------------------------------------------------
# Exhaustive enumeration.


def _pair_counts_all_subsets(h: Hypergraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sizes, e_minus, e_plus) arrays indexed by subset mask, via numpy."""
    if h.n > ENUM_GUARD:
        raise ValueError(f"2^{h.n} subsets exceed the enumeration guard 2^{ENUM_GUARD}")
    total = 1 << h.n
    sizes = np.zeros(total, dtype=np.int64)
    em = np.zeros(total, dtype=np.int64)
    ep = np.zeros(total, dtype=np.int64)
    chunk = 1 << 20
    masks = [np.uint64(m) for m in edge_masks(h)]
    widths = [m.bit_count() for m in edge_masks(h)]
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        a = np.arange(lo, hi, dtype=np.uint64)
        sizes[lo:hi] = np.bitwise_count(a).astype(np.int64)
        em_c = np.zeros(hi - lo, dtype=np.int64)
        ep_c = np.zeros(hi - lo, dtype=np.int64)
        for mask, width in zip(masks, widths):
            inter = np.bitwise_count(a & mask).astype(np.int64)
            oddsel = inter & 1
            em_c += oddsel * inter
            ep_c += oddsel * (width - inter)
        em[lo:hi] = em_c
        ep[lo:hi] = ep_c
    return sizes, em, ep


@dataclass(frozen=True)
class SizeProfile:
    size: int
    subsets: int
    undefined: int  # subsets of this size with an empty odd cut
    d_min: Fraction | None
    d_max: Fraction | None
    d_mean: Fraction | None


def _aggregate(em: np.ndarray, ep: np.ndarray) -> tuple[int, Fraction | None, Fraction | None, Fraction | None]:
    tot = em + ep
    defined = tot > 0
    undefined = int(len(em) - defined.sum())
    if not defined.any():
        return undefined, None, None, None
    # Aggregate over the distinct (e-, e+) pairs so Fractions stay cheap.
    key = em[defined] * (1 << 32) + ep[defined]
    uniq, counts = np.unique(key, return_counts=True)
    best = worst = None
    acc = Fraction(0)
    for k, c in zip(uniq.tolist(), counts.tolist()):
        m, p = divmod(k, 1 << 32)
        d = Fraction(m - p, m + p)
        acc += c * d
        best = d if best is None or d < best else best
        worst = d if worst is None or d > worst else worst
    return undefined, best, worst, acc / int(defined.sum())


def drift_profile_exact(h: Hypergraph) -> dict[int, SizeProfile]:
    """Per-cardinality extrema and mean of the drift over all nonempty A."""
    sizes, em, ep = _pair_counts_all_subsets(h)
    out: dict[int, SizeProfile] = {}
    for size in range(1, h.n + 1):
        sel = sizes == size
        undef, lo, hi, mean = _aggregate(em[sel], ep[sel])
        out[size] = SizeProfile(size, int(sel.sum()), undef, lo, hi, mean)
    return out


def drift_min_exact(h: Hypergraph) -> tuple[Fraction | None, int]:
    """Exact minimum of the drift over all nonempty A (with a witness mask).

    Subsets with an empty odd cut are skipped; returns (None, 0) if every
    nonempty subset is skipped.
    """
    sizes, em, ep = _pair_counts_all_subsets(h)
    tot = em + ep
    defined = (tot > 0) & (sizes > 0)
    if not defined.any():
        return None, 0
    num = em - ep
    # Compare d1 < d2  <=>  num1 * tot2 < num2 * tot1 (tot > 0); do a float
    # pre-pass to shortlist candidates, then settle exactly.
    with np.errstate(divide="ignore", invalid="ignore"):
        approx = np.where(defined, num / np.maximum(tot, 1), np.inf)
    lo = approx.min()
    cand = np.nonzero(approx <= lo + 1e-9)[0]
    best_val: Fraction | None = None
    best_mask = 0
    for idx in cand.tolist():
        d = Fraction(int(num[idx]), int(tot[idx]))
        if best_val is None or d < best_val:
            best_val, best_mask = d, idx
    return best_val, int(best_mask)


# ---------------------------------------------------------------------------
# Complete k-uniform hypergraphs: counts depend on |A| only, so the profile
# is a binomial computation and works for any n.


def complete_pair_counts(n: int, k: int, size: int) -> tuple[int, int]:
    em = ep = 0
    for j in range(1, min(k, size) + 1, 2):
        if k - j > n - size:
            continue
        c = comb(size, j) * comb(n - size, k - j)
        em += j * c
        ep += (k - j) * c
    return em, ep


def complete_profile(n: int, k: int) -> dict[int, Fraction | None]:
    """Exact drift of the complete k-uniform hypergraph per subset size."""
    out: dict[int, Fraction | None] = {}
    for size in range(1, n + 1):
        em, ep = complete_pair_counts(n, k, size)
        out[size] = Fraction(em - ep, em + ep) if em + ep else None
    return out


def asymptotic_drift_k5(delta) -> Fraction:
    """Large-n drift of the complete 5-uniform hypergraph at density delta."""
    d = Fraction(delta)
    if not 0 <= d <= 1:
        raise ValueError("density must lie in [0, 1]")
    q = 1 - d
    num = d**4 + 2 * d**2 * q**2 - 3 * q**4
    den = d**4 + 10 * d**2 * q**2 + 5 * q**4
    return num / den


# ---------------------------------------------------------------------------
# Sampled profiles for hypergraphs too large to enumerate.


@dataclass(frozen=True)
class SampledPoint:
    density: float
    size: int
    samples: int
    undefined: int
    mean: float | None
    half_width: float | None  # 1.96 * sd / sqrt(count)


def drift_profile_sampled(
    h: Hypergraph,
    densities: Iterable[float],
    samples: int,
    seed: int,
) -> list[SampledPoint]:
    if samples < 1:
        raise ValueError("need at least one sample")
    out = []
    for i, density in enumerate(densities):
        size = int(density * h.n)
        if size < 1 or size > h.n:
            raise ValueError(f"density {density} gives an empty or full set")
        rng = SplitMix64(spawn(seed, i))
        vals = []
        undefined = 0
        for _ in range(samples):
            a = vertex_mask(rng.sample_indices(h.n, size))
            rep = cut_report(h, a)
            if rep.d_odd is None:
                undefined += 1
            else:
                vals.append(float(rep.d_odd))
        if vals:
            mean = sum(vals) / len(vals)
            var = sum((v - mean) ** 2 for v in vals) / max(1, len(vals) - 1)
            half = 1.96 * (var ** 0.5) / (len(vals) ** 0.5)
        else:
            mean = half = None
        out.append(SampledPoint(float(density), size, samples, undefined, mean, half))
    return out


# ---------------------------------------------------------------------------
# Odd mixing time and the drift-case classifier.


def _admissible_includes_full(h: Hypergraph) -> bool:
    # With only even edges the all-ones state is an absorbing twin of 0, so
    # the full set is excluded from the sup; with an odd edge it is harmless.
    return odd_case(h) is OddCase.ODD_EDGE


def tau_odd(h: Hypergraph, include_full_set: bool | None = None) -> Fraction | Unbounded:
    """sup over admissible cuts of n*k / e_minus, for k-regular h.

    `include_full_set=None` applies the house rule: the full vertex set
    enters the sup only when some edge has odd size.  Unbounded is
    returned when an admissible cut has e_minus = 0.
    """
    degs = degrees(h)
    if len(set(degs)) != 1:
        raise ValueError(f"hypergraph is not regular: degrees span {min(degs)}..{max(degs)}")
    k = degs[0]
    if k < 1:
        raise ValueError("degree must be at least 1")
    if include_full_set is None:
        include_full_set = _admissible_includes_full(h)
    sizes, em, _ = _pair_counts_all_subsets(h)
    sel = sizes > 0
    if not include_full_set:
        sel &= sizes < h.n
    min_em = int(em[sel].min())
    if min_em == 0:
        return UNBOUNDED
    return Fraction(h.n * k, min_em)


class DriftCase(Enum):
    CASE_I = "positive-drift"
    CASE_II = "nonnegative-drift"
    NEGATIVE_WINDOW = "negative-window"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Classification:
    case: DriftCase
    delta_min: Fraction | None = None  # CASE_I: uniform positive lower bound
    tau: Fraction | Unbounded | None = None  # CASE_II: odd mixing time
    eta1: Fraction | None = None  # NEGATIVE_WINDOW: open density window
    eta2: Fraction | None = None
    delta: Fraction | None = None  # uniform negativity margin on the window


def _classify_from_size_extrema(
    n: int,
    mins: dict[int, Fraction | None],
    maxs: dict[int, Fraction | None],
    tau: Fraction | Unbounded | None,
) -> Classification:
    defined_mins = [d for d in mins.values() if d is not None]
    if not defined_mins:
        return Classification(DriftCase.UNCLASSIFIED)
    overall_min = min(defined_mins)
    if overall_min > 0:
        return Classification(DriftCase.CASE_I, delta_min=overall_min)
    if overall_min == 0:
        return Classification(DriftCase.CASE_II, tau=tau)
    # Widest contiguous band of sizes whose drift is uniformly negative.
    neg = [
        size
        for size in range(1, n + 1)
        if maxs.get(size) is not None and maxs[size] < 0
    ]
    if not neg:
        return Classification(DriftCase.UNCLASSIFIED)
    runs: list[tuple[int, int]] = []
    start = prev = neg[0]
    for s in neg[1:]:
        if s == prev + 1:
            prev = s
        else:
            runs.append((start, prev))
            start = prev = s
    runs.append((start, prev))
    lo, hi = max(runs, key=lambda r: r[1] - r[0])
    margin = -max(maxs[s] for s in range(lo, hi + 1))  # type: ignore[arg-type]
    return Classification(
        DriftCase.NEGATIVE_WINDOW,
        eta1=Fraction(2 * lo - 1, 2 * n),
        eta2=Fraction(2 * hi + 1, 2 * n),
        delta=margin,
    )


def classify(h: Hypergraph) -> Classification:
    """Exhaustive drift classification (n <= 24).

    Case I: every nonempty admissible cut has strictly positive drift;
    Case II: nonnegative with zero attained (reports the odd mixing time);
    otherwise the widest uniformly negative density window, if any.
    """
    profile = drift_profile_exact(h)
    mins = {s: p.d_min for s, p in profile.items()}
    maxs = {s: p.d_max for s, p in profile.items()}
    tau = None
    if len(set(degrees(h))) == 1:
        tau = tau_odd(h)
    return _classify_from_size_extrema(h.n, mins, maxs, tau)


def classify_sampled(
    h: Hypergraph,
    samples: int,
    seed: int,
    densities: Iterable[float] | None = None,
) -> Classification:
    """Monte Carlo stand-in for classify() beyond the enumeration guard.

    Emits a definite case only when the sampled evidence is one-sided
    with its confidence margin: every density point positive (case I) or
    a contiguous run of points negative (window).  Anything else is
    Unclassified - sampling cannot certify that zero drift is attained.
    """
    if densities is None:
        densities = [i / 10 for i in range(1, 10) if int(i / 10 * h.n) >= 1]
    densities = list(densities)
    if not densities:
        return Classification(DriftCase.UNCLASSIFIED)
    pts = drift_profile_sampled(h, densities, samples, seed)
    usable = [p for p in pts if p.mean is not None]
    if len(usable) != len(pts):
        return Classification(DriftCase.UNCLASSIFIED)
    if all(p.mean - (p.half_width or 0.0) > 0 for p in usable):
        worst = min(p.mean - (p.half_width or 0.0) for p in usable)
        return Classification(DriftCase.CASE_I, delta_min=Fraction(worst).limit_denominator(10**6))
    neg = [p.mean + (p.half_width or 0.0) < 0 for p in usable]
    runs: list[tuple[int, int]] = []
    start = None
    for i, flag in enumerate(neg):
        if flag and start is None:
            start = i
        if not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(neg) - 1))
    if runs:
        lo, hi = max(runs, key=lambda r: r[1] - r[0])
        margin = min(-(usable[i].mean + (usable[i].half_width or 0.0)) for i in range(lo, hi + 1))
        return Classification(
            DriftCase.NEGATIVE_WINDOW,
            eta1=Fraction(usable[lo].density).limit_denominator(1000),
            eta2=Fraction(usable[hi].density).limit_denominator(1000),
            delta=Fraction(margin).limit_denominator(10**6),
        )
    return Classification(DriftCase.UNCLASSIFIED)


def classify_complete(n: int, k: int) -> Classification:
    """Closed-form classification of the complete k-uniform hypergraph."""
    prof = complete_profile(n, k)
    tau: Fraction | Unbounded | None
    degree = comb(n - 1, k - 1)
    min_em = None
    for size in range(1, n + 1):
        if k % 2 == 0 and size == n:
            continue
        em, _ = complete_pair_counts(n, k, size)
        if min_em is None or em < min_em:
            min_em = em
    tau = UNBOUNDED if min_em == 0 else Fraction(n * degree, min_em)
    return _classify_from_size_extrema(n, dict(prof), dict(prof), tau)
