"""
Natural density of coalitions

alpha_n(a) = |a ∩ [0, n]| / n, counted on the closed interval and divided
by n, so a full set has alpha_n = (n + 1) / n.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from silverlab.seqcore import CoalitionDescriptor, PartialAssignment

log = logging.getLogger(__name__)


def alpha(a: CoalitionDescriptor, n: int) -> Fraction:
    if n < 1:
        raise ValueError(f"alpha_n needs n >= 1, got {n}")
    return Fraction(a.count_upto(n), n)


def _check_horizons(horizons: Sequence[int]) -> List[int]:
    horizons = [int(h) for h in horizons]
    if not horizons:
        raise ValueError("horizons must be nonempty")
    if horizons[0] < 1 or any(b <= a for a, b in zip(horizons, horizons[1:])):
        msg = f"horizons must be positive and strictly increasing, got {horizons}"
        raise ValueError(msg)
    return horizons


@dataclass(frozen=True)
class DensityProfile:
    """
    Sampled alpha_n values of a coalition

    Attributes
    ----------
    subject: CoalitionDescriptor
        The coalition being measured
    samples: Tuple[Tuple[int, Fraction], ...]
        (n, alpha_n) pairs in increasing n
    exact_density: Optional[Fraction]
        Limit of alpha_n when the descriptor's structure determines it
    """

    subject: CoalitionDescriptor
    samples: Tuple[Tuple[int, Fraction], ...]
    exact_density: Optional[Fraction]

    def error_bound(self, n: int) -> Optional[Fraction]:
        """
        Bound on |alpha_n - exact_density|

        The periodic skeleton S differs from the subject only on geometric
        orbits. |S ∩ [0, n]| is within prefix + period of d(n + 1), each
        orbit {c r^k} has at most log_r(n / c) + 1 points up to n, and
        d(n + 1) / n is within 1 / n of d.
        """
        if self.exact_density is None:
            return None
        skel = self.subject.skeleton()
        slack = len(skel.prefix) + len(skel.period) + 1
        for g in self.subject._geometric_atoms():
            if n >= g.coef:
                slack += int(math.log(n / g.coef, g.ratio)) + 2
        return Fraction(slack, n)


def profile(a: CoalitionDescriptor, horizons: Sequence[int]) -> DensityProfile:
    horizons = _check_horizons(horizons)
    samples = tuple((n, alpha(a, n)) for n in horizons)
    return DensityProfile(a, samples, a.density())


@dataclass(frozen=True)
class DensityBounds:
    """
    Estimates of upper and lower density

    `upper` and `lower` are the max and min of alpha_n over the tail window,
    the last half (rounded up) of the sampled horizons. `exact` is set only
    when the descriptor's structure determines the density.
    """

    upper: Fraction
    lower: Fraction
    exact: Optional[Fraction]
    window: Tuple[int, ...]

    def __str__(self) -> str:
        exact = "unknown" if self.exact is None else str(self.exact)
        win = ",".join(str(n) for n in self.window)
        return f"upper~{self.upper} lower~{self.lower} exact={exact} window=[{win}]"


def density_bounds(a: CoalitionDescriptor, horizons: Sequence[int]) -> DensityBounds:
    prof = profile(a, horizons)
    tail = prof.samples[len(prof.samples) // 2 :]
    values = [v for _, v in tail]
    return DensityBounds(
        max(values), min(values), prof.exact_density, tuple(n for n, _ in tail)
    )


def find_triples(a: CoalitionDescriptor, horizon: int) -> List[int]:
    """Every h with {h, h+1, h+2} ⊆ a and h + 2 <= horizon, increasing"""
    if horizon < 3:
        raise ValueError(f"triple scans need horizon >= 3, got {horizon}")
    m = a.mask(horizon + 1)
    hits = m[:-2] & m[1:-1] & m[2:]
    out = [int(h) for h in np.flatnonzero(hits)]
    log.debug("found %d triples below %d in %s", len(out), horizon, a)
    return out


def disjoint_triples(triples: Sequence[int]) -> List[int]:
    """Greedy left-to-right choice of pairwise disjoint triples"""
    out: List[int] = []
    for h in triples:
        if not out or h > out[-1] + 2:
            out.append(h)
    return out


def upper_density(a: CoalitionDescriptor) -> Optional[Fraction]:
    """Exact upper density when the structure determines it"""
    return a.density()


def in_D_delta(b: CoalitionDescriptor, delta: Fraction) -> bool:
    """b belongs to the ideal D_delta: upper density at most delta"""
    d = _require_density(b)
    return d <= Fraction(delta)


def is_upper_dense(a: CoalitionDescriptor, delta: Fraction) -> bool:
    """Upper density at least delta"""
    d = _require_density(a)
    return d >= Fraction(delta)


def upper_dense(f: PartialAssignment, delta: Fraction) -> bool:
    """f is a delta-dense Silver condition: infinite free set of upper density >= delta"""
    return f.is_silver and is_upper_dense(f.free, delta)


def _require_density(a: CoalitionDescriptor) -> Fraction:
    d = a.density()
    if d is None:
        msg = f"density of {a} is not determined within the period cap"
        raise ValueError(msg)
    return d


def density_table(a: CoalitionDescriptor, horizons: Sequence[int]) -> pd.DataFrame:
    """One row per horizon: n, alpha (exact fraction text) and its float value"""
    prof = profile(a, horizons)
    rows = []
    for n, value in prof.samples:
        bound = prof.error_bound(n)
        rows.append(
            {
                "n": n,
                "alpha": str(value),
                "alpha_float": float(value),
                "exact": "" if prof.exact_density is None else str(prof.exact_density),
                "error_bound": "" if bound is None else str(bound),
                "within_bound": True
                if bound is None
                else abs(value - prof.exact_density) <= bound,
            }
        )
    return pd.DataFrame(rows)


def triples_needed(period: int, horizon: int) -> int:
    """Lower count promised for periodic sets with ones-fraction at least 3/4"""
    return horizon // (3 * period)

