"""
Choice functions built from o(x) and e(x), and witnesses against anti-democracy

For a binary selector x with U(x) = {n : x(n) = 1} enumerated as n_0 < n_1 < ...,
the blocks I_k = [2n_k, 2n_{k+1}) (or [n_k, n_{k+1}) when unpaired) split
into E(x) (even k) and O(x) (odd k). The initial block [0, 2n_0) (or
[0, n_0)) belongs to neither. o(x) and e(x) paint these blocks with
utility levels. `case_witness` produces, for a dense Silver condition
N_f, points of N_f together with derivations certifying that the set
{x : e(x) < o(x)} splits N_f.
"""
import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from silverlab.config import get_settings
from silverlab.density import _require_density, disjoint_triples, find_triples
from silverlab.exceptions import InsufficientTriplesError, VerificationError
from silverlab.seqcore import (
    Cylinder,
    EventuallyPeriodicSeq,
    MemberResult,
    PartialAssignment,
    Periodic,
    cylinder_member,
)
from silverlab.swr.derivations import (
    Derivation,
    DerivationCheck,
    DerivationStep,
    FinitePermutation,
    UtilityStream,
    check_derivation,
)

log = logging.getLogger(__name__)

CASES = ("eo", "oe", "sim")
VARIANTS = ("sefa", "pfa")
LABELS = {"sefa": "abcd", "pfa": "01"}
A, B, C, D = range(4)


def _bits(mask: Sequence[bool]) -> str:
    return "".join("1" if v else "0" for v in mask)


@dataclass(frozen=True)
class Decomposition:
    """
    Attributes
    ----------
    ones: Periodic
        U(x)
    paired: bool
        Blocks are [2n_k, 2n_{k+1}) when True, [n_k, n_{k+1}) otherwise
    even, odd: Periodic
        E(x) and O(x)
    start, period: int
        Block labels repeat with `period` from coordinate `start` on
    """

    ones: Periodic
    paired: bool
    even: Periodic
    odd: Periodic
    start: int
    period: int

    @property
    def scale(self) -> int:
        return 2 if self.paired else 1

    def nth(self, k: int) -> int:
        return self.ones.nth_member(k)

    def block(self, k: int) -> Tuple[int, int]:
        return self.scale * self.nth(k), self.scale * self.nth(k + 1)

    @property
    def initial_end(self) -> int:
        return self.scale * self.nth(0)

    def block_index(self, n: int) -> Optional[int]:
        """k with n in I_k, None on the initial block"""
        if n < self.initial_end:
            return None
        return self.ones.count_upto(n // self.scale) - 1


def decompose(x: EventuallyPeriodicSeq, paired: bool = True) -> Decomposition:
    if x.alphabet != 2:
        raise ValueError(f"selectors are binary, got alphabet {x.alphabet}")
    x = x.canonical()
    if 1 not in x.period:
        msg = f"U(x) is finite for x = {x}"
        raise ValueError(msg)
    scale = 2 if paired else 1
    ones = Periodic(_bits(v == 1 for v in x.period), _bits(v == 1 for v in x.prefix))

    # n_{k + r'} = n_k + M once n_k is past the prefix, with r' even
    r = x.period.count(1)
    M = len(x.period) if r % 2 == 0 else 2 * len(x.period)
    k_star = x.prefix.count(1)
    count = k_star + (r if r % 2 == 0 else 2 * r) + 2
    ns = [scale * n for n in _first_members(ones, count)]
    start = ns[k_star]
    end = start + scale * M

    even_mask, odd_mask = [], []
    for m in range(end):
        k = bisect.bisect_right(ns, m) - 1
        even_mask.append(k >= 0 and k % 2 == 0)
        odd_mask.append(k >= 0 and k % 2 == 1)
    even = Periodic(_bits(even_mask[start:]), _bits(even_mask[:start])).normalize()
    odd = Periodic(_bits(odd_mask[start:]), _bits(odd_mask[:start])).normalize()
    return Decomposition(ones, paired, even, odd, start, scale * M)


def _first_members(a: Periodic, count: int) -> List[int]:
    out = []
    for n in a.iter_members():
        out.append(n)
        if len(out) == count:
            break
    return out


def _level(kind: str, variant: str, region: str, n: int) -> int:
    """Utility level of o(x) or e(x) at n given the block type of n"""
    if variant == "pfa":
        if region == "init":
            return 0
        high = "E" if kind == "o" else "O"
        return 1 if region == high else 0
    outer = A if n % 2 == 0 else D
    inner = B if n % 2 == 0 else C
    if region == "init":
        return outer
    inner_region = "E" if kind == "o" else "O"
    return inner if region == inner_region else outer


def oe_maps(
    x: EventuallyPeriodicSeq, variant: str = "sefa"
) -> Tuple[UtilityStream, UtilityStream]:
    """(o(x), e(x)); SE+FA paints a<b<c<d on paired blocks, P+FA paints 0<1 on unit blocks"""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    dec = decompose(x, paired=variant == "sefa")
    labels = LABELS[variant]
    length = dec.start + dec.period

    def region(n):
        if n in dec.even:
            return "E"
        if n in dec.odd:
            return "O"
        return "init"

    regions = [region(n) for n in range(length)]
    out = []
    for kind in ("o", "e"):
        values = [_level(kind, variant, regions[n], n) for n in range(length)]
        seq = EventuallyPeriodicSeq(
            tuple(values[: dec.start]), tuple(values[dec.start :]), len(labels)
        )
        out.append(UtilityStream(seq.canonical(), labels))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Bridging two streams with FA, SE and P steps
# ---------------------------------------------------------------------------


def _units(source: UtilityStream, target: UtilityStream, variant: str):
    """Difference units split into (good, bad); a unit is (2i, 2i+1) for SE, one coordinate for P"""
    window = source.seq.window(target.seq)
    diffs = [n for n in range(window) if source[n] != target[n]]
    good, bad = [], []
    if variant == "pfa":
        for n in diffs:
            (good if source[n] < target[n] else bad).append(n)
        return good, bad
    for u in sorted({n - n % 2 for n in diffs}):
        s = (source[u], source[u + 1])
        t = (target[u], target[u + 1])
        if s == (A, D) and t == (B, C):
            good.append(u)
        elif s == (B, C) and t == (A, D):
            bad.append(u)
        else:
            msg = f"unexpected difference at {u}: {s} against {t}"
            raise VerificationError(msg)
    return good, bad


def bridge(
    source: UtilityStream,
    target: UtilityStream,
    variant: str,
    partners: Sequence[int] = (),
    use_fa: bool = True,
) -> Tuple[Derivation, FinitePermutation]:
    """
    Derivation source < target

    Every bad unit is swapped by an FA step with a good unit, preferring
    those starting in `partners`. The good units left are then closed one
    SE step each (SE+FA) or in a single P step (P+FA).
    """
    good, bad = _units(source, target, variant)
    if len(bad) >= len(good):
        msg = f"{len(bad)} reversed units but only {len(good)} improving units"
        raise VerificationError(msg)
    if bad and not use_fa:
        raise VerificationError(f"reversed units {bad} need an FA step")

    preferred = set(partners)
    pool = [u for u in good if u in preferred] + [u for u in good if u not in preferred]
    swaps: List[Tuple[int, int]] = []
    for u in bad:
        p = pool.pop(0)
        swaps.append((u, p))
        if variant == "sefa":
            swaps.append((u + 1, p + 1))
    perm = FinitePermutation.transpositions(swaps)
    rest = sorted(pool)

    steps: List[DerivationStep] = []
    current = source
    if use_fa:
        image = perm.apply(current)
        steps.append(DerivationStep("FA", current, image, "~", perm=perm))
        current = image
    if variant == "sefa":
        for idx, u in enumerate(rest):
            nxt = target if idx == len(rest) - 1 else current.with_values(
                {u: target[u], u + 1: target[u + 1]}
            )
            steps.append(DerivationStep("SE", current, nxt, "<", i=u, j=u + 1))
            current = nxt
    else:
        steps.append(DerivationStep("P", current, target, "<"))
    return Derivation(tuple(steps), "<"), perm


# ---------------------------------------------------------------------------
# Case witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessBundle:
    """
    Attributes
    ----------
    case: str
        Assumed relation between e(x) and o(x): "eo" (e < o), "oe" (o < e)
        or "sim" (e ~ o)
    variant: str
        "sefa" or "pfa"
    x, y, z: EventuallyPeriodicSeq
        Base point and the points obtained by dropping coordinates; y is
        None in no case, z only exists for "eo" and "oe"
    dropped: Tuple[int, ...]
        Coordinates set from 1 to 0, in order of dropping
    derivations: Tuple[Tuple[str, Derivation, DerivationCheck], ...]
        Label such as "o(z) < e(x)", the chain, and its check
    membership: Tuple[Tuple[str, MemberResult], ...]
        Each point checked against N_f
    """

    case: str
    variant: str
    delta: Fraction
    x: EventuallyPeriodicSeq
    y: EventuallyPeriodicSeq
    z: Optional[EventuallyPeriodicSeq]
    dropped: Tuple[int, ...]
    triples: Tuple[int, ...]
    derivations: Tuple[Tuple[str, Derivation, DerivationCheck], ...]
    membership: Tuple[Tuple[str, MemberResult], ...]

    @property
    def ok(self) -> bool:
        return all(c.valid for _, _, c in self.derivations) and all(
            m.agrees for _, m in self.membership
        )

    @property
    def points(self) -> Dict[str, EventuallyPeriodicSeq]:
        out = {"x": self.x, "y": self.y}
        if self.z is not None:
            out["z"] = self.z
        return out

    @property
    def conclusion(self) -> str:
        if self.case == "sim":
            return "e(y) < e(x) ~ o(x) < o(y), so y is in F while x is not"
        if self.case == "eo":
            return "o(z) < e(z), so z leaves F while x is in F"
        return "e(z) < o(z), so z is in F while x is not"


def _checked(label: str, d: Derivation) -> Tuple[str, Derivation, DerivationCheck]:
    result = check_derivation(d)
    if not result:
        raise VerificationError(f"{label}: {result}")
    return label, d, result


def _block_measure(ones: Periodic, l: int, parity: int, scale: int) -> int:
    """|E(l)| (parity 0) or |O(l)| (parity 1): blocks I_k with k < l of that parity"""
    ns = _first_members(ones, l + 1)
    return sum(scale * (ns[k + 1] - ns[k]) for k in range(l) if k % 2 == parity)


def _pairs_needed(measure: int, variant: str) -> int:
    if variant == "sefa":
        return measure // 2 + 2  # least J with 2J > measure + 2
    return measure + 1


def case_witness(
    f: PartialAssignment,
    delta: Fraction,
    case: str,
    variant: str = "sefa",
    horizon: Optional[int] = None,
) -> WitnessBundle:
    """
    Points of N_f on both sides of F = {x : e(x) < o(x)}

    x is f with every free coordinate set to 1. Consecutive free triples
    {h, h+1, h+2} supply the coordinates to drop: in case "sim" one pair
    n_j, n_j + 1 with j odd gives y; in cases "eo" and "oe" one n_l from
    the first triple gives y and J further pairs give z.
    """
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}, got {case!r}")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    delta = Fraction(delta)
    if delta <= Fraction(2, 3) or delta > 1:
        raise ValueError(f"delta must lie in (2/3, 1], got {delta}")
    if f.alphabet != 2:
        raise ValueError("case witnesses need a binary condition")
    if not f.free.is_eventually_periodic():
        raise ValueError(f"free set {f.free} is not eventually periodic")
    d = _require_density(f.free)
    if d < delta:
        raise ValueError(f"free set has upper density {d} below {delta}")

    horizon = horizon or get_settings().triple_horizon
    triples = disjoint_triples(find_triples(f.free, horizon))
    x = f.completion({}, default=1)
    ones = Periodic(
        _bits(v == 1 for v in x.period), _bits(v == 1 for v in x.prefix)
    )

    def index(n):
        return ones.count_upto(n) - 1

    def pair_from(h, parity):
        return h if index(h) % 2 == parity else h + 1

    scale = 2 if variant == "sefa" else 1
    o_x, e_x = oe_maps(x, variant)
    log.info("case %s/%s: %d disjoint triples below %d", case, variant, len(triples), horizon)

    if case == "sim":
        if not triples:
            raise InsufficientTriplesError(1, 0, horizon)
        h = pair_from(triples[0], 1)
        dropped = (h, h + 1)
        y = x.with_values({h: 0, h + 1: 0}).canonical()
        o_y, e_y = oe_maps(y, variant)
        derivations = (
            _checked("o(x) < o(y)", bridge(o_x, o_y, variant, use_fa=False)[0]),
            _checked("e(y) < e(x)", bridge(e_y, e_x, variant, use_fa=False)[0]),
        )
        z = None
    else:
        if not triples:
            raise InsufficientTriplesError(1, 0, horizon)
        h0 = triples[0]
        k0 = index(h0)
        want = 0 if case == "eo" else 1
        l = next(k for k in range(k0, k0 + 3) if k % 2 == want and k >= 1)
        n_l = h0 + (l - k0)
        measure = _block_measure(ones, l, want, scale)
        J = _pairs_needed(measure, variant)
        later = triples[1:]
        if len(later) < J:
            raise InsufficientTriplesError(J + 1, len(triples), horizon)
        pair_parity = 1 if case == "eo" else 0
        starts = [pair_from(h, pair_parity) for h in later[:J]]
        dropped = (n_l,) + tuple(c for s in starts for c in (s, s + 1))
        y = x.with_values({n_l: 0}).canonical()
        z = x.with_values({c: 0 for c in dropped}).canonical()
        o_z, e_z = oe_maps(z, variant)
        partners = [scale * s for s in starts]
        if case == "eo":
            derivations = (
                _checked("o(z) < e(x)", bridge(o_z, e_x, variant, partners)[0]),
                _checked("o(x) < e(z)", bridge(o_x, e_z, variant, partners)[0]),
            )
        else:
            derivations = (
                _checked("e(x) < o(z)", bridge(e_x, o_z, variant, partners)[0]),
                _checked("e(z) < o(x)", bridge(e_z, o_x, variant, partners)[0]),
            )
        log.debug("dropped n_l=%d and %d pairs (|block|=%d)", n_l, J, measure)

    cyl = Cylinder(f)
    membership = []
    for name, pt in (("x", x), ("y", y), ("z", z)):
        if pt is None:
            continue
        depth = max(pt.window(x), max(dropped) + 1)
        membership.append((name, cylinder_member(pt, cyl, depth)))
    return WitnessBundle(
        case,
        variant,
        delta,
        x,
        y,
        z,
        dropped,
        tuple(triples),
        derivations,
        tuple(membership),
    )
