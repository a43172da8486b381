"""
Finitely supported social choice functions and irrelevant coalitions

A coalition b is (F, f)-irrelevant when f fixes everybody outside b and F
is constant on N_f. Because F only reads its finite support S, the decision
brute-forces the K^|b ∩ S| ways the coalition can vote on S, in
lexicographic order, so the first witness found never depends on how the
search is split up.
"""
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from silverlab.config import get_settings
from silverlab.exceptions import (
    AlphabetMismatchError,
    CapExceededError,
    VacuousRestrictionError,
)
from silverlab.seqcore import (
    CoalitionDescriptor,
    Complement,
    Cylinder,
    EventuallyPeriodicSeq,
    Finite,
    PartialAssignment,
)

log = logging.getLogger(__name__)


class ChoiceFunction(ABC):
    """F: K^N -> K depending only on the coordinates in `support`"""

    alphabet: int

    @property
    @abstractmethod
    def support(self) -> Tuple[int, ...]:
        pass

    @abstractmethod
    def decide(self, values: Sequence[int]) -> int:
        """Outcome given the votes of `support`, in support order"""

    @abstractmethod
    def to_text(self) -> str:
        pass

    def eval(self, x: EventuallyPeriodicSeq) -> int:
        if x.alphabet != self.alphabet:
            raise AlphabetMismatchError(x.alphabet, self.alphabet)
        return self.decide(tuple(x[s] for s in self.support))

    def __str__(self) -> str:
        return self.to_text()


def evaluate(F: ChoiceFunction, x: EventuallyPeriodicSeq) -> int:
    return F.eval(x)


def _support(coords: Iterable[int]) -> Tuple[int, ...]:
    out = tuple(sorted({int(c) for c in coords}))
    if any(c < 0 for c in out):
        raise ValueError("support coordinates are natural numbers")
    return out


def _range_text(support: Sequence[int]) -> str:
    if support and list(support) == list(range(support[0], support[-1] + 1)) and len(support) > 2:
        return f"{support[0]}..{support[-1]}"
    return ",".join(str(s) for s in support)


@dataclass(frozen=True)
class Dictator(ChoiceFunction):
    coordinate: int
    alphabet: int = 2

    @property
    def support(self):
        return (self.coordinate,)

    def decide(self, values):
        return values[0]

    def to_text(self):
        if self.alphabet == 2:
            return f"dictator({self.coordinate})"
        return f"dictator({self.coordinate}, K={self.alphabet})"


@dataclass(frozen=True)
class Parity(ChoiceFunction):
    coords: Tuple[int, ...]
    alphabet: int = 2

    def __post_init__(self):
        object.__setattr__(self, "coords", _support(self.coords))
        if self.alphabet != 2:
            raise ValueError("parity is defined over a binary alphabet")

    @property
    def support(self):
        return self.coords

    def decide(self, values):
        return sum(values) % 2

    def to_text(self):
        return "parity{" + _range_text(self.coords) + "}"


@dataclass(frozen=True)
class Majority(ChoiceFunction):
    """Value held by more than half of the support, else `tie`"""

    coords: Tuple[int, ...]
    tie: int = 0
    alphabet: int = 2

    def __post_init__(self):
        object.__setattr__(self, "coords", _support(self.coords))
        if not 0 <= self.tie < self.alphabet:
            raise ValueError(f"tie value {self.tie} outside alphabet {self.alphabet}")

    @property
    def support(self):
        return self.coords

    def decide(self, values):
        for v in range(self.alphabet):
            if 2 * sum(1 for w in values if w == v) > len(values):
                return v
        return self.tie

    def to_text(self):
        extra = "" if self.alphabet == 2 else f", K={self.alphabet}"
        return "majority{" + _range_text(self.coords) + f"; tie={self.tie}{extra}" + "}"


@dataclass(frozen=True)
class TruthTable(ChoiceFunction):
    """
    Explicit table with K^|S| digits

    Entry index is the votes on the support read as a base-K numeral, the
    first support coordinate being the most significant digit.
    """

    alphabet: int
    coords: Tuple[int, ...]
    table: str

    def __post_init__(self):
        object.__setattr__(self, "coords", _support(self.coords))
        need = self.alphabet ** len(self.coords)
        if len(self.table) != need:
            msg = f"truth table needs {need} entries, got {len(self.table)}"
            raise ValueError(msg)
        if any(not c.isdigit() or int(c) >= self.alphabet for c in self.table):
            raise ValueError(f"truth table entries must be digits below {self.alphabet}")

    @property
    def support(self):
        return self.coords

    def decide(self, values):
        index = 0
        for v in values:
            index = index * self.alphabet + v
        return int(self.table[index])

    def to_text(self):
        support = ",".join(str(s) for s in self.coords)
        return f'table(K={self.alphabet}, support{{{support}}}, "{self.table}")'


@dataclass(frozen=True)
class Constant(ChoiceFunction):
    value: int
    alphabet: int = 2

    def __post_init__(self):
        if not 0 <= self.value < self.alphabet:
            raise ValueError(f"constant {self.value} outside alphabet {self.alphabet}")

    @property
    def support(self):
        return ()

    def decide(self, values):
        return self.value

    def to_text(self):
        if self.alphabet == 2:
            return f"const({self.value})"
        return f"const({self.value}, K={self.alphabet})"


# ---------------------------------------------------------------------------
# Irrelevance
# ---------------------------------------------------------------------------


def check_cap(alphabet: int, free_count: int) -> None:
    cap = get_settings().brute_force_cap
    evaluations = alphabet ** free_count
    if evaluations > 2 ** cap:
        raise CapExceededError("brute-force completions", evaluations, 2 ** cap)


@dataclass(frozen=True)
class IrrelevanceVerdict:
    """
    Attributes
    ----------
    irrelevant: bool
        F is constant on the searched set
    value: Optional[int]
        The constant value when irrelevant
    witness: Optional[Tuple[EventuallyPeriodicSeq, EventuallyPeriodicSeq]]
        Two points with different outcomes when relevant
    searched: int
        Completions evaluated
    on_open_set: bool
        The search was restricted to N_f ∩ B
    """

    irrelevant: bool
    value: Optional[int] = None
    witness: Optional[Tuple[EventuallyPeriodicSeq, EventuallyPeriodicSeq]] = None
    searched: int = 0
    on_open_set: bool = False

    def __str__(self) -> str:
        if self.irrelevant:
            suffix = "-on-B" if self.on_open_set else ""
            return f"irrelevant{suffix}({self.value})"
        y, z = self.witness
        return f"relevant: y={y} z={z}"


def _ensure_domain(F: ChoiceFunction, b: CoalitionDescriptor, f: PartialAssignment):
    if F.alphabet != f.alphabet:
        raise AlphabetMismatchError(F.alphabet, f.alphabet)
    for s in F.support:
        if (s in b) != f.is_free(s):
            msg = f"f must leave exactly b free; coordinate {s} disagrees"
            raise ValueError(msg)


def is_irrelevant(
    F: ChoiceFunction, b: CoalitionDescriptor, f: PartialAssignment
) -> IrrelevanceVerdict:
    """Decide whether F is constant on N_f, where f fixes everybody outside b"""
    _ensure_domain(F, b, f)
    support = F.support
    open_coords = [s for s in support if s in b]
    check_cap(F.alphabet, len(open_coords))
    base = {s: f.value(s) for s in support if s not in b}
    cover = (max(support) + 1) if support else 0

    first_value, first_fill, searched = None, None, 0
    for votes in itertools.product(range(F.alphabet), repeat=len(open_coords)):
        fill = dict(zip(open_coords, votes))
        value = F.decide(tuple(fill[s] if s in fill else base[s] for s in support))
        searched += 1
        if first_fill is None:
            first_value, first_fill = value, fill
        elif value != first_value:
            y = f.completion(first_fill, cover=cover)
            z = f.completion(fill, cover=cover)
            log.debug("coalition %s is relevant after %d completions", b, searched)
            return IrrelevanceVerdict(False, witness=(y, z), searched=searched)
    return IrrelevanceVerdict(True, value=first_value, searched=searched)


@dataclass(frozen=True)
class OpenSetApprox:
    """
    Finite union of basic clopen cylinders, read up to `depth`

    Every cylinder fixes finitely many coordinates, all below `depth`.
    """

    cylinders: Tuple[Cylinder, ...]
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "cylinders", tuple(self.cylinders))
        if not self.cylinders:
            raise ValueError("an open set approximation needs at least one cylinder")
        for c in self.cylinders:
            extent = Complement(c.assignment.free).finite_extent()
            if extent is None or extent > self.depth:
                msg = f"cylinder {c.assignment} fixes coordinates at or beyond depth {self.depth}"
                raise ValueError(msg)

    @classmethod
    def whole(cls, alphabet: int = 2) -> "OpenSetApprox":
        return cls((Cylinder(PartialAssignment.empty(alphabet)),), 1)

    @property
    def alphabet(self) -> int:
        return self.cylinders[0].alphabet

    def constraints(self) -> List[Dict[int, int]]:
        return [
            {
                n: v
                for n, v in enumerate(c.assignment.pattern(self.depth))
                if v is not None
            }
            for c in self.cylinders
        ]

    def contains(self, x: EventuallyPeriodicSeq) -> bool:
        return any(c.member(x, self.depth).agrees for c in self.cylinders)


def h_almost_irrelevant(
    F: ChoiceFunction,
    b: CoalitionDescriptor,
    f: PartialAssignment,
    B: OpenSetApprox,
) -> IrrelevanceVerdict:
    """Decide whether F is constant on N_f ∩ B at the depth of B"""
    _ensure_domain(F, b, f)
    if B.alphabet != F.alphabet:
        raise AlphabetMismatchError(B.alphabet, F.alphabet)
    support = F.support
    constraints = B.constraints()
    touched = set(support)
    for con in constraints:
        touched.update(con)
    open_coords = sorted(n for n in touched if f.is_free(n))
    check_cap(F.alphabet, len(open_coords))
    cover = max(touched) + 1 if touched else 0

    def at(fill, n):
        return fill[n] if n in fill else f.value(n)

    first_value, first_fill, searched = None, None, 0
    for votes in itertools.product(range(F.alphabet), repeat=len(open_coords)):
        fill = dict(zip(open_coords, votes))
        if not any(all(at(fill, n) == v for n, v in con.items()) for con in constraints):
            continue
        value = F.decide(tuple(at(fill, s) for s in support))
        searched += 1
        if first_fill is None:
            first_value, first_fill = value, fill
        elif value != first_value:
            y = f.completion(first_fill, cover=cover)
            z = f.completion(fill, cover=cover)
            return IrrelevanceVerdict(
                False, witness=(y, z), searched=searched, on_open_set=True
            )
    if first_fill is None:
        raise VacuousRestrictionError(f"N_f ∩ B is empty below depth {B.depth}")
    return IrrelevanceVerdict(True, value=first_value, searched=searched, on_open_set=True)


# ---------------------------------------------------------------------------
# Families of large coalitions and anti-democracy
# ---------------------------------------------------------------------------


class CoalitionFamily(ABC):
    """A family of coalitions counted as "not small\""""

    @abstractmethod
    def contains(self, b: CoalitionDescriptor) -> bool:
        pass

    @abstractmethod
    def to_text(self) -> str:
        pass

    def candidates(self, F: ChoiceFunction) -> Iterator[CoalitionDescriptor]:
        """Coalitions worth trying after the canonical witness"""
        return iter(())

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class FinPlus(CoalitionFamily):
    """Infinite coalitions"""

    def contains(self, b):
        return not b.is_finite()

    def to_text(self):
        return "finplus"


@dataclass(frozen=True)
class DensityPlus(CoalitionFamily):
    """
    Coalitions outside D_delta: upper density above delta

    Nothing has upper density above 1, so for delta = 1 the family is read
    as the coalitions of upper density exactly 1.
    """

    delta: Fraction

    def __post_init__(self):
        delta = Fraction(self.delta)
        if not 0 <= delta <= 1:
            raise ValueError(f"delta must lie in [0, 1], got {delta}")
        object.__setattr__(self, "delta", delta)

    def contains(self, b):
        d = b.density()
        if d is None:
            return False
        if self.delta == 1:
            return d == 1
        return d > self.delta

    def to_text(self):
        return f"Dplus({self.delta})"


@dataclass(frozen=True)
class IStar(CoalitionFamily):
    """Dual filter of an ideal: coalitions whose complement is in the ideal"""

    ideal: str

    def __post_init__(self):
        if self.ideal not in ("singletons", "fin"):
            raise ValueError(f"ideal must be 'singletons' or 'fin', got {self.ideal!r}")

    def contains(self, b):
        rest = Complement(b)
        extent = rest.finite_extent()
        if extent is None:
            return False
        if self.ideal == "fin":
            return True
        return len(rest.members_below(extent)) <= 1

    def candidates(self, F):
        if self.ideal != "singletons":
            return
        outside = (max(F.support) + 1) if F.support else 0
        for i in list(F.support) + [outside]:
            yield Complement(Finite({i}))

    def to_text(self):
        return f"istar({self.ideal})"


@dataclass(frozen=True)
class AntiDemocracyVerdict:
    found: bool
    family: CoalitionFamily
    coalition: Optional[CoalitionDescriptor] = None
    assignment: Optional[PartialAssignment] = None
    verdict: Optional[IrrelevanceVerdict] = None
    tried: int = 0

    def __str__(self) -> str:
        if self.found:
            return f"yes: b = {self.coalition} (value {self.verdict.value})"
        return f"no-within-search-space ({self.tried} coalitions tried)"


def canonical_witness(F: ChoiceFunction) -> Tuple[CoalitionDescriptor, PartialAssignment]:
    """b = N minus the support, f = 0 on the support"""
    b = Complement(Finite(F.support))
    f = PartialAssignment(F.alphabet, b, tuple((s, 0) for s in F.support))
    return b, f


def _assignments_for(
    F: ChoiceFunction, b: CoalitionDescriptor
) -> Iterator[PartialAssignment]:
    outside = [s for s in F.support if s not in b]
    check_cap(F.alphabet, len(outside))
    for votes in itertools.product(range(F.alphabet), repeat=len(outside)):
        yield PartialAssignment(F.alphabet, b, tuple(zip(outside, votes)))


def is_anti_democratic(
    F: ChoiceFunction,
    family: CoalitionFamily,
    candidates: Sequence[CoalitionDescriptor] = (),
    canonical: bool = True,
) -> AntiDemocracyVerdict:
    """
    Look for a coalition in `family` that is irrelevant for F

    The canonical cofinite witness is tried first, then the family's own
    candidates, then `candidates` in the given order.
    """
    tried = 0
    if canonical:
        b, f = canonical_witness(F)
        tried += 1
        if family.contains(b):
            verdict = is_irrelevant(F, b, f)
            if verdict.irrelevant:
                return AntiDemocracyVerdict(True, family, b, f, verdict, tried)
    for b in itertools.chain(family.candidates(F), candidates):
        tried += 1
        if not family.contains(b):
            continue
        for f in _assignments_for(F, b):
            verdict = is_irrelevant(F, b, f)
            if verdict.irrelevant:
                return AntiDemocracyVerdict(True, family, b, f, verdict, tried)
    return AntiDemocracyVerdict(False, family, tried=tried)


def h_almost_anti_democratic(
    F: ChoiceFunction, family: CoalitionFamily, B: OpenSetApprox
) -> AntiDemocracyVerdict:
    """Canonical coalition, with the first vote on the support that is irrelevant on B"""
    b = Complement(Finite(F.support))
    if not family.contains(b):
        return AntiDemocracyVerdict(False, family, tried=1)
    for f in _assignments_for(F, b):
        try:
            verdict = h_almost_irrelevant(F, b, f, B)
        except VacuousRestrictionError:
            continue
        if verdict.irrelevant:
            return AntiDemocracyVerdict(True, family, b, f, verdict, 1)
    return AntiDemocracyVerdict(False, family, tried=1)


def has_silver_property(
    F: ChoiceFunction, c: Cylinder
) -> Tuple[Cylinder, int]:
    """Subcylinder N_g ≤ N_f on which F is constant, fixing only support coordinates"""
    f = c.assignment
    g = f.fix({s: 0 for s in F.support if f.is_free(s)})
    value = F.decide(tuple(g.value(s) for s in F.support))
    return Cylinder(g), value
