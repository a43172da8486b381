"""
Sequences, coalitions, partial assignments, cylinders and finite trees

Everything here is an immutable value. Coalitions (subsets of the naturals)
are symbolic descriptors with decidable membership. Partial assignments
describe Silver conditions N_f. Trees come in two flavours: `FiniteTree`
keeps an explicit node set, `SilverTree` keeps one entry per level (a fixed
value or a split) and is never materialized unless asked to.
"""
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from silverlab.config import get_settings
from silverlab.exceptions import AlphabetMismatchError, CapExceededError

log = logging.getLogger(__name__)

Word = Tuple[int, ...]
Alphabet = Optional[int]  # None means values range over all naturals

_CHUNK = 1 << 20


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def alphabet_text(alphabet: Alphabet) -> str:
    return "inf" if alphabet is None else str(alphabet)


def word_text(word: Sequence[int], alphabet: Alphabet = 2) -> str:
    """Digits when every symbol is a single digit, comma separated otherwise"""
    if alphabet is not None and alphabet <= 10:
        return "".join(str(v) for v in word)
    if all(v < 10 for v in word):
        return "".join(str(v) for v in word)
    return ",".join(str(v) for v in word)


def word_from_text(text: str) -> Word:
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        return tuple(int(v) for v in text.split(","))
    return tuple(int(v) for v in text)


def _minimize(prefix: Sequence, period: Sequence) -> Tuple[tuple, tuple]:
    """Shortest period, then shortest prefix, describing the same sequence"""
    prefix = tuple(prefix)
    period = tuple(period)
    if not period:
        raise ValueError("period must be nonempty")
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period == period[:d] * (n // d):
            period = period[:d]
            break
    while prefix and prefix[-1] == period[-1]:
        period = (prefix[-1],) + period[:-1]
        prefix = prefix[:-1]
    return prefix, period


# ---------------------------------------------------------------------------
# Eventually periodic sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """
    Sequence x with x(n) = prefix[n] for n < |prefix| and
    period[(n - |prefix|) mod |period|] afterwards

    Attributes
    ----------
    prefix: Word
        Values before the periodic part starts
    period: Word
        Nonempty repeating block
    alphabet: Optional[int] = 2
        Values are below `alphabet`; `None` for the naturals
    """

    prefix: Word
    period: Word
    alphabet: Alphabet = 2

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))
        object.__setattr__(self, "period", tuple(int(v) for v in self.period))
        if not self.period:
            raise ValueError("period of an eventually periodic sequence is empty")
        for v in self.prefix + self.period:
            if v < 0 or (self.alphabet is not None and v >= self.alphabet):
                msg = f"value {v} outside alphabet {alphabet_text(self.alphabet)}"
                raise ValueError(msg)

    @classmethod
    def constant(cls, value: int, alphabet: Alphabet = 2) -> "EventuallyPeriodicSeq":
        return cls((), (value,), alphabet)

    @classmethod
    def from_text(
        cls, prefix: str, period: str, alphabet: Alphabet = 2
    ) -> "EventuallyPeriodicSeq":
        return cls(word_from_text(prefix), word_from_text(period), alphabet)

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        p = len(self.prefix)
        if n < p:
            return self.prefix[n]
        return self.period[(n - p) % len(self.period)]

    def take(self, n: int) -> Word:
        return tuple(self[i] for i in range(n))

    def values(self, lo: int, hi: int) -> np.ndarray:
        idx = np.arange(lo, hi, dtype=np.int64)
        out = np.empty(len(idx), dtype=np.int64)
        p = len(self.prefix)
        head = idx < p
        if p:
            out[head] = np.asarray(self.prefix, dtype=np.int64)[idx[head]]
        per = np.asarray(self.period, dtype=np.int64)
        out[~head] = per[(idx[~head] - p) % len(per)]
        return out

    def canonical(self) -> "EventuallyPeriodicSeq":
        prefix, period = _minimize(self.prefix, self.period)
        return EventuallyPeriodicSeq(prefix, period, self.alphabet)

    def same_as(self, other: "EventuallyPeriodicSeq") -> bool:
        a, b = self.canonical(), other.canonical()
        return a.prefix == b.prefix and a.period == b.period

    def window(self, *others: "EventuallyPeriodicSeq") -> int:
        """Length of a prefix on which agreement implies agreement everywhere"""
        seqs = (self,) + others
        start = max(len(s.prefix) for s in seqs)
        period = 1
        for s in seqs:
            period = lcm(period, len(s.period))
        return start + period

    def with_values(self, mapping: Mapping[int, int]) -> "EventuallyPeriodicSeq":
        """Copy with finitely many coordinates overwritten"""
        if not mapping:
            return self
        cover = max(max(mapping) + 1, len(self.prefix))
        prefix = list(self.take(cover))
        for n, v in mapping.items():
            prefix[n] = v
        rot = [self[cover + i] for i in range(len(self.period))]
        return EventuallyPeriodicSeq(tuple(prefix), tuple(rot), self.alphabet)

    def __str__(self) -> str:
        p = word_text(self.prefix, self.alphabet)
        q = word_text(self.period, self.alphabet)
        return f"{p}({q})^inf"


# ---------------------------------------------------------------------------
# Coalition descriptors
# ---------------------------------------------------------------------------


class Skeleton(NamedTuple):
    """Eventually periodic set agreeing with a descriptor off a density-zero set"""

    prefix: Tuple[bool, ...]
    period: Tuple[bool, ...]
    exact: bool

    def bit(self, n: int) -> bool:
        p = len(self.prefix)
        if n < p:
            return self.prefix[n]
        return self.period[(n - p) % len(self.period)]

    def bits(self, hi: int, lo: int = 0) -> np.ndarray:
        idx = np.arange(lo, hi, dtype=np.int64)
        out = np.empty(len(idx), dtype=bool)
        p = len(self.prefix)
        head = idx < p
        if p:
            out[head] = np.asarray(self.prefix, dtype=bool)[idx[head]]
        out[~head] = np.asarray(self.period, dtype=bool)[
            (idx[~head] - p) % len(self.period)
        ]
        return out

    @property
    def density(self) -> Fraction:
        return Fraction(sum(self.period), len(self.period))


def _make_skeleton(prefix, period, exact) -> Skeleton:
    prefix, period = _minimize(tuple(bool(b) for b in prefix), tuple(bool(b) for b in period))
    return Skeleton(prefix, period, exact)


def _combine(left: Skeleton, right: Skeleton, op) -> Skeleton:
    start = max(len(left.prefix), len(right.prefix))
    period = lcm(len(left.period), len(right.period))
    cap = get_settings().period_cap
    if period > cap:
        raise CapExceededError("skeleton period", period, cap)
    bits = op(left.bits(start + period), right.bits(start + period))
    return _make_skeleton(bits[:start], bits[start:], left.exact and right.exact)


@lru_cache(maxsize=4096)
def skeleton_of(desc: "CoalitionDescriptor") -> Skeleton:
    return desc._skeleton()


class CoalitionDescriptor(ABC):
    """
    Symbolic subset of the naturals

    Subclasses are frozen dataclasses, so descriptors hash and compare
    structurally. Use `normalize` before comparing for set equality of
    eventually periodic descriptors. `~A`, `A | B` and `A & B` build the
    Boolean combinations.
    """

    @abstractmethod
    def __contains__(self, n: int) -> bool:
        pass

    @abstractmethod
    def _mask(self, lo: int, hi: int) -> np.ndarray:
        """Membership of lo, ..., hi - 1 as a boolean array"""

    @abstractmethod
    def _skeleton(self) -> Skeleton:
        pass

    @abstractmethod
    def _text(self, prec: int) -> str:
        pass

    def _geometric_atoms(self) -> Iterator["Geometric"]:
        return iter(())

    def _atoms(self) -> Iterator["CoalitionDescriptor"]:
        yield self

    def normalize(self) -> "CoalitionDescriptor":
        return self

    def __invert__(self) -> "CoalitionDescriptor":
        return Complement(self)

    def __or__(self, other: "CoalitionDescriptor") -> "CoalitionDescriptor":
        return Union_(self, other)

    def __and__(self, other: "CoalitionDescriptor") -> "CoalitionDescriptor":
        return Intersection(self, other)

    def to_text(self) -> str:
        return self._text(0)

    def __str__(self) -> str:
        return self.to_text()

    def skeleton(self) -> Skeleton:
        return skeleton_of(self)

    def is_eventually_periodic(self) -> bool:
        return self.skeleton().exact

    def density(self) -> Optional[Fraction]:
        """Exact natural density, or None when the skeleton is too long"""
        try:
            return self.skeleton().density
        except CapExceededError:
            return None

    def mask(self, limit: int) -> np.ndarray:
        return self._mask(0, limit)

    def count_between(self, lo: int, hi: int) -> int:
        total = 0
        for start in range(lo, hi, _CHUNK):
            total += int(self._mask(start, min(hi, start + _CHUNK)).sum())
        return total

    def count_upto(self, n: int) -> int:
        """|A ∩ [0, n]|"""
        return self.count_between(0, n + 1)

    def members_below(self, limit: int) -> List[int]:
        return [int(v) for v in np.flatnonzero(self._mask(0, limit))]

    def finite_extent(self) -> Optional[int]:
        """
        Bound B with every member below B if the set is finite, else None

        A positive-density skeleton settles infiniteness at once. Otherwise
        every member past the skeleton prefix lies on a geometric orbit.
        Residues of c r^k modulo the atoms' periods settle after
        bit_length(modulus) steps, so each orbit is skipped that far and
        then scanned over a window covering a full residue cycle.
        """
        skel = self.skeleton()
        if any(skel.period):
            return None
        if skel.exact:
            return len(skel.prefix)
        start = len(skel.prefix)
        modulus = len(skel.period)
        for atom in self._atoms():
            if isinstance(atom, Geometric):
                continue
            s = atom.skeleton()
            start = max(start, len(s.prefix))
            modulus = lcm(modulus, len(s.period))
        lead = modulus.bit_length() + 1
        window = 2 * modulus + 64
        extent = start
        for g in self._geometric_atoms():
            value = g.coef
            while value < start:
                value *= g.ratio
            for _ in range(lead):
                value *= g.ratio
            extent = max(extent, value)
            for _ in range(window):
                if value in self:
                    return None
                value *= g.ratio
        return extent

    def is_finite(self) -> bool:
        return self.finite_extent() is not None

    def is_cofinite(self) -> bool:
        return Complement(self).is_finite()

    def iter_members(self, start: int = 0) -> Iterator[int]:
        """Members in increasing order; finite sets stop at their last member"""
        extent = self.finite_extent()
        lo, size = start, 256
        while extent is None or lo < extent:
            hi = lo + size
            if extent is not None:
                hi = min(hi, extent)
            for v in np.flatnonzero(self._mask(lo, hi)):
                yield lo + int(v)
            lo = hi
            size = min(size * 2, _CHUNK)

    def nth_member(self, j: int) -> int:
        for i, v in enumerate(self.iter_members()):
            if i == j:
                return v
        raise IndexError(f"descriptor {self} has fewer than {j + 1} members")


@dataclass(frozen=True)
class Finite(CoalitionDescriptor):
    elements: FrozenSet[int] = frozenset()

    def __post_init__(self):
        elements = frozenset(int(e) for e in self.elements)
        if any(e < 0 for e in elements):
            raise ValueError("coalition members are natural numbers")
        object.__setattr__(self, "elements", elements)

    def __contains__(self, n: int) -> bool:
        return n in self.elements

    def _mask(self, lo, hi):
        out = np.zeros(max(hi - lo, 0), dtype=bool)
        for e in self.elements:
            if lo <= e < hi:
                out[e - lo] = True
        return out

    def _skeleton(self):
        if not self.elements:
            return _make_skeleton((), (False,), True)
        top = max(self.elements)
        return _make_skeleton([i in self.elements for i in range(top + 1)], (False,), True)

    def _text(self, prec):
        return "finite{" + ",".join(str(e) for e in sorted(self.elements)) + "}"


@dataclass(frozen=True)
class Arithmetic(CoalitionDescriptor):
    start: int
    step: int

    def __post_init__(self):
        if self.start < 0 or self.step < 1:
            msg = f"arith needs start >= 0 and step >= 1, got ({self.start}, {self.step})"
            raise ValueError(msg)

    def __contains__(self, n):
        return n >= self.start and (n - self.start) % self.step == 0

    def _mask(self, lo, hi):
        idx = np.arange(lo, hi, dtype=np.int64)
        return (idx >= self.start) & ((idx - self.start) % self.step == 0)

    def _skeleton(self):
        return _make_skeleton(
            (False,) * self.start, (True,) + (False,) * (self.step - 1), True
        )

    def _text(self, prec):
        return f"arith({self.start},{self.step})"


@dataclass(frozen=True)
class Geometric(CoalitionDescriptor):
    """{coef * ratio ** n : n >= 0}"""

    coef: int
    ratio: int

    def __post_init__(self):
        if self.coef < 1 or self.ratio < 2:
            msg = f"geom needs c >= 1 and r >= 2, got ({self.coef}, {self.ratio})"
            raise ValueError(msg)

    def __contains__(self, n):
        if n < self.coef or n % self.coef:
            return False
        q = n // self.coef
        while q % self.ratio == 0:
            q //= self.ratio
        return q == 1

    def _mask(self, lo, hi):
        out = np.zeros(max(hi - lo, 0), dtype=bool)
        value = self.coef
        while value < hi:
            if value >= lo:
                out[value - lo] = True
            value *= self.ratio
        return out

    def _skeleton(self):
        return Skeleton((), (False,), False)

    def _geometric_atoms(self):
        yield self

    def _text(self, prec):
        return f"geom({self.coef},{self.ratio})"


@dataclass(frozen=True)
class Periodic(CoalitionDescriptor):
    """Characteristic word: `prefix` then `period` repeated, over 0/1"""

    period: str
    prefix: str = ""

    def __post_init__(self):
        if not self.period:
            raise ValueError("periodic coalition needs a nonempty period")
        if set(self.prefix + self.period) - {"0", "1"}:
            msg = f"characteristic words are over 0/1, got {self.prefix!r} {self.period!r}"
            raise ValueError(msg)

    def __contains__(self, n):
        p = len(self.prefix)
        if n < p:
            return self.prefix[n] == "1"
        return self.period[(n - p) % len(self.period)] == "1"

    def _mask(self, lo, hi):
        return self._skeleton().bits(hi, lo)

    def _skeleton(self):
        return Skeleton(
            tuple(c == "1" for c in self.prefix),
            tuple(c == "1" for c in self.period),
            True,
        )

    @classmethod
    def from_skeleton(cls, skel: Skeleton) -> "Periodic":
        prefix, period = _minimize(skel.prefix, skel.period)
        return cls(
            "".join("1" if b else "0" for b in period),
            "".join("1" if b else "0" for b in prefix),
        )

    def normalize(self):
        return Periodic.from_skeleton(self._skeleton())

    def _text(self, prec):
        if self.prefix:
            return f'periodic("{self.prefix}","{self.period}")'
        return f'periodic("{self.period}")'


@dataclass(frozen=True)
class Complement(CoalitionDescriptor):
    inner: CoalitionDescriptor

    def __contains__(self, n):
        return n not in self.inner

    def _mask(self, lo, hi):
        return ~self.inner._mask(lo, hi)

    def _skeleton(self):
        s = self.inner.skeleton()
        return _make_skeleton(
            [not b for b in s.prefix], [not b for b in s.period], s.exact
        )

    def _geometric_atoms(self):
        return self.inner._geometric_atoms()

    def _atoms(self):
        return self.inner._atoms()

    def normalize(self):
        inner = self.inner.normalize()
        if isinstance(inner, Complement):
            return inner.inner
        out = Complement(inner)
        if out.is_eventually_periodic():
            return Periodic.from_skeleton(out.skeleton())
        return out

    def _text(self, prec):
        return "~" + self.inner._text(3)


class _Binary(CoalitionDescriptor):
    left: CoalitionDescriptor
    right: CoalitionDescriptor
    symbol = ""
    prec = 0

    def _op(self, a, b):
        raise NotImplementedError

    def _mask(self, lo, hi):
        return self._op(self.left._mask(lo, hi), self.right._mask(lo, hi))

    def _skeleton(self):
        return _combine(self.left.skeleton(), self.right.skeleton(), self._op)

    def _geometric_atoms(self):
        return itertools.chain(self.left._geometric_atoms(), self.right._geometric_atoms())

    def _atoms(self):
        return itertools.chain(self.left._atoms(), self.right._atoms())

    def normalize(self):
        out = type(self)(self.left.normalize(), self.right.normalize())
        if out.is_eventually_periodic():
            return Periodic.from_skeleton(out.skeleton())
        return out

    def _text(self, prec):
        text = (
            self.left._text(self.prec) + self.symbol + self.right._text(self.prec + 1)
        )
        return f"({text})" if prec > self.prec else text


@dataclass(frozen=True)
class Union_(_Binary):
    left: CoalitionDescriptor
    right: CoalitionDescriptor
    symbol = "|"
    prec = 1

    def __contains__(self, n):
        return n in self.left or n in self.right

    def _op(self, a, b):
        return a | b


@dataclass(frozen=True)
class Intersection(_Binary):
    left: CoalitionDescriptor
    right: CoalitionDescriptor
    symbol = "&"
    prec = 2

    def __contains__(self, n):
        return n in self.left and n in self.right

    def _op(self, a, b):
        return a & b


def naturals() -> Periodic:
    return Periodic("1")


def without(desc: CoalitionDescriptor, points: Iterable[int]) -> CoalitionDescriptor:
    """`desc` minus finitely many points, merging repeated removals"""
    points = frozenset(points)
    if not points:
        return desc
    if (
        isinstance(desc, Intersection)
        and isinstance(desc.right, Complement)
        and isinstance(desc.right.inner, Finite)
    ):
        base, removed = desc.left, desc.right.inner.elements
    else:
        base, removed = desc, frozenset()
    out = Intersection(base, Complement(Finite(removed | points)))
    if out.is_eventually_periodic():
        return Periodic.from_skeleton(out.skeleton())
    return out


# ---------------------------------------------------------------------------
# Partial assignments and cylinders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialAssignment:
    """
    Partial function f from the naturals to an alphabet

    Attributes
    ----------
    alphabet: Optional[int]
        Bound K on values, or None for the naturals
    free: CoalitionDescriptor
        Coordinates outside dom(f)
    fixed: Tuple[Tuple[int, int], ...]
        Explicit values, sorted by coordinate
    tail: EventuallyPeriodicSeq
        Value of every non-free coordinate missing from `fixed`
    """

    alphabet: Alphabet
    free: CoalitionDescriptor
    fixed: Tuple[Tuple[int, int], ...] = ()
    tail: Optional[EventuallyPeriodicSeq] = None
    _cache: Dict[str, object] = field(
        default_factory=dict, init=False, compare=False, hash=False, repr=False
    )

    def __post_init__(self):
        if self.alphabet is not None and self.alphabet < 2:
            raise ValueError(f"alphabet must have at least 2 symbols, got {self.alphabet}")
        fixed = tuple(sorted((int(k), int(v)) for k, v in dict(self.fixed).items()))
        object.__setattr__(self, "fixed", fixed)
        if self.tail is None:
            object.__setattr__(self, "tail", EventuallyPeriodicSeq.constant(0, self.alphabet))
        if self.tail.alphabet != self.alphabet:
            raise AlphabetMismatchError(self.tail.alphabet, self.alphabet)
        for k, v in fixed:
            if k < 0 or v < 0 or (self.alphabet is not None and v >= self.alphabet):
                msg = f"fixed value {k}:{v} outside alphabet {alphabet_text(self.alphabet)}"
                raise ValueError(msg)
            if k in self.free:
                msg = f"coordinate {k} is both free and fixed"
                raise ValueError(msg)

    @classmethod
    def empty(cls, alphabet: Alphabet = 2) -> "PartialAssignment":
        """Assignment with empty domain: N_f is the whole space"""
        return cls(alphabet, naturals())

    @classmethod
    def from_word(
        cls, word: Sequence[Optional[int]], alphabet: Alphabet = 2, rest_free: bool = True
    ) -> "PartialAssignment":
        """`None` entries are free; coordinates past the word are free or 0"""
        free_pts = [i for i, v in enumerate(word) if v is None]
        if rest_free:
            free = Union_(Finite(free_pts), Arithmetic(len(word), 1)).normalize()
        else:
            free = Finite(free_pts)
        fixed = tuple((i, v) for i, v in enumerate(word) if v is not None)
        return cls(alphabet, free, fixed)

    @property
    def fixed_map(self) -> Dict[int, int]:
        return dict(self.fixed)

    def is_free(self, n: int) -> bool:
        return n in self.free

    def value(self, n: int) -> Optional[int]:
        if n in self.free:
            return None
        return self.fixed_map.get(n, self.tail[n]) if self.fixed else self.tail[n]

    @property
    def is_silver(self) -> bool:
        if "silver" not in self._cache:
            self._cache["silver"] = not self.free.is_finite()
        return self._cache["silver"]

    def pattern(self, depth: int) -> Tuple[Optional[int], ...]:
        """f restricted below `depth`, with None at free coordinates"""
        fixed = self.fixed_map
        free = self.free.mask(depth)
        return tuple(
            None if free[n] else fixed.get(n, self.tail[n]) for n in range(depth)
        )

    def free_below(self, limit: int) -> List[int]:
        return self.free.members_below(limit)

    def iter_free(self) -> Iterator[int]:
        return self.free.iter_members()

    def nth_free(self, j: int) -> int:
        return self.free.nth_member(j)

    @property
    def first_free(self) -> int:
        return self.nth_free(0)

    @property
    def stem(self) -> Word:
        a0 = self.first_free
        return tuple(self.value(n) for n in range(a0))

    def fix(self, mapping: Mapping[int, int]) -> "PartialAssignment":
        """Extend f by values on some of its free coordinates (N_g ≤ N_f)"""
        mapping = {int(k): int(v) for k, v in mapping.items()}
        if not mapping:
            return self
        for k in mapping:
            if k not in self.free:
                msg = f"coordinate {k} is not free"
                raise ValueError(msg)
        fixed = self.fixed_map
        fixed.update(mapping)
        return PartialAssignment(
            self.alphabet, without(self.free, mapping), tuple(fixed.items()), self.tail
        )

    extend = fix

    def completion(
        self,
        fill: Optional[Mapping[int, int]] = None,
        default: int = 0,
        cover: int = 0,
    ) -> EventuallyPeriodicSeq:
        """
        Point of N_f taking `fill` values (else `default`) on free coordinates

        The result is exact below `cover` and exact everywhere when the free
        set is eventually periodic.
        """
        fill = dict(fill or {})
        skel = self.free.skeleton()
        start = max(
            [cover, len(skel.prefix), len(self.tail.prefix)]
            + [k + 1 for k, _ in self.fixed]
            + [k + 1 for k in fill]
        )
        period = lcm(len(skel.period), len(self.tail.period))
        fixed = self.fixed_map
        free = self.free.mask(start + period)

        def at(n):
            if free[n]:
                return fill.get(n, default)
            return fixed.get(n, self.tail[n])

        values = [at(n) for n in range(start + period)]
        return EventuallyPeriodicSeq(
            tuple(values[:start]), tuple(values[start:]), self.alphabet
        ).canonical()

    def __str__(self) -> str:
        fix = ",".join(f"{k}:{v}" for k, v in self.fixed)
        tail = self.tail
        return (
            f"assign(K={alphabet_text(self.alphabet)}, free={self.free.to_text()}, "
            f'fix{{{fix}}}, tail=seq("{word_text(tail.prefix, self.alphabet)}",'
            f'"{word_text(tail.period, self.alphabet)}"))'
        )


@dataclass(frozen=True)
class MemberResult:
    agrees: bool
    depth: int
    position: Optional[int] = None

    def __bool__(self) -> bool:
        return self.agrees

    def __str__(self) -> str:
        if self.agrees:
            return f"agrees-to-depth {self.depth}"
        return f"disagrees-at {self.position}"


@dataclass(frozen=True)
class Cylinder:
    """The basic set N_f of all sequences extending `assignment`"""

    assignment: PartialAssignment

    @property
    def alphabet(self) -> Alphabet:
        return self.assignment.alphabet

    @property
    def is_silver(self) -> bool:
        return self.assignment.is_silver

    def member(self, x: EventuallyPeriodicSeq, depth: int) -> MemberResult:
        return cylinder_member(x, self, depth)

    def is_subcylinder(self, other: "Cylinder", depth: int) -> bool:
        """N_self ⊆ N_other as far as coordinates below `depth` can tell"""
        if self.alphabet != other.alphabet:
            raise AlphabetMismatchError(self.alphabet, other.alphabet)
        mine = self.assignment.pattern(depth)
        theirs = other.assignment.pattern(depth)
        return all(t is None or m == t for m, t in zip(mine, theirs))


def cylinder_member(x: EventuallyPeriodicSeq, c: Cylinder, depth: int) -> MemberResult:
    """Least coordinate below `depth` where x leaves N_f, if any"""
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    if x.alphabet != c.alphabet:
        raise AlphabetMismatchError(x.alphabet, c.alphabet)
    for n, v in enumerate(c.assignment.pattern(depth)):
        if v is not None and x[n] != v:
            return MemberResult(False, depth, n)
    return MemberResult(True, depth)


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


class Tree(ABC):
    """
    Finite tree over {0, ..., K-1}

    A node is splitting when all K one-step extensions are in the tree.
    Lev(T) = {|t| + 1 : t splitting}.
    """

    alphabet: int

    @property
    @abstractmethod
    def height(self) -> int:
        pass

    @abstractmethod
    def __contains__(self, word: Sequence[int]) -> bool:
        pass

    @abstractmethod
    def terminals(self) -> Iterator[Word]:
        """Terminal nodes in lexicographic order"""

    @abstractmethod
    def n_terminals(self) -> int:
        pass

    @abstractmethod
    def splitting_nodes(self) -> Iterator[Word]:
        pass

    @abstractmethod
    def split_count(self) -> int:
        pass

    @abstractmethod
    def split_depths(self) -> Tuple[int, ...]:
        """Sorted depths |t| of splitting nodes"""

    @abstractmethod
    def graft_common(self, suffix: Sequence[int]) -> "Tree":
        """Append the same word to every terminal node"""

    @abstractmethod
    def graft_cube(self, height: int) -> "Tree":
        """Hang the full K-ary cube of the given height under every terminal"""

    def levels(self) -> FrozenSet[int]:
        return frozenset(d + 1 for d in self.split_depths())

    def ratio(self) -> Fraction:
        if self.height == 0:
            return Fraction(0)
        return Fraction(len(self.levels()), self.height)

    def is_splitting(self, word: Sequence[int]) -> bool:
        word = tuple(word)
        return word in self and all(
            word + (j,) in self for j in range(self.alphabet)
        )

    def spl_succ(self, word: Sequence[int]) -> Optional[Word]:
        """Shortest splitting node extending `word`"""
        word = tuple(word)
        if word not in self:
            return None
        for t in sorted(self.splitting_nodes(), key=lambda t: (len(t), t)):
            if t[: len(word)] == word:
                return t
        return None

    @property
    def stem(self) -> Word:
        """Least splitting node, or the only branch of a non-splitting tree"""
        best = None
        for t in self.splitting_nodes():
            if best is None or len(t) < len(best):
                best = t
        if best is not None:
            return best
        return next(self.terminals())

    def body_member(self, x: EventuallyPeriodicSeq, depth: int) -> bool:
        """x restricted to min(depth, height) is a node"""
        return x.take(min(depth, self.height)) in self

    def is_uniform(self) -> bool:
        lengths = {len(t) for t in itertools.islice(self.terminals(), 1 << 16)}
        return len(lengths) <= 1


@dataclass(frozen=True)
class FiniteTree(Tree):
    alphabet: int
    nodes: FrozenSet[Word]

    def __post_init__(self):
        nodes = frozenset(tuple(int(v) for v in t) for t in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if () not in nodes:
            raise ValueError("a tree must contain the empty word")
        for t in nodes:
            if any(v < 0 or v >= self.alphabet for v in t):
                raise ValueError(f"node {t} leaves the alphabet {self.alphabet}")
            if t and t[:-1] not in nodes:
                raise ValueError(f"node {t} is missing its parent")

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]], alphabet: int = 2):
        nodes = {()}
        for w in words:
            w = tuple(w)
            nodes.update(w[:i] for i in range(len(w) + 1))
        return cls(alphabet, frozenset(nodes))

    @classmethod
    def cube(cls, height: int, alphabet: int = 2):
        return cls.from_words(itertools.product(range(alphabet), repeat=height), alphabet)

    @property
    def height(self):
        return max(len(t) for t in self.nodes)

    def __contains__(self, word):
        return tuple(word) in self.nodes

    def children(self, word: Sequence[int]) -> List[Word]:
        word = tuple(word)
        return [word + (j,) for j in range(self.alphabet) if word + (j,) in self.nodes]

    def terminals(self):
        return iter(sorted(t for t in self.nodes if not self.children(t)))

    def n_terminals(self):
        return sum(1 for _ in self.terminals())

    def splitting_nodes(self):
        return iter(sorted(t for t in self.nodes if self.is_splitting(t)))

    def split_count(self):
        return sum(1 for _ in self.splitting_nodes())

    def split_depths(self):
        return tuple(sorted({len(t) for t in self.splitting_nodes()}))

    def graft_common(self, suffix):
        suffix = tuple(suffix)
        return type(self).from_words(
            (t + suffix for t in self.terminals()), self.alphabet
        ) if suffix else self

    def graft_cube(self, height):
        if height == 0:
            return self
        cube = list(itertools.product(range(self.alphabet), repeat=height))
        size = self.n_terminals() * len(cube)
        cap = get_settings().enumeration_cap
        if size > cap:
            raise CapExceededError("explicit tree terminals", size, cap)
        return type(self).from_words(
            (t + s for t in self.terminals() for s in cube), self.alphabet
        )


@dataclass(frozen=True)
class SilverTree(Tree):
    """
    Uniform tree given level by level

    `pattern[i]` is the value every node takes at level i, or None where
    every node splits.
    """

    alphabet: int
    pattern: Tuple[Optional[int], ...]

    def __post_init__(self):
        pattern = tuple(None if v is None else int(v) for v in self.pattern)
        object.__setattr__(self, "pattern", pattern)
        for v in pattern:
            if v is not None and not 0 <= v < self.alphabet:
                raise ValueError(f"value {v} leaves the alphabet {self.alphabet}")

    @classmethod
    def from_assignment(cls, f: PartialAssignment, depth: int) -> "SilverTree":
        if f.alphabet is None:
            msg = "trees over the naturals are infinitely branching; query nodes instead"
            raise ValueError(msg)
        return cls(f.alphabet, f.pattern(depth))

    @property
    def height(self):
        return len(self.pattern)

    def __contains__(self, word):
        word = tuple(word)
        if len(word) > len(self.pattern):
            return False
        return all(
            (p is None and 0 <= v < self.alphabet) or v == p
            for v, p in zip(word, self.pattern)
        )

    def _words(self, length: int) -> Iterator[Word]:
        choices = [
            range(self.alphabet) if p is None else (p,) for p in self.pattern[:length]
        ]
        return (tuple(w) for w in itertools.product(*choices))

    def terminals(self):
        return self._words(self.height)

    def free_levels(self) -> Tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.pattern) if p is None)

    def n_terminals(self):
        return self.alphabet ** len(self.free_levels())

    def split_depths(self):
        return self.free_levels()

    def splitting_nodes(self):
        return itertools.chain.from_iterable(self._words(d) for d in self.free_levels())

    def split_count(self):
        return sum(self.alphabet ** i for i in range(len(self.free_levels())))

    def spl_succ(self, word):
        word = tuple(word)
        if word not in self:
            return None
        for i in range(len(word), self.height):
            if self.pattern[i] is None:
                return word + tuple(self.pattern[len(word) : i])
        return None

    def graft_common(self, suffix):
        return SilverTree(self.alphabet, self.pattern + tuple(suffix))

    def graft_cube(self, height):
        return SilverTree(self.alphabet, self.pattern + (None,) * height)

    def materialize(self) -> FiniteTree:
        cap = get_settings().enumeration_cap
        if self.n_terminals() > cap:
            raise CapExceededError("explicit tree terminals", self.n_terminals(), cap)
        return FiniteTree.from_words(self.terminals(), self.alphabet)


AnyTree = Union[FiniteTree, SilverTree]


def tree_of(c: Cylinder, depth: int) -> FiniteTree:
    """Depth truncation of the Silver tree whose body is N_f"""
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    return SilverTree.from_assignment(c.assignment, depth).materialize()


def silver_levels(c: Cylinder, depth: int) -> FrozenSet[int]:
    """{a + 1 : a free, a < depth}, which Lev(tree_of(c, depth)) must equal"""
    return frozenset(a + 1 for a in c.assignment.free_below(depth))


@dataclass(frozen=True)
class SplittingReport:
    split_nodes: Optional[Tuple[Word, ...]]
    split_count: int
    levels: FrozenSet[int]
    height: int
    ratio: Fraction

    def __str__(self) -> str:
        lev = "{" + ",".join(str(v) for v in sorted(self.levels)) + "}"
        return (
            f"Lev={lev} ht={self.height} ratio={self.ratio} "
            f"splitting-nodes={self.split_count}"
        )


def splitting_report(tree: Tree) -> SplittingReport:
    """Splitting nodes, Lev(T), ht(T) and |Lev(T)|/ht(T)"""
    count = tree.split_count()
    nodes = None
    if count <= get_settings().enumeration_cap:
        nodes = tuple(sorted(tree.splitting_nodes(), key=lambda t: (len(t), t)))
    return SplittingReport(nodes, count, tree.levels(), tree.height, tree.ratio())
