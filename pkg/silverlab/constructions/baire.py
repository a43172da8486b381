"""
Silver conditions over the naturals (Baire space)

h_n(s⌢⟨j⟩) = s⌢e_{s(0)}⌢...⌢e_{s(|s|-1)}⌢e_j⌢e_n with e_k = 0^k, so
h_n(s⌢⟨j⟩) is s followed by Σs + j + n zeros. C_n is the union of the
cylinders N_{h_n(w)}. The escape recursion builds a point of a given
condition outside C_n by placing a large jump at every free coordinate.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from silverlab.exceptions import VerificationError
from silverlab.seqcore import (
    Arithmetic,
    Cylinder,
    EventuallyPeriodicSeq,
    Finite,
    MemberResult,
    PartialAssignment,
    Union_,
    Word,
    cylinder_member,
)

log = logging.getLogger(__name__)


def e_word(n: int) -> Word:
    if n < 0:
        raise ValueError(f"e_n needs n >= 0, got {n}")
    return (0,) * n


def h_map(level: int, word: Sequence[int]) -> Word:
    word = tuple(word)
    if not word:
        raise ValueError("h_n is defined on nonempty words")
    s, j = word[:-1], word[-1]
    return s + e_word(sum(s) + j + level)


def _zero_run(x: EventuallyPeriodicSeq, start: int, length: int) -> bool:
    return all(x[i] == 0 for i in range(start, start + length))


@dataclass(frozen=True)
class CnResult:
    """
    Attributes
    ----------
    inside: bool
        Some enumerated generator cylinder contains x
    witness: Optional[Word]
        The generator s⌢⟨j⟩ when inside
    stem_bound, value_bound: int
        Generators enumerated have |h_n(s⌢⟨j⟩)| <= stem_bound and entries
        below value_bound; "outside" is a refutation within these bounds only
    """

    inside: bool
    witness: Optional[Word]
    level: int
    stem_bound: int
    value_bound: int

    def __str__(self) -> str:
        if self.inside:
            return f"inside C_{self.level} (generator {list(self.witness)})"
        return (
            f"outside-up-to-bounds C_{self.level} "
            f"(stem<={self.stem_bound}, values<{self.value_bound})"
        )


def in_Cn(
    x: EventuallyPeriodicSeq, n: int, stem_bound: int, value_bound: int
) -> CnResult:
    """
    Search generators of C_n up to the bounds

    For a fixed position p the generator reads s = x↾p, and j = 0 asks for
    the shortest zero run, so it is the only j worth trying. A stem bound
    of 0 enumerates nothing.
    """
    if stem_bound < 0 or value_bound < 1:
        raise ValueError("bounds must be positive")
    if stem_bound == 0:
        return CnResult(False, None, n, stem_bound, value_bound)
    for p in range(stem_bound + 1):
        s = x.take(p)
        if any(v >= value_bound for v in s):
            break
        run = sum(s) + n
        if p + run > stem_bound:
            continue
        if _zero_run(x, p, run):
            return CnResult(True, s + (0,), n, stem_bound, value_bound)
    return CnResult(False, None, n, stem_bound, value_bound)


def oplus(f: PartialAssignment, t: Sequence[int]) -> PartialAssignment:
    """f ⊕ t: t(j) goes to the j-th free coordinate a_j"""
    t = tuple(t)
    if not t:
        return f
    coords = []
    for a in f.iter_free():
        coords.append(a)
        if len(coords) == len(t):
            break
    if len(coords) < len(t):
        raise ValueError(f"f has only {len(coords)} free coordinates")
    return f.fix(dict(zip(coords, t)))


def g_n(f: PartialAssignment, j: int, n: int) -> PartialAssignment:
    """
    G_n(f ∪ {a_0 ↦ j})

    With g = f ∪ {a_0 ↦ j}, the next Σ_{i<a_0} f(i) + j + n free
    coordinates of g are set to 0 (grafting e_{f(i)} for each stem value,
    then e_j, then e_n).
    """
    a0 = f.first_free
    g = f.fix({a0: j})
    return oplus(g, e_word(sum(f.stem) + j + n))


def _fixed_extent(f: PartialAssignment, base: PartialAssignment) -> int:
    """One past the last coordinate fixed by f but free in base"""
    newly = [k for k, _ in f.fixed if base.is_free(k)]
    return max(newly) + 1 if newly else 1



# ---------------------------------------------------------------------------
# Escape recursion
# ---------------------------------------------------------------------------


def _escape_fill(f: PartialAssignment, depth: int) -> Tuple[Dict[int, int], List[int]]:
    """Jump a_{m+1} + 2 at every free a_m up to the first free coordinate >= depth"""
    frees: List[int] = []
    for a in f.iter_free():
        frees.append(a)
        if len(frees) >= 2 and frees[-2] >= depth:
            break
    fill = {frees[m]: frees[m + 1] + 2 for m in range(len(frees) - 1)}
    return fill, frees


@dataclass(frozen=True)
class EscapeWitness:
    x: EventuallyPeriodicSeq
    level: int
    stages: Tuple[Word, ...]
    depth: int

    @property
    def prefix(self) -> Word:
        return self.x.take(self.depth)


def _stage_clear(t: Word, below: int, n: int) -> bool:
    """No generator h_n(s⌢⟨0⟩) with |s| < below is compatible with t"""
    for p in range(below):
        s = t[:p]
        end = min(len(t), p + sum(s) + n)
        if all(t[i] == 0 for i in range(p, end)):
            return False
    return True


def escape_witness(f: PartialAssignment, depth: int) -> EscapeWitness:
    """
    x ∈ N_f with x ∉ C_n for n = a_0 + 2

    t_0 = f↾a_0 and t_{m+1} = t_m⌢⟨a_{m+1} + 2⟩⌢f↾(a_m, a_{m+1}). Each
    stage is checked: no generator with stem shorter than a_m meets
    N_{t_{m+1}}.
    """
    if f.alphabet is not None:
        raise ValueError("escape witnesses live over the naturals (alphabet inf)")
    if not f.is_silver:
        raise ValueError("escape witnesses need a Silver condition")
    a0 = f.first_free
    if depth <= a0:
        msg = f"depth {depth} does not reach past the stem (a_0 = {a0})"
        raise ValueError(msg)
    n = a0 + 2
    fill, frees = _escape_fill(f, depth)
    x = f.completion(fill, default=1, cover=frees[-1] + 1)

    stages = [x.take(a0)]
    for m in range(len(frees) - 1):
        t = x.take(frees[m + 1])
        if not _stage_clear(t, frees[m], n):
            raise VerificationError(f"escape stage {m} meets a generator of C_{n}")
        stages.append(t)
    log.debug("escape witness: n=%d, %d stages", n, len(stages))
    return EscapeWitness(x, n, tuple(stages), depth)


# ---------------------------------------------------------------------------
# Witnesses for F = ∩ F_n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InFWitness:
    x: EventuallyPeriodicSeq
    checks: Tuple[Tuple[int, MemberResult], ...]

    @property
    def ok(self) -> bool:
        return all(r.agrees for _, r in self.checks)


def witness_in_F(f: PartialAssignment, levels: int) -> InFWitness:
    """x = f with 0 on every free coordinate, inside [G_n(f ∪ {a_0 ↦ 0})] for n < levels"""
    if not f.is_silver:
        raise ValueError("witnesses need a Silver condition")
    x = f.completion({}, default=0)
    checks = []
    for n in range(levels):
        g = g_n(f, 0, n)
        depth = _fixed_extent(g, f)
        result = cylinder_member(x, Cylinder(g), depth)
        if not result.agrees:
            raise VerificationError(f"0-filled point leaves G_{n} at {result.position}")
        checks.append((n, result))
    return InFWitness(x, tuple(checks))


@dataclass(frozen=True)
class FnResult:
    """
    Exact F_n membership of an eventually periodic point

    When `inside`, `generator` is a condition g with first free coordinate
    `a0` and y ∈ [G_n(g ∪ {a_0 ↦ j})].
    """

    inside: bool
    level: int
    generator: Optional[PartialAssignment] = None
    a0: Optional[int] = None
    j: Optional[int] = None

    def __str__(self) -> str:
        if self.inside:
            step = f"{{{self.a0} ↦ {self.j}}}"
            lead = f"inside F_{self.level} via G_{self.level}(g ∪ {step})"
            return f"{lead}, g = {self.generator}"
        return f"outside F_{self.level}"


def _zeros_after(y: EventuallyPeriodicSeq, a: int, count: int) -> List[int]:
    out: List[int] = []
    p = a + 1
    while len(out) < count:
        if y[p] == 0:
            out.append(p)
        p += 1
    return out


def in_Fn(y: EventuallyPeriodicSeq, n: int) -> FnResult:
    """
    Decide y ∈ F_n

    y lies in [G_n(g ∪ {a_0 ↦ j})] for some g ∈ V_∞ iff some a has at least
    Σ_{i<=a} y(i) + n zeros after it: take a_0 = a, j = y(a), and let g free
    a, those zeros and everything past them. With infinitely many zeros
    a = 0 works; otherwise only a up to the last zero can.
    """
    if n < 0:
        raise ValueError(f"F_n needs n >= 0, got {n}")
    y = y.canonical()
    zeros = [i for i, v in enumerate(y.prefix) if v == 0]
    endless = 0 in y.period
    if endless:
        candidates = [0]
    else:
        candidates = range(zeros[-1] + 1) if zeros else []

    total = 0
    for a in candidates:
        total += y[a]
        if not endless and sum(1 for z in zeros if z > a) < total + n:
            continue
        points = _zeros_after(y, a, total + n)
        top = points[-1] if points else a
        free = Union_(Finite(frozenset([a] + points)), Arithmetic(top + 1, 1)).normalize()
        g = PartialAssignment(y.alphabet, free, (), tail=y)
        grafted = g_n(g, y[a], n)
        if not cylinder_member(y, Cylinder(grafted), top + 1).agrees:
            raise VerificationError(f"generator at a_0 = {a} does not contain y")
        return FnResult(True, n, g, a, y[a])
    return FnResult(False, n)


@dataclass(frozen=True)
class OutFWitness:
    """
    Escape point y of f with exact F_n verdicts

    `results[i]` decides level `level + i`; a level y falls inside carries
    the generator that covers it.
    """

    y: EventuallyPeriodicSeq
    level: int
    results: Tuple[FnResult, ...]
    depth: int

    @property
    def refuted(self) -> Tuple[bool, ...]:
        return tuple(not r.inside for r in self.results)

    @property
    def ok(self) -> bool:
        return all(self.refuted)

    def __str__(self) -> str:
        top = self.level + len(self.results) - 1
        inside = [r.level for r in self.results if r.inside]
        if not inside:
            return f"y outside F_n for n in [{self.level}, {top}]"
        return f"y inside F_n for n in {inside}"


def witness_out_F(f: PartialAssignment, levels: int, depth: int) -> OutFWitness:
    """The escape point of f, decided against F_n for n in [a_0 + 2, a_0 + 2 + levels)"""
    esc = escape_witness(f, depth)
    results = tuple(in_Fn(esc.x, esc.level + i) for i in range(levels))
    for r in results:
        if r.inside:
            log.info("escape point lies in F_%d (a_0 = %d)", r.level, r.a0)
    return OutFWitness(esc.x, esc.level, results, depth)
