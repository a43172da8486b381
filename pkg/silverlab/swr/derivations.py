"""
Derivations in the calculus of a social welfare relation

A derivation is a chain of steps, each justified by one axiom:

    FA(pi)    x ~ f_pi(x) for a finite permutation pi
    SE(i, j)  x < y when x(i) < y(i) < y(j) < x(j) and x = y elsewhere
    P         x < y when x <= y pointwise with some strict coordinate

The relation itself is never decided. A chain is valid when every step is
and consecutive endpoints coincide; its conclusion is strict exactly when
some step is.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from silverlab.config import get_settings
from silverlab.exceptions import AlignmentError, AlphabetMismatchError, DerivationError
from silverlab.seqcore import EventuallyPeriodicSeq

log = logging.getLogger(__name__)

STREAM_LABELS = ("abcd", "01")
KINDS = ("FA", "SE", "P")
RELATIONS = ("~", "<")
RELATION_TEXT = {"~": "∼", "<": "≺"}


@dataclass(frozen=True)
class UtilityStream:
    """
    Stream over a finite totally ordered set of utility levels

    Attributes
    ----------
    seq: EventuallyPeriodicSeq
        Values are indices into `labels`, so the order is the index order
    labels: str = "abcd"
        One character per level, lowest first
    """

    seq: EventuallyPeriodicSeq
    labels: str = "abcd"

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels) or len(self.labels) < 2:
            msg = f"utility levels must be at least two distinct labels, got {self.labels!r}"
            raise ValueError(msg)
        if self.seq.alphabet != len(self.labels):
            raise AlphabetMismatchError(self.seq.alphabet, len(self.labels))

    @classmethod
    def from_text(cls, prefix: str, period: str, labels: str = "abcd") -> "UtilityStream":
        def decode(text):
            try:
                return tuple(labels.index(ch) for ch in text)
            except ValueError:
                msg = f"stream text {text!r} uses labels outside {labels!r}"
                raise ValueError(msg)

        seq = EventuallyPeriodicSeq(decode(prefix), decode(period), len(labels))
        return cls(seq, labels)

    def __getitem__(self, n: int) -> int:
        return self.seq[n]

    def label(self, n: int) -> str:
        return self.labels[self.seq[n]]

    def text(self) -> Tuple[str, str]:
        canon = self.seq.canonical()
        return (
            "".join(self.labels[v] for v in canon.prefix),
            "".join(self.labels[v] for v in canon.period),
        )

    def same_as(self, other: "UtilityStream") -> bool:
        return self.labels == other.labels and self.seq.same_as(other.seq)

    def with_values(self, mapping: Mapping[int, int]) -> "UtilityStream":
        return UtilityStream(self.seq.with_values(mapping).canonical(), self.labels)

    def __str__(self) -> str:
        prefix, period = self.text()
        return f"{prefix}({period})^inf"


@dataclass(frozen=True)
class FinitePermutation:
    """
    Bijection of the naturals moving finitely many points

    Attributes
    ----------
    mapping: Tuple[Tuple[int, int], ...]
        Pairs (n, pi(n)) for the moved points only, sorted
    """

    mapping: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = {int(k): int(v) for k, v in dict(self.mapping).items() if int(k) != int(v)}
        if set(pairs) != set(pairs.values()):
            msg = f"{sorted(pairs.items())} is not a bijection on its support"
            raise ValueError(msg)
        object.__setattr__(self, "mapping", tuple(sorted(pairs.items())))

    @classmethod
    def identity(cls) -> "FinitePermutation":
        return cls(())

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]]) -> "FinitePermutation":
        mapping: Dict[int, int] = {}
        for cycle in cycles:
            cycle = [int(v) for v in cycle]
            if len(set(cycle)) != len(cycle) or set(cycle) & set(mapping):
                msg = f"cycles must be disjoint, got {cycle}"
                raise ValueError(msg)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                mapping[a] = b
        return cls(tuple(mapping.items()))

    @classmethod
    def transpositions(cls, pairs: Iterable[Tuple[int, int]]) -> "FinitePermutation":
        return cls.from_cycles([a, b] for a, b in pairs)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self.mapping)

    def __call__(self, n: int) -> int:
        return dict(self.mapping).get(n, n)

    def cycles(self) -> Tuple[Tuple[int, ...], ...]:
        todo = dict(self.mapping)
        out = []
        while todo:
            start = min(todo)
            cycle = [start]
            n = todo.pop(start)
            while n != start:
                cycle.append(n)
                n = todo.pop(n)
            out.append(tuple(cycle))
        return tuple(out)

    def apply(self, x: UtilityStream) -> UtilityStream:
        """f_pi(x)(n) = x(pi(n))"""
        return x.with_values({n: x[m] for n, m in self.mapping})

    def to_text(self) -> str:
        if not self.mapping:
            return "()"
        return "".join("(" + " ".join(str(v) for v in c) + ")" for c in self.cycles())

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class DerivationStep:
    """
    Attributes
    ----------
    kind: str
        "FA", "SE" or "P"
    source, target: UtilityStream
        The step asserts `source relation target`
    relation: str
        "~" or "<"
    perm: Optional[FinitePermutation]
        The permutation of an FA step
    i, j: Optional[int]
        The two coordinates of an SE step
    """

    kind: str
    source: UtilityStream
    target: UtilityStream
    relation: str
    perm: Optional[FinitePermutation] = None
    i: Optional[int] = None
    j: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DerivationError(f"unknown step kind {self.kind!r}")
        if self.relation not in RELATIONS:
            raise DerivationError(f"unknown relation {self.relation!r}")
        if self.kind == "FA" and self.perm is None:
            raise DerivationError("FA steps need a permutation")
        if self.kind == "SE" and (self.i is None or self.j is None or self.i == self.j):
            raise DerivationError("SE steps need two distinct coordinates i and j")

    def __str__(self) -> str:
        head = self.kind
        if self.kind == "FA":
            head += f" perm={self.perm}"
        elif self.kind == "SE":
            head += f" i={self.i} j={self.j}"
        return f"{head}: {self.source} {RELATION_TEXT[self.relation]} {self.target}"


@dataclass(frozen=True)
class StepCheck:
    valid: bool
    reason: str = ""
    coordinate: Optional[int] = None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        where = "" if self.coordinate is None else f" at {self.coordinate}"
        return f"invalid: {self.reason}{where}"


def _window(step: DerivationStep) -> int:
    w = step.source.seq.window(step.target.seq)
    if step.perm is not None and step.perm.support:
        w = max(w, max(step.perm.support) + 1)
    if step.i is not None:
        w = max(w, step.i + 1, step.j + 1)
    cap = get_settings().align_cap
    if w > cap:
        raise AlignmentError(f"comparison window {w} exceeds the alignment cap {cap}")
    return w


def _differences(x: UtilityStream, y: UtilityStream, window: int) -> Tuple[int, ...]:
    return tuple(n for n in range(window) if x[n] != y[n])


def check_step(step: DerivationStep) -> StepCheck:
    """
    Validate one step exactly

    Streams agreeing on `window` coordinates (longest prefix plus the lcm of
    the periods) agree everywhere, so every check runs on that window.
    """
    x, y = step.source, step.target
    if x.labels != y.labels:
        raise AlphabetMismatchError(x.labels, y.labels)
    window = _window(step)

    if step.kind == "FA":
        if step.relation != "~":
            return StepCheck(False, "FA only yields ~")
        image = step.perm.apply(x)
        diffs = _differences(image, y, max(window, image.seq.window(y.seq)))
        if diffs:
            return StepCheck(False, "target is not f_pi(source)", diffs[0])
        return StepCheck(True)

    if step.relation != "<":
        return StepCheck(False, f"{step.kind} only yields <")

    if step.kind == "SE":
        i, j = step.i, step.j
        diffs = _differences(x, y, window)
        stray = [n for n in diffs if n not in (i, j)]
        if stray:
            return StepCheck(False, "source and target differ outside {i, j}", stray[0])
        if not x[i] < y[i] < y[j] < x[j]:
            return StepCheck(False, "x(i) < y(i) < y(j) < x(j) fails", i)
        return StepCheck(True)

    strict = None
    for n in range(window):
        if x[n] > y[n]:
            return StepCheck(False, "source exceeds target", n)
        if strict is None and x[n] < y[n]:
            strict = n
    if strict is None:
        return StepCheck(False, "no strictly improved coordinate")
    return StepCheck(True)


@dataclass(frozen=True)
class Derivation:
    steps: Tuple[DerivationStep, ...]
    conclusion: Optional[str] = None

    @property
    def source(self) -> UtilityStream:
        return self.steps[0].source

    @property
    def target(self) -> UtilityStream:
        return self.steps[-1].target

    def derived_relation(self) -> str:
        return "<" if any(s.relation == "<" for s in self.steps) else "~"


@dataclass(frozen=True)
class DerivationCheck:
    valid: bool
    conclusion: Optional[str] = None
    step: Optional[int] = None
    reason: str = ""
    coordinate: Optional[int] = None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return f"valid: conclusion {RELATION_TEXT[self.conclusion]}"
        where = "" if self.coordinate is None else f" (coordinate {self.coordinate})"
        return f"invalid at step {self.step}: {self.reason}{where}"


def check_derivation(d: Derivation) -> DerivationCheck:
    if not d.steps:
        raise DerivationError("a derivation needs at least one step")
    for index, step in enumerate(d.steps):
        if index and not d.steps[index - 1].target.same_as(step.source):
            return DerivationCheck(False, step=index, reason="endpoint mismatch")
        result = check_step(step)
        if not result:
            log.debug("step %d rejected: %s", index, result)
            return DerivationCheck(False, None, index, result.reason, result.coordinate)
    derived = d.derived_relation()
    if d.conclusion is not None and d.conclusion != derived:
        return DerivationCheck(
            False,
            step=len(d.steps),
            reason=f"stated conclusion {d.conclusion} but the chain gives {derived}",
        )
    return DerivationCheck(True, derived)
