"""
Trees built by meeting dense sets

`build_delta_tree` grows a Silver tree whose body lies in the intersection
of a sequence of dense open sets while keeping the proportion of splitting
levels close to delta. `meet_dense`, `densify` and `SpineMap` work on the
poset of finite uniform binary trees ordered by end-extension.

A condition is either an explicit `UniformFiniteTree` or a `SilverTree`.
Every operation here threads one common word through all terminals or hangs
a full cube under them, so Silver trees stay Silver trees and are never
materialized.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import pandas as pd

from silverlab.config import get_settings
from silverlab.constructions.oracles import DenseOracle
from silverlab.exceptions import CapExceededError, ConstructionError
from silverlab.seqcore import (
    FiniteTree,
    PartialAssignment,
    SilverTree,
    Tree,
    Word,
    word_text,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class UniformFiniteTree(FiniteTree):
    """Explicit tree whose terminal nodes all have the same length"""

    def __post_init__(self):
        super().__post_init__()
        lengths = {len(t) for t in self.terminals()}
        if len(lengths) > 1:
            msg = f"terminal nodes have different lengths {sorted(lengths)}"
            raise ValueError(msg)


Condition = Union[UniformFiniteTree, SilverTree]


def root(alphabet: int = 2) -> SilverTree:
    return SilverTree(alphabet, ())


# ---------------------------------------------------------------------------
# Threading a common word through all terminals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sweep:
    """
    Attributes
    ----------
    suffix: Word
        The word r_J appended to every terminal
    visited: int
        Terminals walked before the suffix settled
    method: str
        "enumerated" when every terminal was walked, "absorbed" when the
        suffix alone forces membership
    """

    suffix: Word
    visited: int
    method: str


def thread_suffix(p: Tree, oracle: DenseOracle) -> Sweep:
    """
    r_J for the sweep t_0, ..., t_J over the terminals of p

    r_0 extends t_0 into D, and r_{j+1} extends t_{j+1}⌢r_j into D minus
    t_{j+1}. The sweep stops early once the current suffix absorbs. When
    there are too many terminals to walk, it starts from an absorbing
    word supplied by the oracle.
    """
    cap = get_settings().enumeration_cap
    if p.n_terminals() > cap:
        seed = oracle.absorbing_word()
        if seed is None or not oracle.absorbs(seed):
            raise CapExceededError("terminal sweep", p.n_terminals(), cap)
        return Sweep(tuple(seed), 0, "absorbed")

    suffix: Word = ()
    visited = 0
    for t in p.terminals():
        if oracle.absorbs(suffix):
            return Sweep(suffix, visited, "absorbed")
        visited += 1
        word = t + suffix
        if oracle.contains(word):
            continue
        suffix = oracle.checked_extend(word)[len(t) :]
    return Sweep(suffix, visited, "enumerated")


@dataclass(frozen=True)
class TerminalCheck:
    ok: bool
    method: str

    def __str__(self) -> str:
        return f"{'ok' if self.ok else 'FAILED'} ({self.method})"


def check_terminals(p: Tree, oracle: DenseOracle, suffix: Word = ()) -> TerminalCheck:
    """
    Every terminal t of p satisfies N_t ⊆ D

    Walks the terminals when there are few enough and the oracle decides
    them; otherwise accepts an absorbing `suffix` shared by all of them.
    Anything else is reported as unverified, which is a failed check.
    """
    cap = get_settings().enumeration_cap
    if p.n_terminals() <= cap:
        answers = [oracle.contains(t) for t in p.terminals()]
        if False in answers:
            return TerminalCheck(False, "enumerated")
        if all(answers):
            return TerminalCheck(True, "enumerated")
    if oracle.absorbs(suffix):
        return TerminalCheck(True, "absorbed")
    log.warning("terminals of %s unverified against %s", type(p).__name__, oracle)
    return TerminalCheck(False, "unverified")


def meet_dense(p: Condition, oracle: DenseOracle) -> Condition:
    """Extend p so that every terminal lies inside D"""
    if oracle.alphabet != p.alphabet:
        msg = f"oracle alphabet {oracle.alphabet} differs from tree alphabet {p.alphabet}"
        raise ConstructionError(msg)
    sweep = thread_suffix(p, oracle)
    log.debug("meet %s: suffix %s (%s)", oracle, word_text(sweep.suffix), sweep.method)
    return p.graft_common(sweep.suffix)


def generic_stage(p: Condition, oracles: Sequence[DenseOracle]) -> Condition:
    """Meet each dense set in turn"""
    for oracle in oracles:
        p = meet_dense(p, oracle)
    return p


def end_extends(q: Tree, p: Tree) -> bool:
    """q ≤ p: q cut at the height of p is exactly p"""
    if q.height < p.height:
        return False
    if isinstance(q, SilverTree) and isinstance(p, SilverTree):
        return q.pattern[: p.height] == p.pattern
    cut = {t[: p.height] for t in q.terminals()}
    return cut == set(p.terminals())


# ---------------------------------------------------------------------------
# The delta-dense tree inside a comeager set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoundRecord:
    round: int
    oracle: str
    suffix: Word
    cube: int
    lev: int
    ht: int
    ratio: Fraction
    bound: Optional[Fraction]
    terminals: TerminalCheck

    @property
    def ratio_ok(self) -> bool:
        return self.bound is None or self.ratio >= self.bound


@dataclass(frozen=True)
class DeltaTreeResult:
    tree: SilverTree
    stages: Tuple[SilverTree, ...]
    records: Tuple[RoundRecord, ...]
    delta: Fraction

    @property
    def ok(self) -> bool:
        return all(r.ratio_ok and r.terminals.ok for r in self.records)

    def audit(self) -> pd.DataFrame:
        """Columns round, lev, ht, ratio, bound plus the check outcomes"""
        return pd.DataFrame(
            [
                {
                    "round": r.round,
                    "lev": r.lev,
                    "ht": r.ht,
                    "ratio": str(r.ratio),
                    "bound": "" if r.bound is None else str(r.bound),
                    "ratio_ok": r.ratio_ok,
                    "terminals_ok": r.terminals.ok,
                    "check": r.terminals.method,
                    "oracle": r.oracle,
                    "suffix": word_text(r.suffix),
                    "cube": r.cube,
                }
                for r in self.records
            ]
        )


def _oracle_at(oracles: Sequence[DenseOracle], i: int) -> DenseOracle:
    # past the end the sequence stays at its last set
    return oracles[min(i, len(oracles) - 1)]


def build_delta_tree(
    oracles: Sequence[DenseOracle], delta: Fraction, rounds: int
) -> DeltaTreeResult:
    """
    Silver tree T_rounds with N_t ⊆ D_rounds for every terminal t

    Round 0 picks t_∅ = extend_0(⟨⟩) and hangs the cube of width |t_∅|
    (width 1 when t_∅ is empty). Round n + 1 threads r_J through all
    terminals into D_{n+1} and hangs a cube of height n·|t⌢r_J|. Round n
    is audited against |Lev(T_n)| / ht(T_n) >= delta(1 - 1/n) for n >= 1.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be at least 1, got {rounds}")
    if not oracles:
        raise ValueError("need at least one dense oracle")
    delta = Fraction(delta)
    if not 0 <= delta <= 1:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    alphabet = oracles[0].alphabet

    first = _oracle_at(oracles, 0)
    stem = first.checked_extend(())
    width = max(len(stem), 1)
    tree = SilverTree(alphabet, stem).graft_cube(width)
    records = [
        RoundRecord(
            0,
            first.to_text(),
            stem,
            width,
            len(tree.levels()),
            tree.height,
            tree.ratio(),
            None,
            check_terminals(SilverTree(alphabet, stem), first, stem),
        )
    ]
    stages = [tree]

    for n in range(rounds):
        oracle = _oracle_at(oracles, n + 1)
        sweep = thread_suffix(tree, oracle)
        threaded = tree.graft_common(sweep.suffix)
        check = check_terminals(threaded, oracle, sweep.suffix)
        cube = n * threaded.height
        tree = threaded.graft_cube(cube)
        bound = delta * (1 - Fraction(1, n + 1))
        record = RoundRecord(
            n + 1,
            oracle.to_text(),
            sweep.suffix,
            cube,
            len(tree.levels()),
            tree.height,
            tree.ratio(),
            bound,
            check,
        )
        log.info(
            "round %d: ht=%d lev=%d ratio=%s bound=%s",
            record.round,
            record.ht,
            record.lev,
            record.ratio,
            bound,
        )
        records.append(record)
        stages.append(tree)

    return DeltaTreeResult(tree, tuple(stages), tuple(records), delta)


# ---------------------------------------------------------------------------
# Spine map between a Silver tree and binary trees
# ---------------------------------------------------------------------------


class SpineMap:
    """
    The map φ̄ from splitting nodes of a binary Silver tree to binary words

    A splitting node t of the source tree has length a_i for a free
    coordinate a_i, and φ̄(t) = ⟨t(a_0), ..., t(a_{i-1})⟩. The expansion φ
    reads a branch at the free coordinates.
    """

    def __init__(self, source: PartialAssignment):
        if source.alphabet != 2:
            raise ValueError("spine maps are defined for binary Silver conditions")
        if not source.is_silver:
            raise ValueError("the source of a spine map must be a Silver condition")
        self.source = source
        self._free: List[int] = []

    def free_coordinate(self, i: int) -> int:
        """a_i, the i-th free coordinate of the source"""
        it = None
        while len(self._free) <= i:
            if it is None:
                it = self.source.free.iter_members(self._free[-1] + 1 if self._free else 0)
            self._free.append(next(it))
        return self._free[i]

    def free_count_below(self, length: int) -> int:
        i = 0
        while self.free_coordinate(i) < length:
            i += 1
        return i

    def image(self, node: Sequence[int]) -> Word:
        """φ̄(node) for a splitting node of the source tree"""
        node = tuple(node)
        i = self.free_count_below(len(node))
        if self.free_coordinate(i) != len(node):
            raise ValueError(f"{word_text(node)} is not a splitting node")
        for n, v in enumerate(self.source.pattern(len(node))):
            if v is not None and node[n] != v:
                raise ValueError(f"{word_text(node)} is not in the source tree")
        return tuple(node[self.free_coordinate(j)] for j in range(i))

    def expand(self, word: Sequence[int]) -> Word:
        """φ on a branch prefix: the values it takes at free coordinates"""
        word = tuple(word)
        return tuple(word[self.free_coordinate(j)] for j in range(self.free_count_below(len(word))))

    def lift(self, word: Sequence[int]) -> Word:
        """The splitting node of length a_m whose free choices are `word`"""
        m = len(word)
        length = self.free_coordinate(m)
        choices = iter(word)
        return tuple(
            next(choices) if v is None else v for v in self.source.pattern(length)
        )

    def preimage(self, q: Tree) -> Tree:
        """Nodes of the source tree up to length a_m whose choices lie in q"""
        length = self.free_coordinate(q.height)
        if isinstance(q, SilverTree):
            entries = iter(q.pattern)
            return SilverTree(
                2, tuple(next(entries) if v is None else v for v in self.source.pattern(length))
            )
        return FiniteTree.from_words((self.lift(t) for t in q.terminals()), 2)

    def ratio(self, q: Tree) -> Fraction:
        """|Lev(φ̄⁻¹ q)| / ht(φ̄⁻¹ q) without building the preimage"""
        height = self.free_coordinate(q.height)
        if height == 0:
            return Fraction(0)
        return Fraction(len(q.split_depths()), height)

    def check(self, depth: int) -> bool:
        """φ̄ invariants on the source tree cut at `depth`"""
        tree = SilverTree.from_assignment(self.source, depth)
        if tree.n_terminals() > get_settings().enumeration_cap:
            raise CapExceededError("spine check", tree.n_terminals(), get_settings().enumeration_cap)
        stem = tree.spl_succ(())
        if stem is not None and self.image(stem) != ():
            return False
        for t in tree.splitting_nodes():
            for j in (0, 1):
                succ = tree.spl_succ(t + (j,))
                if succ is not None and self.image(succ) != self.image(t) + (j,):
                    return False
        images = [self.expand(t) for t in tree.terminals()]
        return len(set(images)) == len(images)


def densify_bound(delta: Fraction, k: int) -> Fraction:
    return Fraction(delta) * (1 - Fraction(1, 2 ** k))


def densify(p: Condition, delta: Fraction, k: int, spine: SpineMap) -> Condition:
    """
    Least cube extension q of p with ratio(φ̄⁻¹ q) >= delta(1 - 2^-k)

    The ratio after adding h levels is (|split(p)| + h) / a_{ht(p) + h}.
    """
    if k < 0:
        raise ValueError(f"k must be a natural number, got {k}")
    bound = densify_bound(delta, k)
    if spine.ratio(p) >= bound:
        return p
    splits = len(p.split_depths())
    cap = get_settings().search_cap
    for h in range(1, cap + 1):
        height = spine.free_coordinate(p.height + h)
        if Fraction(splits + h, height) >= bound:
            log.debug("densify k=%d: added %d levels", k, h)
            return p.graft_cube(h)
    raise CapExceededError("densify extension height", cap + 1, cap)


def densify_audit(
    p: Condition, delta: Fraction, ks: Sequence[int], spine: SpineMap
) -> Tuple[Condition, pd.DataFrame]:
    """Apply densify for each k in turn, recording the ratio after each step"""
    rows = []
    for k in ks:
        before = p.height
        p = densify(p, delta, k, spine)
        ratio = spine.ratio(p)
        bound = densify_bound(delta, k)
        rows.append(
            {
                "k": k,
                "added": p.height - before,
                "ht": spine.free_coordinate(p.height),
                "ratio": str(ratio),
                "bound": str(bound),
                "ok": ratio >= bound,
            }
        )
    return p, pd.DataFrame(rows)
