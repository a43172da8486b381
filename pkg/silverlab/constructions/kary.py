"""
Monochromatic subcylinders for K-valued choice functions

Each stage splits the current block of candidate outcomes in two and
shrinks the cylinder until F lands in one half. With the default halving,
at most ceil(log2 K) stages leave a single outcome.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from silverlab.coalitions import ChoiceFunction, check_cap
from silverlab.exceptions import AlphabetMismatchError
from silverlab.seqcore import Cylinder, PartialAssignment

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Stage:
    block: Tuple[int, ...]
    kept: Tuple[int, ...]
    fixed: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class MonochromeResult:
    cylinder: Cylinder
    value: int
    stages: Tuple[Stage, ...]

    @property
    def fixed_coordinates(self) -> Tuple[int, ...]:
        return tuple(n for stage in self.stages for n, _ in stage.fixed)


def _outcomes(F: ChoiceFunction, f: PartialAssignment) -> Iterable[Tuple[dict, int]]:
    """(completion, F value) over all completions of the free support, lexicographically"""
    open_coords = [s for s in F.support if f.is_free(s)]
    check_cap(F.alphabet, len(open_coords))
    base = {s: f.value(s) for s in F.support if not f.is_free(s)}
    for votes in itertools.product(range(F.alphabet), repeat=len(open_coords)):
        fill = dict(zip(open_coords, votes))
        yield fill, F.decide(tuple(fill.get(s, base.get(s)) for s in F.support))


def _split(block: Tuple[int, ...], side: Optional[Iterable[int]]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    if side is not None:
        side = frozenset(side)
        left = tuple(v for v in block if v in side)
        right = tuple(v for v in block if v not in side)
        if left and right:
            return left, right
    half = len(block) // 2
    return block[:half], block[half:]


def monochromatize(
    F: ChoiceFunction,
    c: Cylinder,
    partitions: Sequence[FrozenSet[int]] = (),
) -> MonochromeResult:
    """
    Subcylinder of c on which F is constant

    `partitions[i]` names one side of the split used at stage i; a missing
    or non-splitting entry falls back to halving the current block. Only
    free coordinates of F's support are ever fixed.
    """
    if F.alphabet != c.alphabet:
        raise AlphabetMismatchError(F.alphabet, c.alphabet)
    f = c.assignment
    block = tuple(range(F.alphabet))
    stages: List[Stage] = []

    while len(block) > 1:
        i = len(stages)
        left, right = _split(block, partitions[i] if i < len(partitions) else None)
        values = {v for _, v in _outcomes(F, f)}
        if values <= set(left) or values <= set(right):
            kept = left if values <= set(left) else right
            stages.append(Stage(block, kept, ()))
            block = kept
            continue

        fill, value = next(iter(_outcomes(F, f)))
        kept = left if value in left else right
        fixed = []
        for n in sorted(fill):
            f = f.fix({n: fill[n]})
            fixed.append((n, fill[n]))
            if all(v in kept for _, v in _outcomes(F, f)):
                break
        log.debug("stage %d: kept %s after fixing %s", i, kept, fixed)
        stages.append(Stage(block, kept, tuple(fixed)))
        block = kept

    return MonochromeResult(Cylinder(f), block[0], tuple(stages))


def verify_monochrome(F: ChoiceFunction, result: MonochromeResult) -> bool:
    """F takes only `result.value` on the returned cylinder, which is still Silver"""
    f = result.cylinder.assignment
    return f.is_silver and all(v == result.value for _, v in _outcomes(F, f))
