"""
Dense open sets given as extension oracles

An oracle for an open dense D ⊆ K^N maps every word s to an extension s'
with N_{s'} ⊆ D. Presets may also answer the node predicate "N_t ⊆ D"
and say when a suffix alone forces membership whatever precedes it.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from silverlab.exceptions import ConstructionError
from silverlab.seqcore import Word, word_text

log = logging.getLogger(__name__)


def _occurs(pattern: Word, word: Word) -> bool:
    n = len(pattern)
    if n == 0:
        return True
    return any(word[i : i + n] == pattern for i in range(len(word) - n + 1))


class DenseOracle(ABC):
    """
    Attributes
    ----------
    alphabet: int = 2
        Words are over {0, ..., alphabet - 1}
    """

    alphabet: int = 2

    @abstractmethod
    def extend(self, word: Sequence[int]) -> Word:
        """Some s' extending `word` with N_{s'} ⊆ D"""

    def contains(self, word: Sequence[int]) -> Optional[bool]:
        """Node predicate N_t ⊆ D, or None when the oracle cannot decide"""
        return None

    def absorbs(self, suffix: Sequence[int]) -> bool:
        """True when N_{t⌢suffix} ⊆ D for every word t"""
        return False

    def absorbing_word(self) -> Optional[Word]:
        """A word that `absorbs`, if the oracle knows one"""
        return None

    @abstractmethod
    def to_text(self) -> str:
        pass

    def __str__(self) -> str:
        return self.to_text()

    def checked_extend(self, word: Sequence[int]) -> Word:
        """`extend` with the oracle contract enforced"""
        word = tuple(word)
        out = tuple(self.extend(word))
        if out[: len(word)] != word:
            raise ConstructionError(f"oracle {self} returned a non-extension", word)
        if any(not 0 <= v < self.alphabet for v in out):
            raise ConstructionError(f"oracle {self} left the alphabet", word)
        if self.contains(out) is False:
            raise ConstructionError(f"oracle {self} extension fails its own predicate", word)
        return out


@dataclass(frozen=True)
class IdentityOracle(DenseOracle):
    """D is the whole space"""

    alphabet: int = 2

    def extend(self, word):
        return tuple(word)

    def contains(self, word):
        return True

    def absorbs(self, suffix):
        return True

    def absorbing_word(self):
        return ()

    def to_text(self):
        return "identity"


@dataclass(frozen=True)
class PatternOracle(DenseOracle):
    """D = sequences in which `pattern` occurs; extension appends it"""

    pattern: Word
    alphabet: int = 2

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(int(v) for v in self.pattern))
        if not self.pattern:
            raise ValueError("pattern oracles need a nonempty pattern")
        if any(not 0 <= v < self.alphabet for v in self.pattern):
            raise ValueError(f"pattern {self.pattern} leaves the alphabet {self.alphabet}")

    def extend(self, word):
        word = tuple(word)
        if _occurs(self.pattern, word):
            return word
        return word + self.pattern

    def contains(self, word):
        return _occurs(self.pattern, tuple(word))

    def absorbs(self, suffix):
        return _occurs(self.pattern, tuple(suffix))

    def absorbing_word(self):
        return self.pattern

    def to_text(self):
        return f'pattern("{word_text(self.pattern, self.alphabet)}")'


def ones(k: int, alphabet: int = 2) -> PatternOracle:
    """A run of k ones"""
    if k < 1:
        raise ValueError(f"run length must be positive, got {k}")
    return RunOracle((1,) * k, alphabet)


@dataclass(frozen=True)
class RunOracle(PatternOracle):
    def to_text(self):
        return f"ones({len(self.pattern)})"


@dataclass(frozen=True)
class AppendOracle(DenseOracle):
    """
    Extension always appends `suffix` unless the word already ends with it

    D is what the words ending in `suffix` generate. The predicate only
    knows the positive side: a word in which `suffix` occurs is inside,
    any other word is undecided.
    """

    suffix: Word
    alphabet: int = 2

    def __post_init__(self):
        object.__setattr__(self, "suffix", tuple(int(v) for v in self.suffix))

    def extend(self, word):
        word = tuple(word)
        if self.suffix and word[-len(self.suffix) :] == self.suffix:
            return word
        return word + self.suffix

    def contains(self, word):
        return True if _occurs(self.suffix, tuple(word)) else None

    def absorbs(self, suffix):
        return _occurs(self.suffix, tuple(suffix))

    def absorbing_word(self):
        return self.suffix

    def to_text(self):
        return f'append("{word_text(self.suffix, self.alphabet)}")'


def random_family(
    rng: np.random.Generator, count: int, max_len: int = 4, alphabet: int = 2
) -> List[PatternOracle]:
    """`count` pattern oracles with seeded random patterns of length 1..max_len"""
    out = []
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        pattern = tuple(int(v) for v in rng.integers(0, alphabet, size=length))
        out.append(PatternOracle(pattern, alphabet))
    return out


def preset(name: str, index: int = 0, alphabet: int = 2) -> DenseOracle:
    """
    Oracle named by a CLI preset

    `identity`, `ones` (index + 1 ones, so D_i grows with i), `ones:K`,
    `pattern:0110`, `append:11`.
    """
    kind, _, arg = name.partition(":")
    if kind == "identity":
        return IdentityOracle(alphabet)
    if kind == "ones":
        return ones(int(arg) if arg else index + 1, alphabet)
    if kind == "pattern":
        return PatternOracle(tuple(int(c) for c in arg), alphabet)
    if kind == "append":
        return AppendOracle(tuple(int(c) for c in arg), alphabet)
    msg = f"unknown oracle preset {name!r}"
    raise ValueError(msg)


def describe(oracles: Sequence[DenseOracle]) -> Tuple[str, ...]:
    return tuple(o.to_text() for o in oracles)
