"""
Exception hierarchy

Outcomes that are answers (a disagreement position, a relevant coalition,
an invalid derivation step) are returned as result objects. The classes
below are raised only when an operation cannot produce an answer.
"""
from typing import Optional, Sequence


class SilverlabError(Exception):
    pass


class AlphabetMismatchError(SilverlabError, ValueError):
    """A sequence and a condition (or two streams) use different alphabets"""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"alphabet mismatch: {left!r} vs {right!r}")


class CapExceededError(SilverlabError):
    """An exhaustive search would exceed the configured cap"""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"cap exceeded: {what} needs {size}, cap is {cap}")


class ConstructionError(SilverlabError):
    """A recursive construction was fed something it cannot use"""

    def __init__(self, message: str, word: Optional[Sequence[int]] = None):
        self.word = None if word is None else tuple(word)
        if self.word is not None:
            message = f"{message} (word {''.join(map(str, self.word)) or '<empty>'})"
        super().__init__(message)


class AlignmentError(SilverlabError):
    """Two eventually periodic streams cannot be compared within the cap"""


class VacuousRestrictionError(SilverlabError):
    """The restricted set N_f ∩ B is empty at the depth bound"""


class InsufficientTriplesError(SilverlabError):
    """Not enough consecutive free triples below the horizon"""

    def __init__(self, needed: int, found: int, horizon: int):
        self.needed = needed
        self.found = found
        self.horizon = horizon
        super().__init__(
            f"need {needed} consecutive free triples below {horizon}, found {found}"
        )


class VerificationError(SilverlabError):
    """A certificate produced by a construction failed its own check"""


class DerivationError(SilverlabError, ValueError):
    """A derivation certificate is malformed"""


class SpecParseError(SilverlabError, ValueError):
    """
    Lexical, syntactic or name-resolution error in a scenario document

    Attributes
    ----------
    line: int
        1-based line of the failure
    column: int
        0-based column where parsing stopped
    expected: str
        What the parser was looking for
    start_column: int
        0-based column where the innermost construct being parsed began
    """

    def __init__(self, line: int, column: int, expected: str, start_column=None):
        self.line = line
        self.column = column
        self.expected = expected
        self.start_column = column if start_column is None else start_column
        super().__init__(
            "error:{}:{}: expected {}".format(line, column + 1, expected)
        )


class ScenarioError(SilverlabError, ValueError):
    """A well-formed scenario document binds a value of the wrong shape"""
