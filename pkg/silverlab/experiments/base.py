import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import pandas as pd

from silverlab.config import Settings, get_settings
from silverlab.exceptions import ScenarioError
from silverlab.speclang import Directive, ScenarioDoc

log = logging.getLogger(__name__)

COLUMNS = ("check", "property", "verdict", "ok")
_MISSING = object()


@dataclass(frozen=True)
class ExperimentResult:
    name: str
    frame: pd.DataFrame
    valid: bool
    lines: Tuple[str, ...]


def argument(
    doc: Optional[ScenarioDoc],
    positional: Sequence[Any],
    keywords: dict,
    index: int,
    key: str,
    kind=object,
    default: Any = _MISSING,
) -> Any:
    """
    Look up one experiment parameter

    The keyword wins over the positional slot. With neither present the
    first binding of the document with a value of type `kind` is used,
    then `default`.
    """
    if key in keywords and keywords[key] is not None:
        value = keywords[key]
    elif index is not None and index < len(positional):
        value = positional[index]
    elif default is not _MISSING:
        return default
    elif doc is not None and kind is not object:
        return doc.first(kind)[1]
    else:
        raise ScenarioError(f"missing argument {key!r}")
    if not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ScenarioError(f"argument {key!r} must be a {name}, got {value!r}")
    return value


class ExperimentBase(ABC):
    """
    Attributes
    ----------
    name: str
        Name of the `run` directive and of the CLI subcommand (with "_"
        written as "-") that select this experiment

    cites: str
        The property every check of this experiment instantiates. It is
        repeated in the `property` column and on every report line

    seed: int = 0
        Seed for randomised sweeps; identical seeds give identical tables

    settings: Settings
        Limits and the data path, read from the environment
    """

    name: str
    cites: str
    seed: int = 0
    settings: Settings

    def __init__(self, seed: int = 0, settings: Optional[Settings] = None):
        self.seed = seed
        self.settings = settings if settings is not None else get_settings()

    @classmethod
    @abstractmethod
    def from_scenario(
        cls, doc: Optional[ScenarioDoc], positional: Sequence[Any], keywords: dict
    ) -> "ExperimentBase":
        """
        Build the experiment from evaluated arguments

        Parameters
        ----------
        doc : Optional[ScenarioDoc]
            Document used to fill missing arguments from its bindings
        positional : Sequence[Any]
            Positional arguments, already evaluated
        keywords : dict
            Keyword arguments, already evaluated
        """
        pass

    @classmethod
    def from_directive(
        cls, doc: ScenarioDoc, directive: Directive, **options
    ) -> "ExperimentBase":
        positional, keywords = doc.arguments(directive.args)
        keywords.update({k: v for k, v in options.items() if v is not None})
        return cls.from_scenario(doc, positional, keywords)

    @classmethod
    def from_document(cls, doc: ScenarioDoc, **options) -> List["ExperimentBase"]:
        """
        One experiment per `run <name>(...)` directive of the document, or
        a single one built from its bindings when there is no directive
        """
        directives = [d for d in doc.directives if d.name == cls.name]
        if directives:
            return [cls.from_directive(doc, d, **options) for d in directives]
        keywords = {k: v for k, v in options.items() if v is not None}
        return [cls.from_scenario(doc, [], keywords)]

    @classmethod
    @abstractmethod
    def example(cls) -> "ExperimentBase":
        """A small instance that runs in well under a second"""
        pass

    @abstractmethod
    def run(self) -> Any:
        """
        The `run` method computes the raw result of the experiment

        Returns
        -------
        data : Any
            Whatever the library returned, in its own types
        """
        pass

    @abstractmethod
    def normalize(self, data: Any) -> pd.DataFrame:
        """
        The `normalize` method turns the raw result into one row per check

        Parameters
        ----------
        data : Any
            The output of `run`

        Returns
        -------
        df : pd.DataFrame
            Has at least the columns "check", "property", "verdict" and
            "ok", plus experiment-specific detail columns
        """
        pass

    def row(self, check: str, verdict: str, ok: bool, **details) -> dict:
        out = {"check": check, "property": self.cites, "verdict": verdict, "ok": bool(ok)}
        out.update(details)
        return out

    def validate(self, df: pd.DataFrame) -> bool:
        """
        The `validate` method checks that the table is well formed and that
        every check passed

        Returns
        -------
        validated : bool
        """
        missing = [c for c in COLUMNS if c not in df.columns]
        if missing:
            msg = f"{type(self).__name__} table is missing columns {missing}"
            raise ValueError(msg)
        if df.shape[0] == 0:
            return False
        return bool(df["ok"].all())

    def report(self, df: pd.DataFrame) -> List[str]:
        return [
            f"{r.check}: {r.verdict} [{r.property}]" for r in df.itertuples(index=False)
        ]

    def _filepath(self, label: Optional[str] = None) -> Path:
        """datapath/ClassName/label.csv"""
        folder = self.settings.ensure_datapath() / type(self).__name__
        if not folder.exists():
            folder.mkdir(parents=True)
        return folder / f"{label or self.name}.csv"

    def put(self, df: pd.DataFrame, label: Optional[str] = None) -> Path:
        """
        Store the table as CSV under the data path

        Returns
        -------
        path : Path
            Where the table was written
        """
        fp = self._filepath(label)
        df.to_csv(fp, index=False)
        log.info("stored %d rows at %s", df.shape[0], fp)
        return fp

    def execute(self, store: bool = False, label: Optional[str] = None) -> ExperimentResult:
        """run -> normalize -> validate, then `put` when `store` is set"""
        data = self.run()
        df = self.normalize(data)
        valid = self.validate(df)
        if store:
            self.put(df, label)
        log.debug("%s: %d checks, valid=%s", self.name, df.shape[0], valid)
        return ExperimentResult(self.name, df, valid, tuple(self.report(df)))
