import os
from pathlib import Path
from typing import Optional


def _int_from_env(key: str, default: int) -> int:
    raw = os.environ.get(key, None)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        msg = f"Environment variable {key} must be an integer, got {raw!r}"
        raise ValueError(msg)
    if value < 1:
        msg = f"Environment variable {key} must be positive, got {value}"
        raise ValueError(msg)
    return value


class Settings:
    """
    Runtime limits and storage location, read from the environment

    Attributes
    ----------
    datapath: Path
        Directory where experiments `put` their tables. Set with
        `SILVERLAB_DATAPATH`, defaults to `~/.silverlab-data`

    brute_force_cap: int = 20
        Exhaustive searches enumerate at most `2 ** brute_force_cap`
        completions. Set with `SILVERLAB_BRUTE_FORCE_CAP`

    triple_horizon: int = 10000
        Horizon used when scanning a free set for consecutive triples.
        Set with `SILVERLAB_TRIPLE_HORIZON`

    align_cap: int = 1000000
        Largest comparison window used when aligning two eventually
        periodic streams. Set with `SILVERLAB_ALIGN_CAP`

    search_cap: int = 4096
        Largest extension height tried by densification and witness
        searches. Set with `SILVERLAB_SEARCH_CAP`

    period_cap: int = 100000
        Largest period a normalized coalition skeleton may have.
        Set with `SILVERLAB_PERIOD_CAP`

    enumeration_cap: int = 65536
        Largest number of terminal nodes walked one by one before a
        construction falls back to an absorbing certificate. Set with
        `SILVERLAB_ENUMERATION_CAP`
    """

    brute_force_cap: int = 20
    triple_horizon: int = 10000
    align_cap: int = 1000000
    search_cap: int = 4096
    period_cap: int = 100000
    enumeration_cap: int = 65536
    datapath: Path

    def __init__(self, datapath: Optional[Path] = None):
        if datapath is not None:
            self.datapath = Path(datapath)
        elif "SILVERLAB_DATAPATH" in os.environ.keys():
            self.datapath = Path(os.environ["SILVERLAB_DATAPATH"])
        else:
            self.datapath = Path.home() / ".silverlab-data"

        self.brute_force_cap = _int_from_env(
            "SILVERLAB_BRUTE_FORCE_CAP", Settings.brute_force_cap
        )
        self.triple_horizon = _int_from_env(
            "SILVERLAB_TRIPLE_HORIZON", Settings.triple_horizon
        )
        self.align_cap = _int_from_env("SILVERLAB_ALIGN_CAP", Settings.align_cap)
        self.search_cap = _int_from_env("SILVERLAB_SEARCH_CAP", Settings.search_cap)
        self.period_cap = _int_from_env("SILVERLAB_PERIOD_CAP", Settings.period_cap)
        self.enumeration_cap = _int_from_env(
            "SILVERLAB_ENUMERATION_CAP", Settings.enumeration_cap
        )

    def ensure_datapath(self) -> Path:
        """Create the storage directory if it does not exist yet"""
        if not self.datapath.exists():
            self.datapath.mkdir(parents=True)
        return self.datapath


def get_settings() -> Settings:
    """Settings as currently configured by the environment"""
    return Settings()
