"""
Run configuration for tail scans: built-in defaults, flat key=value files and
command-line overrides, plus the complex-number notation used on the command line.
"""
from __future__ import annotations

import os
import re
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from backend.errors import ParameterError
from backend.huygens import HUYGENS_TOL, RATE_TOL, TailSplit
from backend.kernels import CosmologyParams, lattice_mass
from backend.reports import OUT_PATH
from backend.wave_core import RadialBump

DEFAULTS_PATH = Path(__file__).resolve().parent.parent / "data" / "config" / "defaults.cfg"
THREADS_ENV = "DSH_THREADS"
FORMATS = ("csv", "json")

_BARE_UNIT = re.compile(r"(^|[+-])j")


def parse_complex(text: str) -> complex:
    """'0.3', '0.25i', '-i', '1+0.5i' (or with j) -> complex."""
    s = str(text).strip().replace(" ", "").replace("i", "j")
    s = _BARE_UNIT.sub(r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError:
        raise ParameterError(f"cannot parse {text!r} as a complex number") from None


def parse_mass(text: str, H: float) -> complex:
    """
    Complex value that may be written in units of H: '0.25iH', 'iH', '-H/2',
    '3H/2', '(1+i)H'. Plain numbers are taken as they are.
    """
    s = str(text).strip().replace(" ", "")
    if "H" not in s:
        return parse_complex(s)
    factor, _, divisor = s.partition("H")
    factor = factor.strip("()*")
    if factor in ("", "+"):
        scale = 1.0 + 0j
    elif factor == "-":
        scale = -1.0 + 0j
    else:
        scale = parse_complex(factor)
    if divisor:
        if not divisor.startswith("/"):
            raise ParameterError(f"cannot parse {text!r}: expected '/<number>' after H")
        scale /= parse_complex(divisor[1:])
    return scale * H


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _threads_from_env() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParameterError(f"{THREADS_ENV}={raw!r} is not an integer") from None


@dataclass(frozen=True)
class RunConfig:
    """Tail-scan settings; keys of the config file are the field names."""

    H: float = 1.0
    m: complex = 0.25j
    ell: Optional[int] = None       # lattice index; overrides m when set
    eps: float = 0.1
    amp: float = 1.0
    t_min: float = 3.0
    t_max: float = 12.0
    t_steps: int = 20
    split: str = TailSplit.FIRST.value
    huygens_tol: float = HUYGENS_TOL
    rate_tol: float = RATE_TOL
    output: str = OUT_PATH
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        if self.split not in {s.value for s in TailSplit}:
            raise ParameterError(f"split must be 'first' or 'second', got {self.split!r}")
        if self.format not in FORMATS:
            raise ParameterError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.t_steps < 1 or self.t_max < self.t_min:
            raise ParameterError(f"bad time grid [{self.t_min}, {self.t_max}] x {self.t_steps}")
        if not (self.huygens_tol > 0 and self.rate_tol > 0):
            raise ParameterError("tolerances must be positive")

    @property
    def mass(self) -> complex:
        if self.ell is not None:
            return lattice_mass(self.ell, self.H)
        return self.m

    @property
    def cosmology(self) -> CosmologyParams:
        return CosmologyParams(self.H, self.mass)

    @property
    def bump(self) -> RadialBump:
        return RadialBump(self.eps, self.amp)

    @property
    def tail_split(self) -> TailSplit:
        return TailSplit(self.split)

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    @classmethod
    def from_mapping(cls, values: Mapping[str, object], base: Optional["RunConfig"] = None) -> "RunConfig":
        """Overlay string or typed values on `base`; None values are ignored."""
        base = base or cls()
        known = {f.name: f for f in fields(cls)}
        updates = {}
        for key, value in values.items():
            if value is None:
                continue
            if key not in known:
                raise ParameterError(f"unknown config key {key!r}")
            updates[key] = _convert(key, value)
        if "m" in values and values["m"] is not None:
            H = updates.get("H", base.H)
            updates["m"] = parse_mass(values["m"], H) if isinstance(values["m"], str) else complex(values["m"])
        return replace(base, **updates)

    @classmethod
    def from_file(cls, path, base: Optional["RunConfig"] = None) -> "RunConfig":
        return cls.from_mapping(_read_pairs(path), base)

    @classmethod
    def load(cls, path=None, overrides: Optional[Mapping[str, object]] = None) -> "RunConfig":
        """
        Defaults, then the config file (if any), then explicit overrides.

        Layers are merged before conversion, so a mass written in units of H
        uses the final H whichever layer set it.
        """
        values = dict(_read_pairs(path)) if path is not None else {}
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(values, cls(threads=_threads_from_env()))

    def to_lines(self) -> list:
        lines = []
        for key, value in asdict(self).items():
            if value is None:
                continue
            if key == "m":
                value = format_complex(value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key}={value}")
        return lines

    def to_dict(self) -> dict:
        data = asdict(self)
        data["m"] = format_complex(self.m)
        return data


def _convert(key: str, value):
    if key == "m" or not isinstance(value, str):
        return value
    try:
        if key in ("t_steps", "threads", "ell"):
            return int(value)
        if key in ("split", "output", "format"):
            return value
        return float(value)
    except ValueError:
        raise ParameterError(f"config key {key!r}: cannot parse {value!r}") from None


def _read_pairs(path) -> dict:
    """key=value lines of a config file; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{number}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values
