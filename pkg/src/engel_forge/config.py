"""Size thresholds and their environment override.

``ENGEL_FORGE_THRESHOLDS`` accepts a comma-separated list of ``key=value``
pairs, for example ``enumeration=50000,quotient=20000``.  Recognised keys are
``enumeration`` (largest group whose elements may be listed), ``quotient``
(largest coset-action degree) and ``chain_cap`` (longest commutator or
derived chain before giving up).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import InvalidInputError

ENV_VAR = "ENGEL_FORGE_THRESHOLDS"


@dataclass(frozen=True)
class Thresholds:
    enumeration: int = 200_000
    quotient: int = 100_000
    chain_cap: int = 64

    @classmethod
    def from_string(cls, text: str, base: "Thresholds | None" = None) -> "Thresholds":
        base = base or cls()
        known = {f.name for f in fields(cls)}
        updates = {}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                raise InvalidInputError(f"bad threshold entry {item!r}")
            try:
                updates[key] = int(value)
            except ValueError:
                raise InvalidInputError(f"threshold {key} must be an integer") from None
            if updates[key] <= 0:
                raise InvalidInputError(f"threshold {key} must be positive")
        return replace(base, **updates)

    @classmethod
    def from_env(cls) -> "Thresholds":
        text = os.environ.get(ENV_VAR, "")
        return cls.from_string(text) if text else cls()


_current = Thresholds.from_env()


def get_thresholds() -> Thresholds:
    return _current


def set_thresholds(value: Thresholds) -> Thresholds:
    """Install new process-wide thresholds; returns the previous ones."""
    global _current
    previous, _current = _current, value
    return previous
