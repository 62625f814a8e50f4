"""Shared enums, error types and the hypothesis label used across the package."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class ValidationError(ValueError):
    """Rejected input: malformed file, inconsistent sizes, out-of-domain argument."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class Twist(enum.Enum):
    """Boundary phase of a finite ring: periodic (0) or antiperiodic (pi)."""

    PBC = "pbc"
    ABC = "abc"

    @property
    def theta(self) -> float:
        return 0.0 if self is Twist.PBC else math.pi

    @property
    def q(self) -> int:
        """Boundary phase factor exp(i*theta); real (+1 or -1) for the two twists."""
        return 1 if self is Twist.PBC else -1

    @classmethod
    def parse(cls, text: str) -> "Twist":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValidationError(f"unknown twist {text!r}, expected 'pbc' or 'abc'") from None

    def __str__(self) -> str:
        return self.value


class Statistics(enum.Enum):
    """Quasi-particle exchange statistics; `sign` is the factor in e_L = sign*(nu/2)*S_L."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def sign(self) -> int:
        return 1 if self is Statistics.BOSON else -1

    @classmethod
    def parse(cls, text: str) -> "Statistics":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValidationError(
                f"unknown statistics {text!r}, expected 'boson' or 'fermion'"
            ) from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Hypothesis:
    """One of the four quasi-free readings of an energy series."""

    statistics: Statistics
    twist: Twist

    @property
    def label(self) -> str:
        return f"{self.statistics.value}-{self.twist.value}"

    @classmethod
    def parse(cls, text: str) -> "Hypothesis":
        parts = text.strip().lower().split("-")
        if len(parts) != 2:
            raise ValidationError(f"unknown hypothesis {text!r}, expected e.g. 'boson-pbc'")
        return cls(Statistics.parse(parts[0]), Twist.parse(parts[1]))

    def __str__(self) -> str:
        return self.label


ALL_HYPOTHESES: tuple[Hypothesis, ...] = (
    Hypothesis(Statistics.BOSON, Twist.PBC),
    Hypothesis(Statistics.FERMION, Twist.PBC),
    Hypothesis(Statistics.BOSON, Twist.ABC),
    Hypothesis(Statistics.FERMION, Twist.ABC),
)
