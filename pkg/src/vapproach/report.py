"""Violation records, law reports and search budgets shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class QuantaleStructureError(ValueError):
    """A quantale or map table is malformed (missing entry, unknown element)."""


class CapabilityError(ValueError):
    """An operation's precondition on its quantale or inputs does not hold."""


class NotMonotoneError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Violation:
    """One failed law instance. ``witness`` holds labels only, never raw indices."""

    law: str
    witness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self):
        return {"law": self.law, "witness": self.witness}

    def __str__(self):
        items = ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.law}: {items}"


@dataclass
class LawReport:
    """Outcome of a (possibly sampled) law scan.

    ``checked`` counts the instances evaluated per law and ``exhaustive`` says
    whether that law's input space was enumerated completely.
    """

    violations: list[Violation] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)
    exhaustive: dict[str, bool] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations and not self.failed

    def laws_violated(self):
        return sorted({v.law for v in self.violations} | set(self.failed))

    def fail(self, law, witness, cap=20):
        """Count a violation; keep its witness only for the first ``cap``."""
        n = self.failed.get(law, 0)
        self.failed[law] = n + 1
        if n < cap:
            self.violations.append(Violation(law, witness))

    def merge(self, other, prefix=""):
        for v in other.violations:
            self.violations.append(Violation(prefix + v.law, v.witness))
        for k, n in other.failed.items():
            self.failed[prefix + k] = self.failed.get(prefix + k, 0) + n
        for k, n in other.checked.items():
            self.add(prefix + k, n, other.exhaustive.get(k, True))
        return self

    def add(self, law, count=1, exhaustive=True):
        self.checked[law] = self.checked.get(law, 0) + count
        self.exhaustive[law] = self.exhaustive.get(law, True) and exhaustive

    def to_dict(self):
        return {
            "ok": self.ok,
            "checked": dict(sorted(self.checked.items())),
            "exhaustive": dict(sorted(self.exhaustive.items())),
            "violation_counts": dict(sorted(self.failed.items())),
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class Budget:
    """Search limits for exhaustive-or-sampled checks.

    An input space is enumerated when its size is at most ``max_candidates``;
    otherwise ``samples`` seeded draws are taken. ``max_exhaustive_size``
    caps carrier sizes for suites that sweep over carriers.
    """

    max_exhaustive_size: int = 2
    samples: int = 200
    seed: int = 0
    max_candidates: int = 4096

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.max_exhaustive_size < 0:
            raise ValueError("max_exhaustive_size must be >= 0")
