"""Pass/fail reports produced by the identity and closure verifiers.

A failing check always carries a concrete witness whose two sides
re-evaluate to unequal values, so reports never accuse without evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import Vector


@dataclass(frozen=True)
class Witness:
    """Concrete counterexample: the elements involved and both side values."""

    elements: tuple[str, ...]
    lhs: Vector
    rhs: Vector
    detail: str = ""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Witness | None = None


@dataclass(frozen=True)
class CheckReport:
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def named(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def merged_with(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.checks + other.checks)


class ReportBuilder:
    """Collects check results; records only the first witness per check."""

    def __init__(self) -> None:
        self._order: list[str] = []
        self._failed: dict[str, Witness | None] = {}

    def start(self, name: str) -> None:
        if name not in self._order:
            self._order.append(name)

    def fail(self, name: str, witness: Witness | None = None) -> None:
        self.start(name)
        if name not in self._failed:
            self._failed[name] = witness

    def build(self) -> CheckReport:
        return CheckReport(
            tuple(
                CheckResult(name, name not in self._failed, self._failed.get(name))
                for name in self._order
            )
        )
