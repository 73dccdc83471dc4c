"""Residual records produced by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Check:
    """One verified statement: worst residual over ``samples`` instances."""

    name: str
    anchor: str
    threshold: float
    samples: int = 0
    max_residual: float = 0.0
    counterexamples: int = 0
    notes: dict = field(default_factory=dict)

    def add(self, residual, count: int = 1) -> "Check":
        r = float(np.max(residual)) if np.size(residual) else 0.0
        if not np.isfinite(r):
            r = float("inf")
        self.max_residual = max(self.max_residual, r)
        self.samples += count
        return self

    def flag(self, ok: bool, count: int = 1) -> "Check":
        """Record boolean instances; a False is a counterexample."""
        self.samples += count
        if not ok:
            self.counterexamples += 1
        return self

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.threshold and self.counterexamples == 0

    def to_json(self) -> dict:
        out = {
            "check": self.name,
            "anchor": self.anchor,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "counterexamples": self.counterexamples,
            "pass": self.passed,
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: max residual {self.max_residual:.3e} "
            f"(<= {self.threshold:.1e}) over {self.samples} samples, "
            f"{self.counterexamples} counterexamples"
        )


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"pass": self.passed, "checks": [c.to_json() for c in self.checks]}

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)
