"""Diagnostic reports returned by the validators.

Validators never raise on bad input: they return a report listing every
violated condition together with a concrete witness, so that a failure can
be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Finding:
    condition: str
    witness: Any
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.condition}: witness {self.witness!r}"
        if self.detail:
            msg += f" ({self.detail})"
        return msg


@dataclass
class ValidationReport:
    subject: str
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, condition: str, witness: Any, detail: str = "") -> None:
        self.findings.append(Finding(condition, witness, detail))

    def conditions(self) -> set[str]:
        return {f.condition for f in self.findings}

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.findings)} violation(s)"]
        lines += [f"  - {f}" for f in self.findings]
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "findings": [
                {"condition": f.condition, "witness": _plain(f.witness), "detail": f.detail}
                for f in self.findings
            ],
        }


def _plain(value: Any) -> Any:
    if isinstance(value, tuple):
        return list(value)
    return value
