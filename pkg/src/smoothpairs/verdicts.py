"""Three-valued verdicts with a JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

CERTIFIED_YES = "certified_yes"
CERTIFIED_NO = "certified_no"
UNDECIDED = "undecided"
OUTCOMES = (CERTIFIED_YES, CERTIFIED_NO, UNDECIDED)

_LABELS = {CERTIFIED_YES: "CertifiedYes", CERTIFIED_NO: "CertifiedNo", UNDECIDED: "UndecidedUpTo"}


class InternalInconsistency(RuntimeError):
    """Two independent routes disagreed; treat as a defect, never as a verdict."""


@dataclass(frozen=True)
class Verdict:
    outcome: str
    level: int
    witness: dict | None = None
    certificate: str | None = None
    evidence: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.outcome == CERTIFIED_NO and not self.witness:
            raise ValueError("a refutation must carry a witness")
        if self.outcome == CERTIFIED_YES and not self.certificate:
            raise ValueError("a positive verdict must carry a certificate")

    @classmethod
    def yes(cls, certificate: str, level: int = 0, **evidence) -> "Verdict":
        return cls(CERTIFIED_YES, level, None, certificate, dict(evidence))

    @classmethod
    def no(cls, level: int, witness: dict, **evidence) -> "Verdict":
        return cls(CERTIFIED_NO, level, witness, None, dict(evidence))

    @classmethod
    def undecided(cls, level: int, **evidence) -> "Verdict":
        return cls(UNDECIDED, level, None, None, dict(evidence))

    @property
    def label(self) -> str:
        return _LABELS[self.outcome]

    @property
    def refuted(self) -> bool:
        return self.outcome == CERTIFIED_NO

    @property
    def certified(self) -> bool:
        return self.outcome == CERTIFIED_YES

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"outcome": self.outcome, "level": self.level}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.evidence:
            out["evidence"] = self.evidence
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        return cls(
            data["outcome"],
            int(data["level"]),
            data.get("witness"),
            data.get("certificate"),
            dict(data.get("evidence", {})),
        )

    def summary(self) -> str:
        if self.outcome == CERTIFIED_NO:
            return f"{self.label} at level {self.level} ({self.witness.get('kind', 'witness')})"
        if self.outcome == CERTIFIED_YES:
            return f"{self.label}: {self.certificate}"
        return f"{self.label}({self.level})"
