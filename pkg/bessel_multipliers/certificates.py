"""Outcomes of individual bound and identity checks.

A Certificate records one claim: the measured left-hand side, the bound it is held
to, the slack that was allowed, and the verdict. A PropositionVerdict collects the
hypotheses and conclusions of a proposition whose hypotheses can fail, so that
"hypothesis unmet" is never confused with "conclusion violated".
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .tolerance_config import DEFAULT_TOLERANCES


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class Status(str, Enum):
    """Overall status of a proposition check."""

    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"
    NO_CONCLUSION = "no_conclusion"


@dataclass(frozen=True)
class Certificate:
    claim: str
    lhs: float
    rhs: float
    slack: float
    verdict: Verdict
    context: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict is Verdict.PASS

    @property
    def margin(self):
        """rhs - lhs, relative to max(|rhs|, 1). Negative means violated."""
        return (self.rhs - self.lhs) / max(abs(self.rhs), 1.0)

    def as_dict(self):
        return {
            "claim": self.claim,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": float(self.slack),
            "verdict": self.verdict.value,
            "context": {k: to_plain(v) for k, v in self.context.items()},
        }


def inequality_certificate(claim, lhs, rhs, tolerances=DEFAULT_TOLERANCES, scale=1.0, **context):
    """Certify lhs <= rhs with the relative bound_slack policy."""
    lhs, rhs = float(lhs), float(rhs)
    holds = tolerances.within_bound(lhs, rhs, scale)
    return Certificate(
        claim=claim,
        lhs=lhs,
        rhs=rhs,
        slack=tolerances.bound_slack,
        verdict=Verdict.PASS if holds else Verdict.FAIL,
        context=context,
    )


def identity_certificate(claim, residual, tolerances=DEFAULT_TOLERANCES, scale=1.0, **context):
    """Certify that an identity holds: residual <= eq_abs * max(scale, 1)."""
    residual = float(residual)
    allowed = tolerances.eq_abs * max(scale, 1.0)
    return Certificate(
        claim=claim,
        lhs=residual,
        rhs=allowed,
        slack=tolerances.eq_abs,
        verdict=Verdict.PASS if residual <= allowed else Verdict.FAIL,
        context=dict(context, kind="identity", scale=scale),
    )


def residual_certificate(claim, residual, allowed, **context):
    """Certify residual <= allowed for an explicitly given allowance."""
    residual, allowed = float(residual), float(allowed)
    return Certificate(
        claim=claim,
        lhs=residual,
        rhs=allowed,
        slack=0.0,
        verdict=Verdict.PASS if residual <= allowed else Verdict.FAIL,
        context=dict(context, kind="residual"),
    )


@dataclass(frozen=True)
class Hypothesis:
    """One hypothesis of a proposition.

    mode is "certified" when the check is exact (operator norms, spectra), and
    "probed" when it was only verified on a finite set of probe vectors.
    """

    name: str
    holds: bool
    mode: str = "certified"
    value: float = None
    bound: float = None

    def as_dict(self):
        out = {"name": self.name, "holds": bool(self.holds), "mode": self.mode}
        if self.value is not None:
            out["value"] = float(self.value)
        if self.bound is not None:
            out["bound"] = float(self.bound)
        return out


@dataclass(frozen=True)
class PropositionVerdict:
    proposition: str
    hypotheses: tuple
    conclusion_checked: bool
    certificates: tuple = ()
    margins: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self):
        return all(h.holds for h in self.hypotheses)

    @property
    def status(self):
        if not self.hypotheses_hold:
            return Status.NOT_APPLICABLE
        if not self.conclusion_checked:
            return Status.NO_CONCLUSION
        if all(c.passed for c in self.certificates):
            return Status.PASS
        return Status.FAIL

    @property
    def passed(self):
        return self.status is not Status.FAIL

    def as_dict(self):
        return {
            "proposition": self.proposition,
            "hypotheses": [h.as_dict() for h in self.hypotheses],
            "conclusion_checked": bool(self.conclusion_checked),
            "status": self.status.value,
            "certificates": [c.as_dict() for c in self.certificates],
            "margins": {k: to_plain(v) for k, v in self.margins.items()},
        }


def to_plain(value):
    """Convert numpy values and tuples so json.dumps accepts them."""
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if hasattr(value, "item") and not isinstance(value, (list, tuple, dict)):
        try:
            value = value.item()
        except (ValueError, TypeError):
            pass
    if isinstance(value, complex):
        # Same [re, im] convention as the JSON input formats.
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: to_plain(v) for k, v in value.items()}
    if isinstance(value, Enum):
        return value.value
    return value
