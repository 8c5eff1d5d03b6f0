from __future__ import annotations

import math
from dataclasses import asdict

from metronoids.models.contracts import PropertyFinding


class PropertyValidator:
    """Turns numeric evidence into PASSED/FAILED findings; slack >= 0 passes and already includes the tolerance."""

    def __init__(self, tolerance: float = 1e-9) -> None:
        self.tolerance = tolerance

    def _make_finding(
        self,
        rule: str,
        expected: float,
        actual: float,
        slack: float,
        tolerance: float | None = None,
        severity: str = "HIGH",
    ) -> PropertyFinding:
        tol = self.tolerance if tolerance is None else tolerance
        status = "PASSED" if math.isfinite(slack) and slack >= 0.0 else "FAILED"
        return PropertyFinding(
            validation_status=status,
            rule=rule,
            expected=float(expected),
            actual=float(actual),
            slack=float(slack),
            tolerance=tol,
            severity=severity,
            message=f"{rule} {'ok' if status == 'PASSED' else 'violated'}",
        )

    def check_close(self, rule: str, expected: float, actual: float, tolerance: float | None = None) -> PropertyFinding:
        tol = self.tolerance if tolerance is None else tolerance
        return self._make_finding(rule, expected, actual, tol - abs(actual - expected), tol)

    def check_at_least(self, rule: str, bound: float, actual: float, tolerance: float | None = None) -> PropertyFinding:
        tol = self.tolerance if tolerance is None else tolerance
        return self._make_finding(rule, bound, actual, actual - bound + tol, tol)

    def check_at_most(self, rule: str, bound: float, actual: float, tolerance: float | None = None) -> PropertyFinding:
        tol = self.tolerance if tolerance is None else tolerance
        return self._make_finding(rule, bound, actual, bound - actual + tol, tol)

    def check_flag(self, rule: str, ok: bool, evidence: float = 0.0, severity: str = "HIGH") -> PropertyFinding:
        return self._make_finding(rule, 0.0, evidence, 0.0 if ok else -math.inf, tolerance=0.0, severity=severity)


def summarize_findings(findings: list[PropertyFinding]) -> dict[str, object]:
    failures = [f for f in findings if f.validation_status == "FAILED"]
    worst: dict[str, float] = {}
    for f in findings:
        if f.slack is not None and math.isfinite(f.slack):
            worst[f.rule] = min(worst.get(f.rule, math.inf), f.slack)
    return {
        "validation_status": "FAILED" if failures else "PASSED",
        "findings": [_finding_dict(f) for f in findings],
        "worst_slack": worst,
        "failed_rules": sorted({f.rule for f in failures}),
    }


def _finding_dict(finding: PropertyFinding) -> dict[str, object]:
    payload = asdict(finding)
    if payload["slack"] is not None and not math.isfinite(payload["slack"]):
        payload["slack"] = None
    return payload
