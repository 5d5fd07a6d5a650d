"""Structured result records shared by the verifier, the lab, and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


def _plain(value: Any) -> Any:
    """Coerce numpy scalars and other numerics to JSON-native types."""
    if hasattr(value, "item"):
        return value.item()
    return value


@dataclass(frozen=True)
class TheoremReport:
    """One certified verification run.

    margin is the certified slack; its sign is the pass direction, so
    passed must equal margin > 0.  Every computed value is paired with the
    quadrature tolerance it was obtained at (0.0 for exact arithmetic).
    """
    name: str
    inputs: dict[str, Any]
    computed: dict[str, float]
    margin: float
    passed: bool
    notes: str = ""
    tolerances: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.passed != (self.margin > 0.0):
            raise ValueError(
                f"{self.name}: passed={self.passed} inconsistent with "
                f"margin={self.margin}")
        missing = set(self.computed) - set(self.tolerances)
        if missing:
            raise ValueError(f"{self.name}: no tolerance for {sorted(missing)}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "inputs": {k: _plain(v) for k, v in self.inputs.items()},
            "computed": {k: _plain(v) for k, v in self.computed.items()},
            "tolerances": {k: _plain(v) for k, v in self.tolerances.items()},
            "margin": _plain(self.margin),
            "passed": self.passed,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class ExperimentReport:
    """One empirical run: counters, aggregates, and oracle residuals.

    residuals stays empty unless a brute-force oracle actually ran; hard
    identities report their residual even when it is exactly zero.
    """
    name: str
    params: dict[str, Any]
    counters: dict[str, int] = field(default_factory=dict)
    aggregates: dict[str, float] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    notes: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": {k: _plain(v) for k, v in self.params.items()},
            "counters": {k: int(_plain(v)) for k, v in self.counters.items()},
            "aggregates": {k: _plain(v) for k, v in self.aggregates.items()},
            "residuals": {k: _plain(v) for k, v in self.residuals.items()},
            "notes": self.notes,
        }


def to_json(payload: Any) -> str:
    """Deterministic JSON envelope: sorted keys, no timestamps, schema tag."""
    if isinstance(payload, (TheoremReport, ExperimentReport)):
        payload = payload.to_dict()
    elif isinstance(payload, list):
        payload = {"reports": [p.to_dict() if hasattr(p, "to_dict") else p
                               for p in payload]}
    body = dict(payload)
    body["schema"] = SCHEMA_VERSION
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def markdown_summary(payloads: list[dict[str, Any]]) -> str:
    """Aggregate JSON report dicts into a human-readable Markdown table."""
    lines = ["# Run summary", ""]
    theorem_rows = [p for p in payloads if "margin" in p]
    experiment_rows = [p for p in payloads if "margin" not in p]
    if theorem_rows:
        lines += ["| verification | margin | passed |", "| --- | --- | --- |"]
        for p in theorem_rows:
            lines.append(f"| {p['name']} | {p['margin']:+.6g} "
                         f"| {'yes' if p['passed'] else 'NO'} |")
        lines.append("")
    for p in experiment_rows:
        lines.append(f"## {p['name']}")
        for k in sorted(p.get("counters", {})):
            lines.append(f"- {k}: {p['counters'][k]}")
        for k in sorted(p.get("aggregates", {})):
            lines.append(f"- {k}: {p['aggregates'][k]:.10g}")
        for k in sorted(p.get("residuals", {})):
            lines.append(f"- residual {k}: {p['residuals'][k]:.3g}")
        if p.get("notes"):
            lines.append(f"- notes: {p['notes']}")
        lines.append("")
    return "\n".join(lines)
