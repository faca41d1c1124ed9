"""Structured output documents

Rationals are serialized as strings ("p/q" or "p") so documents survive YAML and JSON
round-trips exactly. Field order is fixed.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import yaml


def rational(value) -> str:
    return str(Fraction(value))


def plain(value):
    """Convert tuples, fractions and nested containers into YAML/JSON friendly values"""
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, dict):
        return {str(k) if not isinstance(k, str) else k: plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (frozenset, set)) else value
        return [plain(v) for v in items]
    return value


@dataclass
class CheckResult:
    name: str
    instance: str
    passed: bool
    witnesses: Dict = field(default_factory=dict)

    def to_dict(self):
        document = {"check": self.name, "instance": self.instance, "status": "pass" if self.passed else "fail"}
        if not self.passed and self.witnesses:
            document["witnesses"] = plain(self.witnesses)
        return document


@dataclass
class CoefficientRecord:
    beta: tuple
    coordinates: tuple
    a_exponent: tuple
    value: Fraction

    def to_dict(self):
        return {
            "beta": list(self.beta),
            "coordinates": list(self.coordinates),
            "a_exponent": list(self.a_exponent),
            "value": rational(self.value),
        }


@dataclass
class ReportDocument:
    problem: str
    command: str
    checks: List[CheckResult] = field(default_factory=list)
    tables: Dict[str, List[CoefficientRecord]] = field(default_factory=dict)
    mixed_volumes: Optional[Dict[tuple, Fraction]] = None
    error: Optional[Dict] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.checks)

    def add(self, name, instance, passed, **witnesses):
        self.checks.append(CheckResult(name=name, instance=str(instance), passed=bool(passed), witnesses=witnesses))

    def to_dict(self):
        document = {
            "problem": self.problem,
            "command": self.command,
            "status": "pass" if self.passed else "fail",
        }
        if self.error is not None:
            document["error"] = plain(self.error)
        if self.checks:
            document["checks"] = [check.to_dict() for check in self.checks]
        if self.tables:
            document["tables"] = {
                name: [record.to_dict() for record in records] for name, records in self.tables.items()
            }
        if self.mixed_volumes is not None:
            document["mixed_volumes"] = [
                {"k_bar": list(k), "value": rational(v)} for k, v in sorted(self.mixed_volumes.items())
            ]
        return document

    def table_records(self):
        return [record.to_dict() for records in self.tables.values() for record in records]

    def dump(self, format="report") -> str:
        if format == "table":
            document = self.table_records()
            if not document and self.mixed_volumes is not None:
                document = self.to_dict()["mixed_volumes"]
        else:
            document = self.to_dict()
        return yaml.safe_dump(document, sort_keys=False, default_flow_style=None)
