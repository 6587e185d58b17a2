"""Line-oriented pass/fail reports shared by the check suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckCase:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        s = f"{tag} {self.suite}:{self.name}"
        if self.detail and not self.passed:
            s += f"  [{self.detail}]"
        return s


@dataclass
class Report:
    cases: list[CheckCase] = field(default_factory=list)

    def add(self, suite: str, name: str, passed: bool, detail: str = "") -> None:
        self.cases.append(CheckCase(suite, name, bool(passed), detail))

    def extend(self, other: "Report") -> None:
        self.cases.extend(other.cases)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CheckCase]:
        return [c for c in self.cases if not c.passed]

    def lines(self) -> list[str]:
        return [c.line() for c in self.cases]

    def summary(self) -> dict:
        fails = self.failures
        return {
            "total": len(self.cases),
            "passed": len(self.cases) - len(fails),
            "failed": len(fails),
            "first_failures": [
                {"suite": c.suite, "case": c.name, "detail": c.detail} for c in fails[:10]
            ],
        }
