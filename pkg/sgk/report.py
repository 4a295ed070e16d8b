#! /usr/bin/env python3

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass(frozen=True, order=True)
class CheckResult:
    suite: str
    check: str
    detail: str
    passed: bool = field(compare=False)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite}.{self.check} {self.detail}".rstrip()


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    def add(self, suite: str, check: str, passed: bool, detail: str = "") -> CheckResult:
        result = CheckResult(suite, check, detail, bool(passed))
        self.results.append(result)
        return result

    def extend(self, other: Report) -> Report:
        self.results.extend(other.results)
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def count(self, passed: bool) -> int:
        return sum(1 for r in self.results if r.passed is passed)

    def lines(self) -> list[str]:
        """Report lines in canonical order"""
        return [r.line() for r in sorted(self.results)]

    def summary(self, elapsed: Optional[float] = None, **extra: Any) -> str:
        data: dict[str, Any] = {"pass": self.count(True), "fail": self.count(False), "elapsed": elapsed}
        data.update(extra)
        return json.dumps(data, sort_keys=False)

    def render(self, elapsed: Optional[float] = None, **extra: Any) -> str:
        return "\n".join(self.lines() + [self.summary(elapsed, **extra)]) + "\n"
