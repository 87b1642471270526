"""Check records shared by the verifiers, serializable to JSON and CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import List

PASS, FAIL, INFO, SKIP = "pass", "fail", "info", "skip"


@dataclass
class Check:
    check: str
    index: int
    status: str
    witness: str = ""


@dataclass
class Report:
    checks: List[Check] = field(default_factory=list)

    def add(self, check, index, ok, witness=""):
        status = ok if isinstance(ok, str) else (PASS if ok else FAIL)
        self.checks.append(Check(check, index, status, witness))

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        return self

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def passed(self, prefix: str) -> bool:
        """True when every check whose name starts with ``prefix`` passed."""
        sel = [c for c in self.checks if c.check.startswith(prefix)]
        return bool(sel) and all(c.status == PASS for c in sel)

    def to_records(self):
        return [asdict(c) for c in self.checks]

    def to_json(self, **meta) -> str:
        return json.dumps({**meta, "checks": self.to_records()}, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.DictWriter(buf, fieldnames=["check", "index", "status", "witness"],
                            lineterminator="\n")
        wr.writeheader()
        wr.writerows(self.to_records())
        return buf.getvalue()


def short(n: int, limit: int = 40) -> str:
    if n.bit_length() > 4 * limit:
        return f"<{n.bit_length()}-bit integer>"
    return str(n)
