"""Structured results for exact verification passes.

Every verifier returns a CheckReport: a list of named checks, each
carrying the exact residual it computed (an operator, expression, or
scalar) and whether that residual vanished. A report is truthful — it
never summarizes a residual it did not compute.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, List


@dataclass(frozen=True)
class CheckEntry:
    tag: str
    ok: bool
    residual: Any = None
    detail: str = ""

    def residual_text(self) -> str:
        if self.residual is None:
            return ""
        return str(self.residual)


@dataclass
class CheckReport:
    entries: List[CheckEntry] = field(default_factory=list)

    def add(self, tag: str, ok: bool, residual: Any = None, detail: str = "") -> None:
        self.entries.append(CheckEntry(tag, bool(ok), residual, detail))

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for entry in other.entries:
            tag = f"{prefix}{entry.tag}" if prefix else entry.tag
            self.entries.append(CheckEntry(tag, entry.ok, entry.residual, entry.detail))

    @property
    def ok(self) -> bool:
        return all(entry.ok for entry in self.entries)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> List[CheckEntry]:
        return [entry for entry in self.entries if not entry.ok]

    def entry(self, tag: str) -> CheckEntry:
        for item in self.entries:
            if item.tag == tag:
                return item
        raise KeyError(tag)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {
                    "tag": entry.tag,
                    "ok": entry.ok,
                    "residual": entry.residual_text(),
                    **({"detail": entry.detail} if entry.detail else {}),
                }
                for entry in self.entries
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    def lines(self) -> List[str]:
        out = []
        for entry in self.entries:
            status = "ok" if entry.ok else "FAIL"
            line = f"{entry.tag}: {status}"
            if not entry.ok and entry.residual is not None:
                line += f"  residual = {entry.residual_text()}"
            if entry.detail:
                line += f"  ({entry.detail})"
            out.append(line)
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())
