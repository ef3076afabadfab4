# src/services/report.py
"""
Reports
-------
Named pass/fail items with residual norms, the validation report returned by
the axiom batteries, and the CLI Report with its exit-status contract:
  0  every item passes
  1  at least one item fails
  2  input error (set by the CLI, never by a report)
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence

from pydantic import BaseModel, ConfigDict, Field

from src.config import settings

log = logging.getLogger(__name__)


class ReportItem(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    passed: bool = Field(alias="pass")
    residual: float = 0.0
    anchor: str = ""

    @classmethod
    def from_residual(cls, name: str, residual: float, atol: float, anchor: str = "") -> "ReportItem":
        return cls(name=name, passed=bool(residual < atol), residual=float(residual), anchor=anchor)

    @classmethod
    def flag(cls, name: str, ok: bool, residual: float = 0.0, anchor: str = "") -> "ReportItem":
        return cls(name=name, passed=bool(ok), residual=float(residual), anchor=anchor)


class ValidationReport(BaseModel):
    items: list[ReportItem] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(i.passed for i in self.items)

    def item(self, name: str) -> ReportItem:
        for i in self.items:
            if i.name == name:
                return i
        raise KeyError(name)

    def failed(self) -> list[str]:
        return [i.name for i in self.items if not i.passed]


class Report(ValidationReport):
    command: str
    model: str
    details: dict[str, Any] = Field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> str:
        payload = self.model_dump(by_alias=True, mode="json")
        payload["exit_status"] = self.exit_code
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def to_text(self) -> str:
        lines = [f"{self.command} :: {self.model}"]
        width = max((len(i.name) for i in self.items), default=0)
        for i in self.items:
            mark = "PASS" if i.passed else "FAIL"
            anchor = f"  ({i.anchor})" if i.anchor else ""
            lines.append(f"  [{mark}] {i.name.ljust(width)}  residual={i.residual:.3e}{anchor}")
        for key in sorted(self.details):
            lines.append(f"  {key}: {self.details[key]}")
        lines.append(f"  exit status {self.exit_code}")
        return "\n".join(lines)


Check = Callable[[], "ReportItem | Sequence[ReportItem]"]


def collect_items(checks: Sequence[Check], max_workers: int | None = None) -> list[ReportItem]:
    """
    Evaluate independent checks on a thread pool and return their items in
    declaration order. A check may yield one item or a list of items.
    """
    if not checks:
        return []
    workers = max(1, min(max_workers or settings.CHECK_MAX_WORKERS, len(checks)))
    with ThreadPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(lambda c: c(), checks))
    items: list[ReportItem] = []
    for r in results:
        if isinstance(r, ReportItem):
            items.append(r)
        else:
            items.extend(r)
    log.debug("collected %d report items from %d checks", len(items), len(checks))
    return items
