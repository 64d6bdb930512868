"""Pass/fail check lists shared by the verification commands."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    title: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [{"name": n, "pass": ok, "detail": d} for n, ok, d in self.checks],
            "values": self.values,
        }

    def render(self) -> str:
        lines = [self.title]
        lines += [f"  {k}: {v}" for k, v in self.values.items()]
        lines += [f"  [{'PASS' if ok else 'FAIL'}] {n}" + (f" ({d})" if d else "") for n, ok, d in self.checks]
        lines.append("  result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"
