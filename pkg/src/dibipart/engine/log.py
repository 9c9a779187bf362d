"""Line-oriented phase log: ``CLAIM name bound=<b> observed=<o> PASS|FAIL``."""

from __future__ import annotations

from dataclasses import dataclass, field


def _fmt(x):
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return f"{x:.6g}"
    return str(x)


@dataclass(frozen=True)
class LogEntry:
    name: str
    bound: object
    observed: object
    passed: bool
    hard: bool

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"CLAIM {self.name} bound={_fmt(self.bound)} observed={_fmt(self.observed)} {verdict}"


@dataclass
class PhaseLog:
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, name, bound, observed, passed, hard=False) -> bool:
        self.entries.append(LogEntry(name, bound, observed, bool(passed), hard))
        return bool(passed)

    def at_most(self, name, observed, bound, hard=False) -> bool:
        return self.check(name, bound, observed, observed <= bound, hard)

    def at_least(self, name, observed, bound, hard=False) -> bool:
        return self.check(name, bound, observed, observed >= bound, hard)

    def note(self, text):
        self.notes.append(text)

    def failures(self, hard_only=False):
        return [e for e in self.entries if not e.passed and (e.hard or not hard_only)]

    def text(self) -> str:
        lines = [e.line() for e in self.entries]
        lines.extend(f"NOTE {n}" for n in self.notes)
        return "\n".join(lines) + ("\n" if lines else "")
