from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Counterexample:
    """One violation. ``subject`` holds the involved state ids (a pair or a
    single state); ``challenge`` is the step or weak step that went unmatched."""

    subject: tuple[str, ...]
    challenge: tuple[str, str] | None = None
    kind: str = ""
    detail: str = ""

    def sort_key(self):
        return (self.subject, self.challenge or (), self.kind, self.detail)

    def as_dict(self):
        out = {"kind": self.kind, "subject": list(self.subject)}
        if self.challenge is not None:
            out["challenge"] = list(self.challenge)
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self):
        head = f"{self.kind} at ({', '.join(self.subject)})"
        if self.challenge is not None:
            head += f" challenge {self.challenge[0]} -> {self.challenge[1]}"
        return f"{head}: {self.detail}" if self.detail else head


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: holds iff there are no counterexamples."""

    counterexamples: tuple[Counterexample, ...] = ()

    @classmethod
    def of(cls, counterexamples=()):
        unique = set(counterexamples)
        return cls(tuple(sorted(unique, key=Counterexample.sort_key)))

    @classmethod
    def fail(cls, kind, subject, detail="", challenge=None):
        return cls.of([Counterexample(tuple(subject), challenge, kind, detail)])

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def __bool__(self):
        return self.holds

    def __and__(self, other):
        return Verdict.of(self.counterexamples + other.counterexamples)

    def as_dict(self):
        return {"holds": self.holds, "counterexamples": [c.as_dict() for c in self.counterexamples]}

    def __str__(self):
        if self.holds:
            return "holds"
        return "fails\n" + "\n".join(f"  {c}" for c in self.counterexamples)


HOLDS = Verdict()
