"""Finite reduction systems, encodings and the combined source/target domain.

A reduction system is a finite set of states with an unlabelled step relation,
a barb assignment and a set of successful states. Weak steps are the
reflexive-transitive closure of the step relation; a state diverges when it can
reach a cycle, which on a finite state set is the same as admitting an infinite
sequence of steps.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType

from .errors import (
    DisjointnessError,
    EncodabilityError,
    PartialEncodingError,
    UnknownStateError,
)

__all__ = [
    "PRED_KINDS",
    "Pred",
    "ReductionSystem",
    "CombinedDomain",
    "EncodingInstance",
    "validate_instance",
    "weak_derivatives",
    "is_divergent",
    "holds_predicate",
    "combine",
]

PRED_KINDS = ("has-barb", "reaches-barb", "has-success", "reaches-success", "divergent")
_BARB_KINDS = ("has-barb", "reaches-barb")
_TOKEN = re.compile(r"^[^\s,]+$")
_PRED_SYNTAX = re.compile(r"^([a-z-]+)(?:\(([^\s,()]+)\))?$")


def _check_token(name, what):
    if not isinstance(name, str) or not _TOKEN.match(name):
        raise EncodabilityError(f"invalid {what} {name!r}: need a non-empty token without whitespace or commas")
    return name


@dataclass(frozen=True, order=True)
class Pred:
    """Predicate selector over states.

    ``barb`` is only meaningful for the barb kinds. A barb kind with
    ``barb=None`` stands for the whole family, one predicate per barb of the
    alphabet in use (this is how "weakly respects barbs" is expressed).
    """

    kind: str
    barb: str | None = None

    def __post_init__(self):
        if self.kind not in PRED_KINDS:
            raise EncodabilityError(f"unknown predicate {self.kind!r}; expected one of {', '.join(PRED_KINDS)}")
        if self.barb is not None and self.kind not in _BARB_KINDS:
            raise EncodabilityError(f"predicate {self.kind} takes no barb argument")

    @classmethod
    def parse(cls, text):
        m = _PRED_SYNTAX.match(text.strip())
        if not m:
            raise EncodabilityError(f"cannot parse predicate {text!r}")
        return cls(m.group(1), m.group(2))

    @property
    def is_family(self):
        return self.kind in _BARB_KINDS and self.barb is None

    def expand(self, alphabet):
        """Concrete predicates this selector stands for."""
        if self.is_family:
            return [Pred(self.kind, a) for a in sorted(alphabet)]
        return [self]

    def __str__(self):
        return f"{self.kind}({self.barb})" if self.barb is not None else self.kind


@dataclass(frozen=True)
class ReductionSystem:
    states: tuple[str, ...]
    steps: frozenset[tuple[str, str]] = frozenset()
    barbs: Mapping[str, frozenset[str]] = field(default_factory=dict)
    success: frozenset[str] = frozenset()

    def __post_init__(self):
        states = list(self.states)
        for s in states:
            _check_token(s, "state id")
        if len(set(states)) != len(states):
            dup = sorted({s for s in states if states.count(s) > 1})
            raise EncodabilityError(f"duplicate state ids {dup}")
        object.__setattr__(self, "states", self._order(states))
        known = set(states)

        steps = set()
        for i, step in enumerate(self.steps):
            src, dst = step
            for end in (src, dst):
                if end not in known:
                    raise UnknownStateError(f"step {i} ({src}, {dst}) mentions unknown state {end!r}", field="steps", index=i)
            steps.add((src, dst))
        object.__setattr__(self, "steps", frozenset(steps))

        barbs = {}
        for s, names in dict(self.barbs).items():
            if s not in known:
                raise UnknownStateError(f"barb assignment for unknown state {s!r}", field="barbs", state=s)
            names = frozenset(_check_token(a, "barb name") for a in names)
            if names:
                barbs[s] = names
        object.__setattr__(self, "barbs", MappingProxyType(barbs))

        success = frozenset(self.success)
        for s in sorted(success - known):
            raise UnknownStateError(f"success marks unknown state {s!r}", field="success", state=s)
        object.__setattr__(self, "success", success)

    @staticmethod
    def _order(states):
        return tuple(sorted(states))

    def __eq__(self, other):
        if not isinstance(other, ReductionSystem):
            return NotImplemented
        return (self.states, self.steps, dict(self.barbs), self.success) == (
            other.states, other.steps, dict(other.barbs), other.success)

    __hash__ = None

    def __contains__(self, state):
        return state in self._index

    def __len__(self):
        return len(self.states)

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def successors(self) -> Mapping[str, tuple[str, ...]]:
        succ = {s: [] for s in self.states}
        for src, dst in self.steps:
            succ[src].append(dst)
        return MappingProxyType({s: tuple(sorted(ds)) for s, ds in succ.items()})

    @cached_property
    def _weak(self):
        weak = {}
        for s in self.states:
            seen = {s}
            todo = [s]
            while todo:
                for nxt in self.successors[todo.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
            weak[s] = frozenset(seen)
        return weak

    @cached_property
    def _divergent(self):
        on_cycle = {s for s in self.states
                    if any(s in self._weak[n] for n in self.successors[s])}
        return frozenset(s for s in self.states if self._weak[s] & on_cycle)

    @cached_property
    def alphabet(self) -> frozenset[str]:
        return frozenset().union(*self.barbs.values())

    def require(self, state):
        if state not in self._index:
            raise UnknownStateError(f"unknown state {state!r}", state=state)
        return state

    def weak_derivatives(self, state) -> frozenset[str]:
        return self._weak[self.require(state)]

    def is_divergent(self, state) -> bool:
        return self.require(state) in self._divergent

    def barbs_of(self, state) -> frozenset[str]:
        return self.barbs.get(self.require(state), frozenset())

    def reachable_barbs(self, state) -> frozenset[str]:
        return frozenset().union(*(self.barbs.get(d, frozenset()) for d in self.weak_derivatives(state)))

    def holds(self, state, pred: Pred) -> bool:
        self.require(state)
        kind = pred.kind
        if kind == "divergent":
            return state in self._divergent
        if kind == "has-success":
            return state in self.success
        if kind == "reaches-success":
            return not self.success.isdisjoint(self._weak[state])
        if pred.barb is None:
            raise EncodabilityError(f"predicate {kind} needs a concrete barb here")
        if kind == "has-barb":
            return pred.barb in self.barbs.get(state, ())
        return any(pred.barb in self.barbs.get(d, ()) for d in self._weak[state])


@dataclass(frozen=True, eq=False)
class CombinedDomain(ReductionSystem):
    """Disjoint union of a source and a target system.

    States are ordered source-first, each block lexicographically.
    """

    source_states: tuple[str, ...] = ()
    target_states: tuple[str, ...] = ()

    def _order(self, states):
        return tuple(sorted(self.source_states)) + tuple(sorted(self.target_states))

    def __post_init__(self):
        object.__setattr__(self, "source_states", tuple(sorted(self.source_states)))
        object.__setattr__(self, "target_states", tuple(sorted(self.target_states)))
        if set(self.source_states) & set(self.target_states):
            raise DisjointnessError("source and target blocks overlap")
        if sorted(self.states) != sorted(self.source_states + self.target_states):
            raise EncodabilityError("combined state set must be the union of both blocks")
        super().__post_init__()

    def origin(self, state) -> str:
        self.require(state)
        return "source" if state in self._source_set else "target"

    @cached_property
    def _source_set(self):
        return frozenset(self.source_states)


@dataclass(frozen=True, eq=False)
class EncodingInstance:
    """A source system, a target system and a total encoding function."""

    source: ReductionSystem
    target: ReductionSystem
    mapping: Mapping[str, str]

    def __post_init__(self):
        shared = sorted(set(self.source.states) & set(self.target.states))
        if shared:
            raise DisjointnessError(f"state ids shared by source and target: {shared}", states=shared)
        mapping = dict(self.mapping)
        for s, t in sorted(mapping.items()):
            if s not in self.source:
                raise UnknownStateError(f"encoding maps unknown source state {s!r}", field="encoding", state=s)
            if t not in self.target:
                raise UnknownStateError(f"encoding sends {s!r} to unknown target state {t!r}", field="encoding", state=t)
        missing = [s for s in self.source.states if s not in mapping]
        if missing:
            raise PartialEncodingError(f"encoding undefined on {missing}", states=missing)
        object.__setattr__(self, "mapping", MappingProxyType(mapping))

    def __eq__(self, other):
        if not isinstance(other, EncodingInstance):
            return NotImplemented
        return (self.source, self.target, dict(self.mapping)) == (other.source, other.target, dict(other.mapping))

    __hash__ = None

    def __getitem__(self, source_state):
        return self.mapping[self.source.require(source_state)]

    @cached_property
    def combined(self) -> CombinedDomain:
        barbs = dict(self.source.barbs)
        barbs.update(self.target.barbs)
        return CombinedDomain(
            states=self.source.states + self.target.states,
            steps=self.source.steps | self.target.steps,
            barbs=barbs,
            success=self.source.success | self.target.success,
            source_states=self.source.states,
            target_states=self.target.states,
        )

    @property
    def alphabet(self) -> frozenset[str]:
        return self.source.alphabet | self.target.alphabet


def _system_from_raw(raw, section):
    if not isinstance(raw, Mapping):
        raise EncodabilityError(f"{section}: expected an object")
    return ReductionSystem(
        states=tuple(raw.get("states", ())),
        steps=frozenset(tuple(step) for step in raw.get("steps", ())),
        barbs={s: frozenset(bs) for s, bs in dict(raw.get("barbs", {})).items()},
        success=frozenset(raw.get("success", ())),
    )


def validate_instance(raw) -> EncodingInstance:
    """Build a checked :class:`EncodingInstance` from a plain description.

    ``raw`` follows the instance document layout: keys ``source``, ``target``
    (each with ``states``, ``steps``, ``barbs``, ``success``) and ``encoding``.
    """
    if isinstance(raw, EncodingInstance):
        return raw
    source = _system_from_raw(raw.get("source", {}), "source")
    target = _system_from_raw(raw.get("target", {}), "target")
    return EncodingInstance(source, target, dict(raw.get("encoding", {})))


def weak_derivatives(sys: ReductionSystem, s) -> frozenset[str]:
    return sys.weak_derivatives(s)


def is_divergent(sys: ReductionSystem, s) -> bool:
    return sys.is_divergent(s)


def holds_predicate(sys: ReductionSystem, s, pred) -> bool:
    if isinstance(pred, str):
        pred = Pred.parse(pred)
    return sys.holds(s, pred)


def combine(enc: EncodingInstance) -> CombinedDomain:
    return enc.combined


def system(states: Iterable[str], steps=(), barbs=None, success=()) -> ReductionSystem:
    """Shorthand constructor used by fixtures and tests."""
    return ReductionSystem(
        states=tuple(states),
        steps=frozenset(tuple(s) for s in steps),
        barbs={k: frozenset(v) for k, v in (barbs or {}).items()},
        success=frozenset(success),
    )
