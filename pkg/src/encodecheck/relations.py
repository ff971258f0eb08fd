"""Relation algebra, simulation-style relation checks and greatest fixpoints.

All four simulation kinds are checked with single-step challenges where that
is equivalent to the weak-step definitions:

* ``strong-bisim``: single steps matched by single steps, both directions.
* ``weak-bisim``: single steps matched by weak steps, both directions.
* ``coupled-sim``: the coupling condition (some weak derivative of the right
  state is related back to the left state) plus single-step weak simulation.
* ``correspondence-sim``: left single steps matched by weak steps; every weak
  derivative ``Q'`` of the right state must be able to meet some weak
  derivative of the left state, i.e. ``P => P''``, ``Q' => Q''`` with
  ``(P'', Q'')`` related.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product

from .errors import EncodabilityError, PreconditionError, UnknownStateError
from .model import CombinedDomain, Pred, ReductionSystem
from .verdict import Counterexample, Verdict

__all__ = [
    "KINDS",
    "MODES",
    "CLOSURES",
    "Rel",
    "RelKindReport",
    "closure",
    "closures",
    "restrict",
    "inverse",
    "relation_respect",
    "is_simulation",
    "greatest_relation",
    "relation_properties",
    "lemma5_containment",
    "normalize_constraints",
]

KINDS = ("strong-bisim", "weak-bisim", "coupled-sim", "correspondence-sim")
MODES = ("preserve", "reflect", "respect")
CLOSURES = ("refl", "sym", "trans")
CARRIERS = ("source", "target", "combined")


@dataclass(frozen=True)
class Rel:
    """A finite set of ordered pairs over a declared carrier."""

    carrier: tuple[str, ...]
    pairs: frozenset[tuple[str, str]] = frozenset()
    over: str | None = None

    def __post_init__(self):
        if self.over is not None and self.over not in CARRIERS:
            raise EncodabilityError(f"unknown carrier {self.over!r}; expected one of {', '.join(CARRIERS)}")
        object.__setattr__(self, "carrier", tuple(self.carrier))
        known = set(self.carrier)
        pairs = set()
        for i, pair in enumerate(self.pairs):
            x, y = pair
            for s in (x, y):
                if s not in known:
                    raise UnknownStateError(f"pair ({x}, {y}) mentions {s!r}, which is not in the {self.over or 'declared'} carrier",
                                            state=s, index=i)
            pairs.add((x, y))
        object.__setattr__(self, "pairs", frozenset(pairs))

    @classmethod
    def on(cls, sys: ReductionSystem, pairs=(), over=None):
        if over is None and isinstance(sys, CombinedDomain):
            over = "combined"
        return cls(sys.states, frozenset(tuple(p) for p in pairs), over)

    @classmethod
    def identity(cls, carrier, over=None):
        return cls(tuple(carrier), frozenset((s, s) for s in carrier), over)

    def with_pairs(self, pairs):
        return Rel(self.carrier, frozenset(pairs), self.over)

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __or__(self, other):
        if isinstance(other, Rel):
            other = other.pairs
        return self.with_pairs(self.pairs | frozenset(other))

    def __and__(self, other):
        if isinstance(other, Rel):
            other = other.pairs
        return self.with_pairs(self.pairs & frozenset(other))

    def __le__(self, other):
        return self.pairs <= (other.pairs if isinstance(other, Rel) else frozenset(other))

    def image(self):
        img = defaultdict(set)
        for x, y in self.pairs:
            img[x].add(y)
        return img

    def preimage(self):
        pre = defaultdict(set)
        for x, y in self.pairs:
            pre[y].add(x)
        return pre

    def sorted_pairs(self):
        return sorted(self.pairs)

    def __repr__(self):
        body = ", ".join(f"({x},{y})" for x, y in self)
        return f"Rel[{self.over or '-'}]{{{body}}}"


def _trans(pairs):
    succ = defaultdict(set)
    for x, y in pairs:
        succ[x].add(y)
    nodes = set(succ) | {y for ys in succ.values() for y in ys}
    for k in sorted(nodes):
        into = [x for x in succ if k in succ[x]]
        out = succ.get(k, set())
        for x in into:
            succ[x] |= out
    return frozenset((x, y) for x, ys in succ.items() for y in ys)


def closure(R: Rel, op: str) -> Rel:
    if op == "refl":
        return R | {(s, s) for s in R.carrier}
    if op == "sym":
        return R | {(y, x) for x, y in R.pairs}
    if op == "trans":
        return R.with_pairs(_trans(R.pairs))
    raise EncodabilityError(f"unknown closure {op!r}; expected one of {', '.join(CLOSURES)}")


def closures(R: Rel, ops) -> Rel:
    """Apply closure operations left to right."""
    for op in ops:
        R = closure(R, op)
    return R


def restrict(R: Rel, B, over=None) -> Rel:
    B = tuple(B)
    unknown = sorted(set(B) - set(R.carrier))
    if unknown:
        raise UnknownStateError(f"restriction domain mentions states outside the carrier: {unknown}")
    keep = set(B)
    return Rel(tuple(s for s in R.carrier if s in keep),
               frozenset((x, y) for x, y in R.pairs if x in keep and y in keep), over)


def inverse(R: Rel) -> Rel:
    return R.with_pairs((y, x) for x, y in R.pairs)


def normalize_constraints(constraints):
    """Accept ``(pred, mode)`` tuples or ``"pred:mode"`` strings."""
    out = []
    for c in constraints or ():
        if isinstance(c, str):
            pred, _, mode = c.rpartition(":")
            if not pred:
                raise EncodabilityError(f"constraint {c!r} must look like pred:mode")
            c = (pred, mode)
        pred, mode = c
        if isinstance(pred, str):
            pred = Pred.parse(pred)
        if mode not in MODES:
            raise EncodabilityError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
        out.append((pred, mode))
    return out


def _pair_respects(sys, x, y, preds, mode):
    """Yield (pred, direction) for every violated implication on the pair."""
    for p in preds:
        hx, hy = sys.holds(x, p), sys.holds(y, p)
        if mode in ("preserve", "respect") and hx and not hy:
            yield p, "preserve"
        if mode in ("reflect", "respect") and hy and not hx:
            yield p, "reflect"


def relation_respect(R: Rel, sys: ReductionSystem, pred, mode) -> Verdict:
    [(pred, mode)] = normalize_constraints([(pred, mode)])
    preds = pred.expand(sys.alphabet)
    bad = []
    for x, y in R:
        for p, direction in _pair_respects(sys, x, y, preds, mode):
            if direction == "preserve":
                detail = f"{p} holds at {x} but not at {y}"
            else:
                detail = f"{p} holds at {y} but not at {x}"
            bad.append(Counterexample((x, y), None, direction, detail))
    return Verdict.of(bad)


def _violations(kind, sys, p, q, img, pre):
    """Clause violations of one pair against the relation given by img/pre."""
    succ = sys.successors
    weak = sys.weak_derivatives
    if kind == "strong-bisim":
        for p1 in succ[p]:
            if not img.get(p1, set()).intersection(succ[q]):
                yield Counterexample((p, q), (p, p1), "left-step", f"no step of {q} reaches a partner of {p1}")
        for q1 in succ[q]:
            if not pre.get(q1, set()).intersection(succ[p]):
                yield Counterexample((p, q), (q, q1), "right-step", f"no step of {p} reaches a partner of {q1}")
        return
    wq = weak(q)
    for p1 in succ[p]:
        if img.get(p1, set()).isdisjoint(wq):
            yield Counterexample((p, q), (p, p1), "left-step", f"no weak derivative of {q} is related to {p1}")
    if kind == "weak-bisim":
        wp = weak(p)
        for q1 in succ[q]:
            if pre.get(q1, set()).isdisjoint(wp):
                yield Counterexample((p, q), (q, q1), "right-step", f"no weak derivative of {p} is related to {q1}")
    elif kind == "coupled-sim":
        if pre.get(p, set()).isdisjoint(wq):
            yield Counterexample((p, q), None, "coupling", f"no weak derivative of {q} is related back to {p}")
    elif kind == "correspondence-sim":
        reach = set()
        for p2 in weak(p):
            reach |= img.get(p2, set())
        for q1 in sorted(wq):
            if reach.isdisjoint(weak(q1)):
                yield Counterexample((p, q), (q, q1), "right-weak-step",
                                     f"{q1} cannot catch up with any weak derivative of {p}")
    else:
        raise EncodabilityError(f"unknown relation kind {kind!r}; expected one of {', '.join(KINDS)}")


def _check_kind(kind):
    if kind not in KINDS:
        raise EncodabilityError(f"unknown relation kind {kind!r}; expected one of {', '.join(KINDS)}")


def is_simulation(kind, sys: ReductionSystem, R: Rel) -> Verdict:
    _check_kind(kind)
    img, pre = R.image(), R.preimage()
    bad = []
    for p, q in R:
        bad.extend(_violations(kind, sys, p, q, img, pre))
    return Verdict.of(bad)


def greatest_relation(kind, sys: ReductionSystem, constraints=(), within=None, over=None) -> Rel:
    """Largest relation of ``kind`` over ``sys`` meeting the per-pair constraints.

    Starts from every pair (or every pair of ``within``) that satisfies the
    static constraints and deletes clause-violating pairs in lexicographic
    order until nothing changes.
    """
    _check_kind(kind)
    cons = [(pred.expand(sys.alphabet), mode) for pred, mode in normalize_constraints(constraints)]
    if within is None:
        candidates = product(sys.states, repeat=2)
    else:
        candidates = within.pairs if isinstance(within, Rel) else within
    current = set()
    for x, y in candidates:
        if all(next(_pair_respects(sys, x, y, preds, mode), None) is None for preds, mode in cons):
            current.add((x, y))
    img, pre = defaultdict(set), defaultdict(set)
    for x, y in current:
        img[x].add(y)
        pre[y].add(x)
    changed = True
    while changed:
        changed = False
        for p, q in sorted(current):
            if next(_violations(kind, sys, p, q, img, pre), None) is not None:
                current.discard((p, q))
                img[p].discard(q)
                pre[q].discard(p)
                changed = True
    return Rel.on(sys, current, over)


@dataclass(frozen=True)
class RelKindReport:
    reflexive: bool
    symmetric: bool
    transitive: bool
    simulations: dict = field(default_factory=dict)
    respects: dict = field(default_factory=dict)

    @property
    def preorder(self):
        return self.reflexive and self.transitive

    @property
    def equivalence(self):
        return self.preorder and self.symmetric

    def as_dict(self):
        return {
            "reflexive": self.reflexive,
            "symmetric": self.symmetric,
            "transitive": self.transitive,
            "preorder": self.preorder,
            "equivalence": self.equivalence,
            "simulations": dict(self.simulations),
            "respects": {k: dict(v) for k, v in self.respects.items()},
        }


def is_reflexive(R: Rel) -> bool:
    return all((s, s) in R.pairs for s in R.carrier)


def is_symmetric(R: Rel) -> bool:
    return all((y, x) in R.pairs for x, y in R.pairs)


def is_transitive(R: Rel) -> bool:
    return _trans(R.pairs) == R.pairs


def is_preorder(R: Rel) -> bool:
    return is_reflexive(R) and is_transitive(R)


def is_equivalence(R: Rel) -> bool:
    return is_preorder(R) and is_symmetric(R)


_REPORTED_PREDS = ("divergent", "has-success", "reaches-success", "has-barb", "reaches-barb")


def relation_properties(R: Rel, sys: ReductionSystem) -> RelKindReport:
    sims = {kind: is_simulation(kind, sys, R).holds for kind in KINDS}
    respects = {}
    for name in _REPORTED_PREDS:
        pred = Pred(name)
        respects[name] = {mode: relation_respect(R, sys, pred, mode).holds for mode in MODES}
    return RelKindReport(is_reflexive(R), is_symmetric(R), is_transitive(R), sims, respects)


def lemma5_containment(sys: ReductionSystem, R: Rel) -> Verdict:
    """Both orientations of every pair of a correspondence simulation lie in
    the greatest coupled simulation."""
    if not is_simulation("correspondence-sim", sys, R).holds:
        raise PreconditionError("relation is not a correspondence simulation")
    coupled = greatest_relation("coupled-sim", sys).pairs
    bad = []
    for x, y in R:
        for pair in ((x, y), (y, x)):
            if pair not in coupled:
                bad.append(Counterexample(pair, None, "not-coupled",
                                          f"({pair[0]}, {pair[1]}) is outside the greatest coupled simulation"))
    return Verdict.of(bad)
