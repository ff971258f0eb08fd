"""Fixtures, seeded instance generation and lemma falsification."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import EncodabilityError, PreconditionError, UnknownFixtureError, UnknownLemmaError
from .instance_format import dump_document, parse_instance
from .model import PRED_KINDS, EncodingInstance, ReductionSystem
from .relations import Rel, closures, greatest_relation, inverse, normalize_constraints, relation_respect
from .witness import (
    LEMMAS,
    SIM_FOR_VARIANT,
    LemmaArgs,
    _DEFAULT_VARIANT,
    _FIXED_VARIANT,
    _SUCCESS_FOR_VARIANT,
    check_preconditions,
    minimal_witness,
    verify_lemma,
)

__all__ = [
    "FIXTURES",
    "fixture",
    "fixture_path",
    "GenConfig",
    "Generated",
    "generate",
    "repair",
    "preimage",
    "Discrepancy",
    "LemmaStats",
    "FalsifyReport",
    "falsify",
]

FIXTURES = ("fig1", "fig2", "fig3")
REPAIR_ROUNDS = 16


def fixture_path(name):
    if name not in FIXTURES:
        raise UnknownFixtureError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}", name=name)
    return resources.files("encodecheck") / "fixtures" / f"{name}.instance"


def fixture(name):
    """The figure instance ``name`` as ``(EncodingInstance, {relation name: Rel})``."""
    return parse_instance(fixture_path(name).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_src: int = 4
    max_tgt: int = 5
    step_density: float = 0.3
    alphabet: tuple = ("a", "b", "c")
    barb_prob: float = 0.25
    success_prob: float = 0.2
    pair_density: float = 0.2
    # closures applied to the raw seed pairs of each generated relation
    closure_policy: tuple = (("RS", ()), ("RT", ()), ("R", ()))

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_src < 1 or self.max_tgt < 1:
            raise ValueError("state bounds must be positive")
        for name in ("step_density", "barb_prob", "success_prob", "pair_density"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    def closure_for(self, name):
        return dict(self.closure_policy).get(name, ())


@dataclass(frozen=True)
class Generated:
    index: int
    enc: EncodingInstance
    relations: dict
    # per-instance coin flips consumed by repair
    choices: tuple = ()

    def document(self, relations=None):
        return dump_document(self.enc, self.relations if relations is None else relations)


def _random_system(rng, names, cfg, density):
    steps = [(x, y) for x in names for y in names if rng.random() < density]
    barbs = {s: [a for a in cfg.alphabet if rng.random() < cfg.barb_prob] for s in names}
    success = [s for s in names if rng.random() < cfg.success_prob]
    return ReductionSystem(tuple(names), frozenset(steps), barbs, frozenset(success))


def _random_rel(rng, states, density, over):
    return Rel(tuple(states), frozenset((x, y) for x in states for y in states if rng.random() < density), over)


def generate(config: GenConfig, index: int) -> Generated:
    """Instance number ``index`` of the stream seeded by ``config.seed``.

    About a quarter of the instances use a target that copies the source
    (plus a few fresh intermediate states), which makes the criteria hold
    often enough for both sides of every lemma to be exercised.
    """
    cfg = config
    rng = np.random.default_rng([cfg.seed, index])
    n_src = int(rng.integers(1, cfg.max_src + 1))
    src_names = [f"s{i}" for i in range(n_src)]
    source = _random_system(rng, src_names, cfg, cfg.step_density)

    if rng.random() < 0.25 and cfg.max_tgt >= n_src:
        extra = int(rng.integers(0, cfg.max_tgt - n_src + 1))
        names = [f"t{i}" for i in range(n_src + extra)]
        rename = dict(zip(src_names, names))
        steps = {(rename[x], rename[y]) for x, y in source.steps}
        # intermediate states split some source steps in two
        for k in range(extra):
            if source.steps and rng.random() < 0.7:
                x, y = sorted(source.steps)[int(rng.integers(len(source.steps)))]
                mid = names[n_src + k]
                steps |= {(rename[x], mid), (mid, rename[y])}
        barbs = {rename[s]: sorted(source.barbs.get(s, ())) for s in src_names}
        success = {rename[s] for s in source.success}
        target = ReductionSystem(tuple(names), frozenset(steps), barbs, frozenset(success))
        mapping = dict(rename)
    else:
        n_tgt = int(rng.integers(1, cfg.max_tgt + 1))
        names = [f"t{i}" for i in range(n_tgt)]
        target = _random_system(rng, names, cfg, cfg.step_density)
        if n_tgt <= n_src and rng.random() < 0.5:
            images = names + [names[int(j)] for j in rng.integers(0, n_tgt, n_src - n_tgt)]
            images = [images[int(j)] for j in rng.permutation(n_src)]
        else:
            images = [names[int(j)] for j in rng.integers(0, n_tgt, n_src)]
        mapping = dict(zip(src_names, images))

    enc = EncodingInstance(source, target, mapping)
    C = enc.combined
    rels = {
        "RS": closures(_random_rel(rng, enc.source.states, cfg.pair_density, "source"), cfg.closure_for("RS")),
        "RT": closures(_random_rel(rng, enc.target.states, cfg.pair_density, "target"), cfg.closure_for("RT")),
        "R": closures(_random_rel(rng, C.states, cfg.pair_density, "combined"), cfg.closure_for("R")),
    }
    choices = tuple(int(c) for c in rng.integers(0, 1 << 30, 8))
    return Generated(index, enc, rels, choices)


def preimage(enc: EncodingInstance, RT: Rel) -> Rel:
    """Source pairs whose images are related by ``RT``; full abstraction
    holds for it by construction."""
    src = enc.source.states
    return Rel(src, frozenset((a, b) for a in src for b in src if (enc[a], enc[b]) in RT.pairs), "source")


def _drop_violations(R, sys, constraints):
    keep = set(R.pairs)
    for pred, mode in normalize_constraints(constraints):
        for c in relation_respect(R, sys, pred, mode).counterexamples:
            keep.discard(tuple(c.subject))
    return R.with_pairs(keep)


def _repair_preorder_sim(T, RT, kind, constraints, choice):
    if choice % 3 == 1:
        RT = Rel.on(T, ((x, y) for x in T.states for y in T.states), "target")
    elif choice % 3 == 2:
        RT = greatest_relation(kind, T, constraints, over="target")
    for _ in range(REPAIR_ROUNDS):
        fixed = _drop_violations(RT, T, constraints)
        fixed = greatest_relation(kind, T, constraints, within=fixed, over="target")
        fixed = closures(fixed, ("refl", "trans"))
        if fixed == RT:
            return RT
        RT = fixed
    return None


def _args_variation(lemma, choice):
    """Rotate the free parameters of a lemma over the stream."""
    if lemma == "PRED-PRES":
        preds = list(PRED_KINDS) + ["has-barb(a)", "reaches-barb(b)"]
        return {"pred": preds[choice % len(preds)], "mode": ("preserve", "reflect", "respect")[(choice // 7) % 3]}
    if lemma == "BARB-SENS":
        return {"mode": ("preserve", "reflect", "respect")[choice % 3], "strength": ("has", "reaches")[(choice // 3) % 2]}
    if lemma == "SUCC-SENS":
        return {"strength": ("has", "reaches")[choice % 2]}
    if lemma == "COMB-TWO-PRED":
        pairs = [
            (("divergent", "reflect"), ("reaches-barb", "respect")),
            (("has-success", "respect"), ("has-barb", "preserve")),
            (("reaches-success", "reflect"), ("divergent", "preserve")),
            (("has-barb(a)", "respect"), ("reaches-barb(c)", "reflect")),
        ]
        return {"preds": pairs[choice % len(pairs)]}
    if lemma in _DEFAULT_VARIANT:
        return {"variant": ("strong", "standard", "weak")[choice % 3], "strength": ("has", "reaches")[(choice // 3) % 2]}
    if lemma == "VG12":
        kinds = ("strong-bisim", "weak-bisim", "coupled-sim", "correspondence-sim")
        cons = [(), (("divergent", "reflect"),), (("reaches-barb", "respect"),), (("reaches-success", "preserve"),)]
        return {"kind": kinds[choice % 4], "constraints": cons[(choice // 4) % 4]}
    return {}


def repair(lemma, gen: Generated):
    """Lemma arguments built from the generated candidates, repaired toward
    the lemma's preconditions; ``None`` when repair gives up."""
    enc = gen.enc
    T = enc.target
    c = gen.choices
    args = LemmaArgs(**_args_variation(lemma, c[0]))
    RS, RT, R = gen.relations["RS"], gen.relations["RT"], gen.relations["R"]

    if lemma in _FIXED_VARIANT or lemma in _DEFAULT_VARIANT:
        variant = _FIXED_VARIANT.get(lemma) or args.variant
        kind = SIM_FOR_VARIANT[variant]
        cons = []
        if lemma in _DEFAULT_VARIANT:
            cons.append((_SUCCESS_FOR_VARIANT[variant], "respect"))
        if lemma == "COMB-TRIPLE":
            cons.append(("divergent", "reflect"))
        if lemma == "COMB-OC-SUCC-BARB" and c[2] % 2:
            cons.append((f"{args.strength}-barb", "respect"))
        RT = _repair_preorder_sim(T, RT, kind, cons, c[1])
        if RT is None:
            return None
        args = args.with_(RT=RT)
    elif lemma in ("FA-PREORDER", "FA-EQUIV", "FA-OC", "FA-OC-RS-BISIM", "FA-OC-SURJ", "FA-RESTRICT"):
        ops = ("refl", "trans") if lemma == "FA-PREORDER" else ("refl", "sym", "trans")
        pick = c[1] % 4
        if lemma != "FA-PREORDER" and pick == 1:
            RT = greatest_relation("weak-bisim", T, over="target")
        elif pick == 2:
            RT = Rel.on(T, ((x, y) for x in T.states for y in T.states), "target")
        RT = closures(RT, ops)
        # the preimage makes full abstraction hold; otherwise keep the random RS
        RS = preimage(enc, RT) if c[2] % 3 or lemma in ("FA-OC-SURJ", "FA-RESTRICT") else closures(RS, ops)
        args = args.with_(RS=RS, RT=RT)
        if lemma == "FA-RESTRICT":
            M = minimal_witness(enc)
            if c[3] % 3 == 0:
                R = None
            else:
                seed = R | M | inverse(M)
                if c[3] % 3 == 2:
                    seed = seed | Rel.on(enc.combined, RS.pairs | RT.pairs)
                R = closures(seed, ("trans",))
            args = args.with_(R=R)

    try:
        pre = check_preconditions(lemma, enc, args)
    except PreconditionError:
        return None
    if not all(v.holds for _, v in pre):
        return None
    return args


@dataclass(frozen=True)
class Discrepancy:
    lemma: str
    index: int
    detail: str
    args: dict
    instance: dict

    def as_dict(self):
        return {"lemma": self.lemma, "index": self.index, "detail": self.detail,
                "args": self.args, "instance": self.instance}


@dataclass(frozen=True)
class LemmaStats:
    lemma: str
    attempted: int = 0
    preconditions_held: int = 0
    lhs_true: int = 0
    skipped: int = 0
    discrepancies: tuple = ()

    def as_dict(self):
        return {
            "lemma": self.lemma,
            "attempted": self.attempted,
            "preconditions_held": self.preconditions_held,
            "lhs_true": self.lhs_true,
            "skipped": self.skipped,
            "discrepancies": [d.as_dict() for d in self.discrepancies],
        }


@dataclass(frozen=True)
class FalsifyReport:
    seed: int
    iterations: int
    lemmas: tuple
    elapsed: float = field(default=0.0, compare=False)

    @property
    def discrepancies(self):
        return [d for s in self.lemmas for d in s.discrepancies]

    @property
    def ok(self):
        return not self.discrepancies

    def as_dict(self):
        """Everything except the wall-clock time, so repeated runs compare equal."""
        return {"seed": self.seed, "iterations": self.iterations,
                "discrepancy_count": len(self.discrepancies),
                "lemmas": [s.as_dict() for s in self.lemmas]}

    def render(self):
        lines = [f"falsify seed={self.seed} iterations={self.iterations}"]
        for s in self.lemmas:
            lines.append(f"  {s.lemma:<18} attempted={s.attempted} preconditions={s.preconditions_held} "
                         f"lhs_true={s.lhs_true} skipped={s.skipped} discrepancies={len(s.discrepancies)}")
        for d in self.discrepancies:
            lines.append(f"  DISCREPANCY {d.lemma} #{d.index}: {d.detail}")
        lines.append(f"total discrepancies: {len(self.discrepancies)}")
        return "\n".join(lines)


def _describe_args(args: LemmaArgs):
    return {"pred": args.pred, "mode": args.mode, "strength": args.strength, "variant": args.variant,
            "kind": args.kind, "constraints": [list(map(str, c)) for c in args.constraints],
            "preds": [list(map(str, c)) for c in args.preds]}


def _run_one(lemma, gen):
    """Outcome of one lemma on one instance: None (skipped) or
    ``(lhs, discrepancy-or-None)``."""
    args = repair(lemma, gen)
    if args is None:
        return None
    try:
        report = verify_lemma(lemma, gen.enc, args)
        detail = None if report.holds else (
            f"criterion side {'holds' if report.lhs.holds else 'fails'} but witness side "
            f"{'holds' if report.rhs_holds else 'fails'}")
        lhs = report.lhs.holds
    except EncodabilityError as exc:
        detail, lhs = f"error: {exc}", False
    if detail is None:
        return lhs, None
    rels = {k: v for k, v in (("RS", args.RS), ("RT", args.RT), ("R", args.R)) if v is not None}
    return lhs, Discrepancy(lemma, gen.index, detail, _describe_args(args), gen.document(rels))


def _run_chunk(job):
    lemmas, config, lo, hi = job
    out = []
    for index in range(lo, hi):
        gen = generate(config, index)
        out.append([_run_one(lemma, gen) for lemma in lemmas])
    return out


def falsify(lemma="all", config: GenConfig | None = None, iterations=200, workers=1) -> FalsifyReport:
    """Check the bi-implication of ``lemma`` (or every catalogue lemma) on
    ``iterations`` generated instances.

    Instance ``i`` is the same for every lemma and every worker count, and
    results are merged in index order.
    """
    config = config or GenConfig()
    lemmas = LEMMAS if lemma == "all" else (lemma,)
    if lemma != "all" and lemma not in LEMMAS:
        raise UnknownLemmaError(f"unknown lemma {lemma!r}; catalogue: {', '.join(LEMMAS)}")
    start = time.perf_counter()
    if workers <= 1 or iterations < 2:
        rows = _run_chunk((lemmas, config, 0, iterations))
    else:
        bounds = np.linspace(0, iterations, workers + 1).astype(int)
        jobs = [(lemmas, config, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [row for chunk in pool.map(_run_chunk, jobs) for row in chunk]
    stats = []
    for k, name in enumerate(lemmas):
        held = lhs_true = skipped = 0
        found = []
        for row in rows:
            outcome = row[k]
            if outcome is None:
                skipped += 1
                continue
            held += 1
            lhs_true += bool(outcome[0])
            if outcome[1] is not None:
                found.append(outcome[1])
        stats.append(LemmaStats(name, len(rows), held, lhs_true, skipped, tuple(found)))
    return FalsifyReport(config.seed, iterations, tuple(stats), time.perf_counter() - start)
