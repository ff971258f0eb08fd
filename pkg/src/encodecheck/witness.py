"""Canonical witness relations and the lemma catalogue.

Each catalogue entry characterizes a criterion (or a combination of
criteria) by conditions on one relation over the combined source/target
domain. ``verify_lemma`` evaluates the criterion side, builds the entry's
canonical witness, checks every relation-side condition on it and reports
whether the two sides agree. Relations named ``RS``/``RT`` live on the
source/target carrier; the lemma relation always lives on the combined one.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import criteria
from .errors import PreconditionError, UnknownLemmaError
from .model import EncodingInstance, Pred
from .relations import (
    Rel,
    closure,
    closures,
    greatest_relation,
    inverse,
    is_equivalence,
    is_preorder,
    is_simulation,
    normalize_constraints,
    relation_respect,
    restrict,
)
from .verdict import HOLDS, Counterexample, Verdict

__all__ = [
    "LEMMAS",
    "LemmaArgs",
    "WitnessReport",
    "minimal_witness",
    "oc_witness",
    "fa_witness",
    "lift",
    "check_preconditions",
    "lemma_lhs",
    "lemma_witness",
    "lemma_rhs",
    "verify_lemma",
    "verify_rhs_only",
    "fa_restriction_sides",
    "fa_restriction_equiv",
    "vg12_check",
    "SIM_FOR_VARIANT",
]

LEMMAS = (
    "PRED-PRES", "DIV-REFL", "BARB-SENS", "SUCC-SENS",
    "FA-PREORDER", "FA-EQUIV",
    "OC-STRONG", "OC-STANDARD", "OC-WEAK",
    "COMB-DIV-SUCC", "COMB-TWO-PRED", "COMB-OC-SUCC", "COMB-OC-SUCC-BARB", "COMB-TRIPLE",
    "FA-RESTRICT", "FA-OC", "FA-OC-RS-BISIM", "FA-OC-SURJ",
    "VG12",
)

# Lemmas whose relation side is an existential over the combined domain.
EXISTENTIAL = frozenset(LEMMAS) - {"FA-RESTRICT", "FA-OC-RS-BISIM", "FA-OC-SURJ"}

SIM_FOR_VARIANT = {"strong": "strong-bisim", "standard": "weak-bisim", "weak": "correspondence-sim"}
_SUCCESS_FOR_VARIANT = {"strong": "has-success", "standard": "reaches-success", "weak": "reaches-success"}
_FIXED_VARIANT = {"OC-STRONG": "strong", "OC-STANDARD": "standard", "OC-WEAK": "weak"}
_DEFAULT_VARIANT = {"COMB-OC-SUCC": "weak", "COMB-OC-SUCC-BARB": "weak", "COMB-TRIPLE": "standard"}


@dataclass(frozen=True)
class LemmaArgs:
    """Arguments a catalogue entry may consume; unused fields are ignored."""

    RS: Rel | None = None
    RT: Rel | None = None
    R: Rel | None = None
    pred: str = "divergent"
    mode: str | None = None
    strength: str = "reaches"
    variant: str | None = None
    kind: str = "weak-bisim"
    constraints: tuple = ()
    preds: tuple = (("divergent", "reflect"), ("reaches-barb", "respect"))

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class WitnessReport:
    lemma: str
    relation: Rel | None
    lhs: Verdict
    rhs: tuple = ()
    preconditions: tuple = ()
    form: str = "iff"
    notes: dict = field(default_factory=dict)

    @property
    def rhs_holds(self):
        return all(v.holds for _, v in self.rhs)

    @property
    def holds(self):
        """The lemma statement evaluated on this instance."""
        if self.form == "implies":
            return (not self.lhs.holds) or self.rhs_holds
        return self.lhs.holds == self.rhs_holds

    def as_dict(self):
        return {
            "lemma": self.lemma,
            "form": self.form,
            "preconditions": {name: v.as_dict() for name, v in self.preconditions},
            "lhs": self.lhs.as_dict(),
            "rhs": {name: v.as_dict() for name, v in self.rhs},
            "rhs_holds": self.rhs_holds,
            "bi_implication": self.holds,
            "relation": None if self.relation is None else [list(p) for p in self.relation],
        }


def _require_lemma(lemma):
    if lemma not in LEMMAS:
        raise UnknownLemmaError(f"unknown lemma {lemma!r}; catalogue: {', '.join(LEMMAS)}")


def lift(enc: EncodingInstance, R: Rel | None) -> Rel:
    """View a source, target or combined relation over the combined carrier."""
    C = enc.combined
    return Rel.on(C, () if R is None else R.pairs)


def minimal_witness(enc: EncodingInstance) -> Rel:
    return Rel.on(enc.combined, ((s, enc[s]) for s in enc.source.states))


def oc_witness(enc: EncodingInstance, RT: Rel) -> Rel:
    return closures(minimal_witness(enc) | lift(enc, RT), ("refl", "trans"))


def _fa_core(enc, RS, RT, both_ways):
    M = minimal_witness(enc)
    core = M | lift(enc, RS) | lift(enc, RT)
    return core | inverse(M) if both_ways else core


def fa_witness(enc: EncodingInstance, RS: Rel, RT: Rel, version="preorder"):
    """Witness for full abstraction, returned as ``(relation, core)``.

    ``preorder``: ``trans(RS | RT | M | M^-1)`` where ``M`` relates each
    source state to its image. ``equivalence``: ``trans(sym(refl(RS | RT | M)))``
    with the unsymmetrized core ``RS | RT | M`` alongside.
    """
    if version == "preorder":
        bad = [n for n, r in (("RS", RS), ("RT", RT)) if not is_preorder(r)]
        if bad:
            raise PreconditionError(f"{' and '.join(bad)} must be preorders")
        core = _fa_core(enc, RS, RT, both_ways=True)
        return closure(core, "trans"), core
    if version == "equivalence":
        bad = [n for n, r in (("RS", RS), ("RT", RT)) if not is_equivalence(r)]
        if bad:
            raise PreconditionError(f"{' and '.join(bad)} must be equivalences")
        core = _fa_core(enc, RS, RT, both_ways=False)
        return closures(core, ("refl", "sym", "trans")), core
    raise ValueError(f"unknown full-abstraction version {version!r}")


def _fa_oc_witness(enc, RT):
    M = minimal_witness(enc)
    return closures(M | inverse(M) | lift(enc, RT), ("refl", "trans"))


# -- relation-side conditions ---------------------------------------------------

def _contains(R, required, what):
    return Verdict.of(Counterexample(p, None, "missing", f"{what} requires ({p[0]}, {p[1]})")
                      for p in sorted(required.pairs) if p not in R.pairs)


def _restriction_is(R, states, expected, name):
    got = restrict(R, states).pairs
    bad = [Counterexample(p, None, "missing", f"{name} pair absent from the restriction") for p in expected.pairs - got]
    bad += [Counterexample(p, None, "extra", f"restriction has a pair outside {name}") for p in got - expected.pairs]
    return Verdict.of(bad)


def _maps_into(enc, R, RT):
    """Every source-to-target pair (S, T) of R has (enc(S), T) in RT."""
    C = enc.combined
    bad = []
    for s, t in R:
        if C.origin(s) == "source" and C.origin(t) == "target" and (enc[s], t) not in RT.pairs:
            bad.append(Counterexample((s, t), None, "maps-into", f"({enc[s]}, {t}) is not in RT"))
    return Verdict.of(bad)


def _transitive(R):
    missing = closure(R, "trans").pairs - R.pairs
    return Verdict.of(Counterexample(p, None, "not-transitive", "pair forced by transitivity is absent")
                      for p in missing)


def _preorder(R):
    missing = [(s, s) for s in R.carrier if (s, s) not in R.pairs]
    v = Verdict.of(Counterexample(p, None, "not-reflexive", "identity pair absent") for p in missing)
    return v & _transitive(R)


def _as_verdict(flag, kind, detail):
    return HOLDS if flag else Verdict.fail(kind, (), detail)


def _variant(lemma, args):
    if lemma in _FIXED_VARIANT:
        return _FIXED_VARIANT[lemma]
    v = args.variant or _DEFAULT_VARIANT.get(lemma, "standard")
    if v not in SIM_FOR_VARIANT:
        raise ValueError(f"unknown variant {v!r}")
    return v


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise PreconditionError(f"missing relation argument(s) {', '.join(missing)}")


def check_preconditions(lemma, enc: EncodingInstance, args: LemmaArgs):
    """Hard gates of a catalogue entry as ``[(name, Verdict)]``."""
    _require_lemma(lemma)
    T = enc.target
    out = []
    if lemma == "FA-PREORDER":
        _need(args, "RS", "RT")
        out += [("RS preorder", _preorder(args.RS)), ("RT preorder", _preorder(args.RT))]
    elif lemma in ("FA-EQUIV", "FA-OC", "FA-OC-RS-BISIM", "FA-OC-SURJ"):
        _need(args, "RS", "RT")
        out += [("RS equivalence", _as_verdict(is_equivalence(args.RS), "not-equivalence", "RS is not an equivalence")),
                ("RT equivalence", _as_verdict(is_equivalence(args.RT), "not-equivalence", "RT is not an equivalence"))]
        if lemma == "FA-OC-SURJ":
            out += [("surjective", criteria.is_surjective(enc)),
                    ("full abstraction", criteria.full_abstraction(enc, args.RS, args.RT)),
                    ("operational correspondence", criteria.operational_correspondence(enc, args.RT, "standard"))]
    elif lemma in _FIXED_VARIANT or lemma in _DEFAULT_VARIANT:
        _need(args, "RT")
        v = _variant(lemma, args)
        kind = SIM_FOR_VARIANT[v]
        out += [("RT preorder", _preorder(args.RT)), (f"RT {kind}", is_simulation(kind, T, args.RT))]
        if lemma in _DEFAULT_VARIANT:
            out.append(("RT respects success", relation_respect(args.RT, T, Pred(_SUCCESS_FOR_VARIANT[v]), "respect")))
        if lemma == "COMB-TRIPLE":
            out.append(("RT reflects divergence", relation_respect(args.RT, T, Pred("divergent"), "reflect")))
    elif lemma == "FA-RESTRICT":
        _need(args, "RS", "RT")
        R = _fa_restrict_relation(enc, args)
        M = minimal_witness(enc)
        out += [("full abstraction", criteria.full_abstraction(enc, args.RS, args.RT)),
                ("R transitive", _transitive(R)),
                ("R contains both orientations of the encoding", _contains(R, M | inverse(M), "R"))]
    return out


def _fa_restrict_relation(enc, args):
    if args.R is not None:
        return lift(enc, args.R)
    return closure(_fa_core(enc, args.RS, args.RT, both_ways=True), "trans")


def lemma_lhs(lemma, enc: EncodingInstance, args: LemmaArgs) -> Verdict:
    """The criterion side of a catalogue entry."""
    _require_lemma(lemma)
    if lemma == "PRED-PRES":
        return criteria.check_pred_criterion(enc, Pred.parse(args.pred), args.mode or "reflect")
    if lemma == "DIV-REFL":
        return criteria.divergence_reflection(enc)
    if lemma == "BARB-SENS":
        return criteria.barb_sensitiveness(enc, args.mode or "respect", args.strength)
    if lemma == "SUCC-SENS":
        return criteria.success_sensitiveness(enc, args.strength)
    if lemma in ("FA-PREORDER", "FA-EQUIV"):
        return criteria.full_abstraction(enc, args.RS, args.RT)
    if lemma in _FIXED_VARIANT:
        return criteria.operational_correspondence(enc, args.RT, _variant(lemma, args))
    if lemma == "COMB-DIV-SUCC":
        return criteria.divergence_reflection(enc) & criteria.success_sensitiveness(enc, "reaches")
    if lemma == "COMB-TWO-PRED":
        v = HOLDS
        for pred, mode in normalize_constraints(args.preds):
            v = v & criteria.check_pred_criterion(enc, pred, mode)
        return v
    if lemma in _DEFAULT_VARIANT:
        var = _variant(lemma, args)
        v = criteria.operational_correspondence(enc, args.RT, var)
        v = v & criteria.success_sensitiveness(enc, "has" if var == "strong" else "reaches")
        if lemma == "COMB-OC-SUCC-BARB":
            v = v & criteria.barb_sensitiveness(enc, "respect", args.strength)
            v = v & relation_respect(args.RT, enc.target, Pred(f"{args.strength}-barb"), "respect")
        if lemma == "COMB-TRIPLE":
            v = v & criteria.divergence_reflection(enc)
        return v
    if lemma == "FA-RESTRICT":
        R = _fa_restrict_relation(enc, args)
        return _restriction_is(R, enc.source.states, lift(enc, args.RS), "RS")
    if lemma in ("FA-OC", "FA-OC-RS-BISIM"):
        return (criteria.full_abstraction(enc, args.RS, args.RT)
                & criteria.operational_correspondence(enc, args.RT, "standard")
                & is_simulation("weak-bisim", enc.target, args.RT))
    if lemma == "FA-OC-SURJ":
        return is_simulation("weak-bisim", enc.source, args.RS)
    if lemma == "VG12":
        return vg12_check(enc, args.kind, args.constraints)
    raise AssertionError(lemma)


def lemma_witness(lemma, enc: EncodingInstance, args: LemmaArgs) -> Rel | None:
    """The canonical witness relation of a catalogue entry."""
    _require_lemma(lemma)
    if lemma in ("PRED-PRES", "DIV-REFL", "BARB-SENS", "SUCC-SENS", "COMB-DIV-SUCC", "COMB-TWO-PRED"):
        return minimal_witness(enc)
    if lemma == "FA-PREORDER":
        return closure(_fa_core(enc, args.RS, args.RT, both_ways=True), "trans")
    if lemma == "FA-EQUIV":
        return closures(_fa_core(enc, args.RS, args.RT, both_ways=False), ("refl", "sym", "trans"))
    if lemma in _FIXED_VARIANT or lemma in _DEFAULT_VARIANT:
        return oc_witness(enc, args.RT)
    if lemma == "FA-RESTRICT":
        return _fa_restrict_relation(enc, args)
    if lemma in ("FA-OC", "FA-OC-RS-BISIM", "FA-OC-SURJ"):
        return _fa_oc_witness(enc, args.RT)
    if lemma == "VG12":
        return greatest_relation(args.kind, enc.combined, args.constraints)
    raise AssertionError(lemma)


def lemma_rhs(lemma, enc: EncodingInstance, args: LemmaArgs, R: Rel):
    """Relation-side conditions of a catalogue entry evaluated on ``R``."""
    _require_lemma(lemma)
    C = enc.combined
    R = lift(enc, R)
    M = minimal_witness(enc)
    src, tgt = enc.source.states, enc.target.states
    conds = []
    if lemma in ("PRED-PRES", "DIV-REFL", "BARB-SENS", "SUCC-SENS", "COMB-DIV-SUCC", "COMB-TWO-PRED"):
        conds.append(("contains encoding pairs", _contains(R, M, "the encoding")))
        if lemma == "PRED-PRES":
            pms = [(args.pred, args.mode or "reflect")]
        elif lemma == "DIV-REFL":
            pms = [("divergent", "reflect")]
        elif lemma == "BARB-SENS":
            pms = [(f"{args.strength}-barb", args.mode or "respect")]
        elif lemma == "SUCC-SENS":
            pms = [(f"{args.strength}-success", "respect")]
        elif lemma == "COMB-DIV-SUCC":
            pms = [("divergent", "reflect"), ("reaches-success", "respect")]
        else:
            pms = list(args.preds)
        for pred, mode in normalize_constraints(pms):
            conds.append((f"{mode}s {pred}", relation_respect(R, C, pred, mode)))
    elif lemma == "FA-PREORDER":
        conds += [("contains encoding pairs both ways", _contains(R, M | inverse(M), "the encoding")),
                  ("RS is the source restriction", _restriction_is(R, src, args.RS, "RS")),
                  ("RT is the target restriction", _restriction_is(R, tgt, args.RT, "RT")),
                  ("transitive", _transitive(R))]
    elif lemma == "FA-EQUIV":
        sym = closure(R, "sym")
        conds += [("contains encoding pairs", _contains(R, M, "the encoding")),
                  ("RS is the source restriction of sym(R)", _restriction_is(sym, src, args.RS, "RS")),
                  ("RT is the target restriction of sym(R)", _restriction_is(sym, tgt, args.RT, "RT")),
                  ("sym(R) preorder", _preorder(sym))]
    elif lemma in _FIXED_VARIANT or lemma in _DEFAULT_VARIANT:
        v = _variant(lemma, args)
        kind = SIM_FOR_VARIANT[v]
        conds += [("contains encoding pairs", _contains(R, M, "the encoding")),
                  ("RT is the target restriction", _restriction_is(R, tgt, args.RT, "RT")),
                  ("source-target pairs map into RT", _maps_into(enc, R, args.RT)),
                  ("preorder", _preorder(R)),
                  (kind, is_simulation(kind, C, R))]
        if lemma in _DEFAULT_VARIANT:
            succ = Pred(_SUCCESS_FOR_VARIANT[v])
            conds.append((f"respects {succ}", relation_respect(R, C, succ, "respect")))
        if lemma == "COMB-OC-SUCC-BARB":
            conds.append((f"respects {args.strength}-barb", relation_respect(R, C, Pred(f"{args.strength}-barb"), "respect")))
        if lemma == "COMB-TRIPLE":
            conds.append(("reflects divergent", relation_respect(R, C, Pred("divergent"), "reflect")))
    elif lemma == "FA-RESTRICT":
        conds.append(("images related in RT iff related in R", _images_agree(enc, args.RT, R)))
    elif lemma == "FA-OC":
        conds += [("contains encoding pairs both ways", _contains(R, M | inverse(M), "the encoding")),
                  ("RS is the source restriction", _restriction_is(R, src, args.RS, "RS")),
                  ("RT is the target restriction", _restriction_is(R, tgt, args.RT, "RT")),
                  ("transitive", _transitive(R)),
                  ("weak-bisim", is_simulation("weak-bisim", C, R))]
    elif lemma == "FA-OC-RS-BISIM":
        conds.append(("RS weak-bisim", is_simulation("weak-bisim", enc.source, args.RS)))
    elif lemma == "FA-OC-SURJ":
        conds.append(("RT weak-bisim", is_simulation("weak-bisim", enc.target, args.RT)))
    elif lemma == "VG12":
        conds += [("contains encoding pairs", _contains(R, M, "the encoding")),
                  (args.kind, is_simulation(args.kind, C, R))]
        for pred, mode in normalize_constraints(args.constraints):
            conds.append((f"{mode}s {pred}", relation_respect(R, C, pred, mode)))
    return conds


def _images_agree(enc, RT, R):
    bad = []
    for s1 in enc.source.states:
        for s2 in enc.source.states:
            pair = (enc[s1], enc[s2])
            if (pair in RT.pairs) != (pair in R.pairs):
                where = "RT" if pair in RT.pairs else "R"
                bad.append(Counterexample((s1, s2), None, "images-disagree", f"({pair[0]}, {pair[1]}) only in {where}"))
    return Verdict.of(bad)


def _gate(lemma, enc, args):
    pre = check_preconditions(lemma, enc, args)
    failed = [name for name, v in pre if not v.holds]
    if failed:
        raise PreconditionError(f"{lemma}: precondition(s) failed: {', '.join(failed)}", failed=failed, report=pre)
    return pre


def verify_lemma(lemma, enc: EncodingInstance, args: LemmaArgs | None = None) -> WitnessReport:
    _require_lemma(lemma)
    args = args or LemmaArgs()
    pre = _gate(lemma, enc, args)
    lhs = lemma_lhs(lemma, enc, args)
    witness = lemma_witness(lemma, enc, args)
    rhs = lemma_rhs(lemma, enc, args, witness)
    form = "implies" if lemma == "FA-OC-RS-BISIM" else "iff"
    notes = {}
    if lemma in _DEFAULT_VARIANT:
        notes["variant"] = _variant(lemma, args)
    return WitnessReport(lemma, witness, lhs, tuple(rhs), tuple(pre), form, notes)


def verify_rhs_only(lemma, enc: EncodingInstance, R: Rel, args: LemmaArgs | None = None) -> Verdict:
    """All relation-side conditions of ``lemma`` evaluated on a given ``R``."""
    _require_lemma(lemma)
    args = args or LemmaArgs()
    _gate(lemma, enc, args.with_(R=R) if lemma == "FA-RESTRICT" else args)
    out = HOLDS
    for name, v in lemma_rhs(lemma, enc, args, R):
        out = out & Verdict.of(replace(c, kind=f"{name}: {c.kind}") for c in v.counterexamples)
    return out


def fa_restriction_sides(enc, RS, RT, R):
    """Both sides of the restriction-equivalence statement as verdicts."""
    args = LemmaArgs(RS=RS, RT=RT, R=R)
    _gate("FA-RESTRICT", enc, args)
    left = lemma_lhs("FA-RESTRICT", enc, args)
    right = _images_agree(enc, RT, lift(enc, R))
    return left, right


def fa_restriction_equiv(enc, RS, RT, R) -> Verdict:
    left, right = fa_restriction_sides(enc, RS, RT, R)
    if left.holds == right.holds:
        return HOLDS
    return Verdict.fail("disagreement", (), f"left side {'holds' if left.holds else 'fails'}, "
                                            f"right side {'holds' if right.holds else 'fails'}")


def vg12_check(enc: EncodingInstance, kind, constraints=()) -> Verdict:
    """Every source state is related to its image by the greatest relation of
    ``kind`` (under the constraints) over the combined domain."""
    G = greatest_relation(kind, enc.combined, constraints)
    return Verdict.of(Counterexample((s, enc[s]), None, "unrelated",
                                     f"({s}, {enc[s]}) is outside the greatest {kind}")
                      for s in enc.source.states if (s, enc[s]) not in G.pairs)
