"""Encodability criteria decided on a concrete encoding instance."""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import EncodingInstance, Pred
from .relations import MODES, Rel
from .verdict import Counterexample, Verdict

__all__ = [
    "Verdict",
    "Counterexample",
    "CriterionSpec",
    "VARIANTS",
    "STRENGTHS",
    "check_pred_criterion",
    "divergence_reflection",
    "success_sensitiveness",
    "barb_sensitiveness",
    "full_abstraction",
    "operational_correspondence",
    "is_surjective",
]

VARIANTS = ("strong", "standard", "weak")
STRENGTHS = ("has", "reaches")


@dataclass(frozen=True)
class CriterionSpec:
    name: str
    preds: tuple = ()
    mode: str | None = None
    variant: str | None = None
    strength: str | None = None
    relations: dict = field(default_factory=dict)


def check_pred_criterion(enc: EncodingInstance, pred, mode) -> Verdict:
    """Compare ``pred`` at every source state with ``pred`` at its image."""
    if isinstance(pred, str):
        pred = Pred.parse(pred)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    preds = pred.expand(enc.alphabet)
    src, tgt = enc.source, enc.target
    bad = []
    for s in src.states:
        t = enc[s]
        for p in preds:
            hs, ht = src.holds(s, p), tgt.holds(t, p)
            if mode != "reflect" and hs and not ht:
                bad.append(Counterexample((s, t), None, "preserve", f"{p} holds at {s} but not at its image {t}"))
            if mode != "preserve" and ht and not hs:
                bad.append(Counterexample((s, t), None, "reflect", f"{p} holds at image {t} but not at {s}"))
    return Verdict.of(bad)


def divergence_reflection(enc: EncodingInstance) -> Verdict:
    return check_pred_criterion(enc, Pred("divergent"), "reflect")


def _strength(strength):
    if strength not in STRENGTHS:
        raise ValueError(f"unknown strength {strength!r}; expected has or reaches")
    return strength


def success_sensitiveness(enc: EncodingInstance, strength="reaches") -> Verdict:
    return check_pred_criterion(enc, Pred(f"{_strength(strength)}-success"), "respect")


def barb_sensitiveness(enc: EncodingInstance, mode="respect", strength="reaches") -> Verdict:
    return check_pred_criterion(enc, Pred(f"{_strength(strength)}-barb"), mode)


def full_abstraction(enc: EncodingInstance, RS: Rel, RT: Rel) -> Verdict:
    bad = []
    for s1 in enc.source.states:
        for s2 in enc.source.states:
            t1, t2 = enc[s1], enc[s2]
            in_s, in_t = (s1, s2) in RS, (t1, t2) in RT
            if in_s and not in_t:
                bad.append(Counterexample((s1, s2), None, "completeness",
                                          f"({s1}, {s2}) is in RS but ({t1}, {t2}) is not in RT"))
            elif in_t and not in_s:
                bad.append(Counterexample((s1, s2), None, "soundness",
                                          f"({t1}, {t2}) is in RT but ({s1}, {s2}) is not in RS"))
    return Verdict.of(bad)


def operational_correspondence(enc: EncodingInstance, RT: Rel, variant="standard") -> Verdict:
    """Completeness and (weak) soundness of the encoding modulo ``RT``.

    ``strong`` matches single steps with single steps; ``standard`` and
    ``weak`` quantify over weak steps, and ``weak`` soundness lets the target
    derivative move on before it is compared.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    src, tgt = enc.source, enc.target
    if variant == "strong":
        src_moves, tgt_moves = src.successors, tgt.successors
    else:
        src_moves = {s: sorted(src.weak_derivatives(s)) for s in src.states}
        tgt_moves = {t: sorted(tgt.weak_derivatives(t)) for t in tgt.states}
    rt_img = RT.image()
    arrow = "->" if variant == "strong" else "=>"
    bad = []
    for s in src.states:
        t0 = enc[s]
        for s1 in src_moves[s]:
            partners = rt_img.get(enc[s1], set())
            if partners.isdisjoint(tgt_moves[t0]):
                bad.append(Counterexample((s, s1), (s, s1), "completeness",
                                          f"{s} {arrow} {s1} is not simulated by {t0} modulo RT"))
        images = [enc[s1] for s1 in src_moves[s]]
        for t in tgt_moves[t0]:
            if variant == "weak":
                ok = any(not rt_img.get(i, set()).isdisjoint(tgt.weak_derivatives(t)) for i in images)
            else:
                ok = any(t in rt_img.get(i, ()) for i in images)
            if not ok:
                bad.append(Counterexample((s, t), (t0, t), "soundness",
                                          f"{t0} {arrow} {t} matches no {arrow}-derivative of {s} modulo RT"))
    return Verdict.of(bad)


def is_surjective(enc: EncodingInstance) -> Verdict:
    hit = set(enc.mapping.values())
    return Verdict.of(Counterexample((t,), None, "no-preimage", f"{t} is not the image of any source state")
                      for t in enc.target.states if t not in hit)
