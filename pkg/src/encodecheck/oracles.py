"""Independent brute-force oracles for the fixpoint engine and the lemmas.

Relations over ``n`` states are encoded as bitmasks (bit ``i*n + j`` is the
pair of the i-th and j-th state), so every relation over a carrier of at most
four states can be enumerated as one numpy array of 65536 masks and every
condition evaluated on all of them at once.

Nothing here reuses the optimized code paths: reachability and divergence are
recomputed from the step list (divergence as "some path of length |states|
exists"), and simulations are checked with the literal weak-step challenges
of their definitions, zero-step challenges included.
"""
from __future__ import annotations

import numpy as np

from .errors import TooLargeError
from .model import EncodingInstance, Pred, ReductionSystem
from .relations import Rel, normalize_constraints
from .witness import EXISTENTIAL, LemmaArgs, SIM_FOR_VARIANT, _DEFAULT_VARIANT, _FIXED_VARIANT, _require_lemma

__all__ = [
    "MAX_ENUM_STATES",
    "LiteralSystem",
    "literal_is_simulation",
    "brute_force_greatest",
    "brute_force_exists_rhs",
    "all_relations",
]

MAX_ENUM_STATES = 4


class LiteralSystem:
    """Reachability facts of a system recomputed with boolean matrices."""

    def __init__(self, sys: ReductionSystem):
        self.sys = sys
        self.states = list(sys.states)
        self.n = n = len(self.states)
        self.idx = {s: i for i, s in enumerate(self.states)}
        step = np.zeros((n, n), dtype=bool)
        for x, y in sys.steps:
            step[self.idx[x], self.idx[y]] = True
        self.step = step
        reach = np.eye(n, dtype=bool)
        for _ in range(max(n, 1)):
            reach = reach | ((reach.astype(np.uint8) @ step.astype(np.uint8)) > 0)
        self.reach = reach
        # a path of n steps must revisit a state
        walk = np.eye(n, dtype=np.uint8)
        for _ in range(n):
            walk = ((walk @ step.astype(np.uint8)) > 0).astype(np.uint8)
        self.divergent = walk.any(axis=1) if n else np.zeros(0, dtype=bool)

    def weak(self, i):
        return np.flatnonzero(self.reach[i]).tolist()

    def succ(self, i):
        return np.flatnonzero(self.step[i]).tolist()

    def holds(self, i, pred: Pred):
        s = self.states[i]
        if pred.kind == "divergent":
            return bool(self.divergent[i])
        if pred.kind == "has-success":
            return s in self.sys.success
        if pred.kind == "reaches-success":
            return any(self.states[j] in self.sys.success for j in self.weak(i))
        if pred.kind == "has-barb":
            return pred.barb in self.sys.barbs.get(s, ())
        return any(pred.barb in self.sys.barbs.get(self.states[j], ()) for j in self.weak(i))


class _Masks:
    def __init__(self, lit: LiteralSystem, masks):
        self.lit = lit
        self.n = lit.n
        self.masks = masks
        self.dtype = masks.dtype

    def bit(self, i, j):
        return 1 << (i * self.n + j)

    def block(self, xs, ys):
        m = 0
        for i in xs:
            for j in ys:
                m |= self.bit(i, j)
        return m

    def _const(self, m):
        return m if self.dtype == object else self.dtype.type(m)

    def has(self, i, j):
        return self.meets(self.bit(i, j))

    def meets(self, m):
        return np.asarray((self.masks & self._const(m)) != 0, dtype=bool)

    def contains(self, m):
        m = self._const(m)
        return np.asarray((self.masks & m) == m, dtype=bool)

    def block_equals(self, block, value):
        return np.asarray((self.masks & self._const(block)) == self._const(value), dtype=bool)

    def avoids(self, m):
        return np.asarray((self.masks & self._const(m)) == 0, dtype=bool)

    def transitive(self):
        ok = np.ones(self.masks.shape, dtype=bool)
        for i in range(self.n):
            for j in range(self.n):
                hij = self.has(i, j)
                for k in range(self.n):
                    ok &= ~(hij & self.has(j, k)) | self.has(i, k)
        return ok

    def reflexive(self):
        return self.contains(self.block_diag())

    def block_diag(self):
        m = 0
        for i in range(self.n):
            m |= self.bit(i, i)
        return m

    def symmetrized(self):
        out = self.masks.copy()
        for i in range(self.n):
            for j in range(self.n):
                out = out | np.where(self.has(i, j), self._const(self.bit(j, i)), self._const(0))
        return _Masks(self.lit, out)

    def simulation(self, kind):
        lit = self.lit
        ok = np.ones(self.masks.shape, dtype=bool)
        for p in range(self.n):
            for q in range(self.n):
                wp, wq = lit.weak(p), lit.weak(q)
                pair_ok = np.ones(self.masks.shape, dtype=bool)
                if kind == "strong-bisim":
                    for p1 in lit.succ(p):
                        pair_ok &= self.meets(self.block([p1], lit.succ(q)))
                    for q1 in lit.succ(q):
                        pair_ok &= self.meets(self.block(lit.succ(p), [q1]))
                elif kind == "weak-bisim":
                    for p1 in wp:
                        pair_ok &= self.meets(self.block([p1], wq))
                    for q1 in wq:
                        pair_ok &= self.meets(self.block(wp, [q1]))
                elif kind == "coupled-sim":
                    for p1 in wp:
                        pair_ok &= self.meets(self.block([p1], wq))
                        pair_ok &= self.meets(self.block(wq, [p1]))
                elif kind == "correspondence-sim":
                    for p1 in wp:
                        pair_ok &= self.meets(self.block([p1], wq))
                    for q1 in wq:
                        pair_ok &= self.meets(self.block(wp, lit.weak(q1)))
                else:
                    raise ValueError(kind)
                ok &= ~self.has(p, q) | pair_ok
        return ok

    def violating_pairs(self, preds_modes):
        """Bitmask of pairs that break a per-pair respect constraint."""
        lit = self.lit
        m = 0
        for preds, mode in preds_modes:
            for i in range(self.n):
                for j in range(self.n):
                    for p in preds:
                        hi, hj = lit.holds(i, p), lit.holds(j, p)
                        if (mode != "reflect" and hi and not hj) or (mode != "preserve" and hj and not hi):
                            m |= self.bit(i, j)
        return m


def all_relations(n):
    if n > MAX_ENUM_STATES:
        raise TooLargeError(f"{n} states exceed the enumeration bound of {MAX_ENUM_STATES}")
    return np.arange(1 << (n * n), dtype=np.uint32)


def _to_rel(lit, mask, over=None):
    pairs = [(lit.states[b // lit.n], lit.states[b % lit.n]) for b in range(lit.n * lit.n) if (int(mask) >> b) & 1]
    return Rel(tuple(lit.states), frozenset(pairs), over)


def _from_rel(lit, R):
    m = 0
    for x, y in R.pairs:
        m |= 1 << (lit.idx[x] * lit.n + lit.idx[y])
    return m


def _expanded(sys, constraints):
    return [(pred.expand(sys.alphabet), mode) for pred, mode in normalize_constraints(constraints)]


def literal_is_simulation(kind, sys: ReductionSystem, R: Rel) -> bool:
    """Check ``R`` against the weak-step (literal) definition of ``kind``."""
    lit = LiteralSystem(sys)
    # beyond 64 pairs the mask is kept as a Python int
    dtype = np.uint64 if lit.n <= 8 else object
    space = _Masks(lit, np.array([_from_rel(lit, R)], dtype=dtype))
    return bool(space.simulation(kind)[0])


def brute_force_greatest(kind, sys: ReductionSystem, constraints=(), over=None) -> Rel:
    """Union of all relations of ``kind`` meeting the constraints, by enumeration."""
    if len(sys.states) > MAX_ENUM_STATES:
        raise TooLargeError(f"{len(sys.states)} states exceed the enumeration bound of {MAX_ENUM_STATES}")
    lit = LiteralSystem(sys)
    space = _Masks(lit, all_relations(lit.n))
    ok = space.simulation(kind) & space.avoids(space.violating_pairs(_expanded(sys, constraints)))
    union = int(np.bitwise_or.reduce(space.masks[ok])) if ok.any() else 0
    return _to_rel(lit, union, over)


def brute_force_exists_rhs(lemma, enc: EncodingInstance, args: LemmaArgs | None = None) -> bool:
    """Whether some relation over the combined domain meets the lemma's full
    relation-side condition, decided by exhaustive enumeration.

    The three catalogue entries that are not existential statements
    (FA-RESTRICT, FA-OC-RS-BISIM, FA-OC-SURJ) have their relation side
    recomputed with the literal checkers instead.
    """
    _require_lemma(lemma)
    args = args or LemmaArgs()
    C = enc.combined
    if lemma not in EXISTENTIAL:
        return _literal_fixed_rhs(lemma, enc, args)
    if len(C.states) > MAX_ENUM_STATES:
        raise TooLargeError(f"combined domain has {len(C.states)} states; enumeration bound is {MAX_ENUM_STATES}")
    lit = LiteralSystem(C)
    sp = _Masks(lit, all_relations(lit.n))
    src = [lit.idx[s] for s in enc.source.states]
    tgt = [lit.idx[t] for t in enc.target.states]
    enc_mask = 0
    for s in enc.source.states:
        enc_mask |= sp.bit(lit.idx[s], lit.idx[enc[s]])
    inv_mask = 0
    for s in enc.source.states:
        inv_mask |= sp.bit(lit.idx[enc[s]], lit.idx[s])

    def rel_mask(rel):
        return 0 if rel is None else _from_rel(lit, rel)

    if lemma in ("PRED-PRES", "DIV-REFL", "BARB-SENS", "SUCC-SENS", "COMB-DIV-SUCC", "COMB-TWO-PRED", "VG12"):
        if lemma == "PRED-PRES":
            cons = [(args.pred, args.mode or "reflect")]
        elif lemma == "DIV-REFL":
            cons = [("divergent", "reflect")]
        elif lemma == "BARB-SENS":
            cons = [(f"{args.strength}-barb", args.mode or "respect")]
        elif lemma == "SUCC-SENS":
            cons = [(f"{args.strength}-success", "respect")]
        elif lemma == "COMB-DIV-SUCC":
            cons = [("divergent", "reflect"), ("reaches-success", "respect")]
        elif lemma == "COMB-TWO-PRED":
            cons = list(args.preds)
        else:
            cons = list(args.constraints)
        ok = sp.contains(enc_mask) & sp.avoids(sp.violating_pairs(_expanded(C, cons)))
        if lemma == "VG12":
            ok &= sp.simulation(args.kind)
        return bool(ok.any())

    if lemma == "FA-PREORDER":
        ok = (sp.contains(enc_mask | inv_mask)
              & sp.block_equals(sp.block(src, src), rel_mask(args.RS))
              & sp.block_equals(sp.block(tgt, tgt), rel_mask(args.RT))
              & sp.transitive())
        return bool(ok.any())

    if lemma == "FA-EQUIV":
        sym = sp.symmetrized()
        ok = (sp.contains(enc_mask)
              & sym.block_equals(sp.block(src, src), rel_mask(args.RS))
              & sym.block_equals(sp.block(tgt, tgt), rel_mask(args.RT))
              & sym.reflexive() & sym.transitive())
        return bool(ok.any())

    if lemma == "FA-OC":
        ok = (sp.contains(enc_mask | inv_mask)
              & sp.block_equals(sp.block(src, src), rel_mask(args.RS))
              & sp.block_equals(sp.block(tgt, tgt), rel_mask(args.RT)))
        ok &= sp.transitive()
        ok &= sp.simulation("weak-bisim")
        return bool(ok.any())

    # operational-correspondence family
    variant = _FIXED_VARIANT.get(lemma) or args.variant or _DEFAULT_VARIANT[lemma]
    kind = SIM_FOR_VARIANT[variant]
    RT = args.RT
    outside = 0
    for s in enc.source.states:
        for t in enc.target.states:
            if (enc[s], t) not in RT.pairs:
                outside |= sp.bit(lit.idx[s], lit.idx[t])
    cons = []
    if lemma in _DEFAULT_VARIANT:
        cons.append(("has-success" if variant == "strong" else "reaches-success", "respect"))
    if lemma == "COMB-OC-SUCC-BARB":
        cons.append((f"{args.strength}-barb", "respect"))
    if lemma == "COMB-TRIPLE":
        cons.append(("divergent", "reflect"))
    ok = (sp.contains(enc_mask)
          & sp.block_equals(sp.block(tgt, tgt), rel_mask(RT))
          & sp.avoids(outside)
          & sp.avoids(sp.violating_pairs(_expanded(C, cons)))
          & sp.reflexive())
    if not ok.any():
        return False
    ok &= sp.transitive()
    if not ok.any():
        return False
    ok &= sp.simulation(kind)
    return bool(ok.any())


def _literal_fixed_rhs(lemma, enc, args):
    if lemma == "FA-OC-RS-BISIM":
        return literal_is_simulation("weak-bisim", enc.source, args.RS)
    if lemma == "FA-OC-SURJ":
        return literal_is_simulation("weak-bisim", enc.target, args.RT)
    # FA-RESTRICT: images agree between RT and the lemma relation
    R = args.R
    if R is None:
        from .witness import lemma_witness
        R = lemma_witness(lemma, enc, args)
    for s1 in enc.source.states:
        for s2 in enc.source.states:
            pair = (enc[s1], enc[s2])
            if (pair in args.RT.pairs) != (pair in R.pairs):
                return False
    return True
