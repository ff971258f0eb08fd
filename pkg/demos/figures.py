# The three figure instances, replayed step by step.
#
#   python3 demos/figures.py

from encodecheck import (
    divergence_reflection,
    fixture,
    full_abstraction,
    greatest_relation,
    is_simulation,
    operational_correspondence,
    verify_lemma,
)
from encodecheck.witness import LemmaArgs, vg12_check

# Figure 1: correspondence and divergence reflection both hold ...
enc, rels = fixture("fig1")
RT = rels["RT"]
print("fig1 RT:", RT)
print("oc (standard):", operational_correspondence(enc, RT, "standard"))
print("divergence reflection:", divergence_reflection(enc))

report = verify_lemma("OC-STANDARD", enc, LemmaArgs(RT=RT))
print("OC-STANDARD witness:", report.relation)
print("bi-implication:", report.holds)

# ... yet no source-target correspondence simulation relating every s to
# its image reflects divergence: s1 -> s2 has to be matched through t3.
print("vg12, reflect divergence:", vg12_check(enc, "correspondence-sim", [("divergent", "reflect")]))

# Figure 2: full abstraction without operational correspondence.
enc, rels = fixture("fig2")
RS, RT = rels["RS"], rels["RT"]
print()
print("fig2 full abstraction:", full_abstraction(enc, RS, RT))
print("fig2 oc (standard):", operational_correspondence(enc, RT, "standard"))
print("RS bisimulation:", is_simulation("weak-bisim", enc.source, RS).holds)
print("RT bisimulation:", is_simulation("weak-bisim", enc.target, RT).holds)

# Figure 3: the greatest barb-respecting correspondence simulation over the
# targets separates t2 from t3, coupled similarity does not.
enc, rels = fixture("fig3")
T = enc.target
corr = greatest_relation("correspondence-sim", T, [("reaches-barb", "respect")])
coupled = greatest_relation("coupled-sim", T, [("reaches-barb", "preserve")])
print()
for pair in (("t2", "t3"), ("t3", "t2")):
    print(pair, "corr-sim:", pair in corr, "coupled-sim:", pair in coupled)

report = verify_lemma("COMB-OC-SUCC-BARB", enc, LemmaArgs(RT=rels["RT"]))
print("weak oc + success + barbs, criterion side:")
print(report.lhs)
