# Building an encoding by hand and asking which criteria it meets.
#
# The source language has a two-step protocol s0 -> s1 -> s2 (s2 is
# successful). The target splits the first step through an intermediate
# state m that has already committed to the exchange.

from encodecheck import EncodingInstance, Rel, closures, system, verify_lemma
from encodecheck import operational_correspondence, success_sensitiveness
from encodecheck.witness import LemmaArgs

src = system(["s0", "s1", "s2"], [("s0", "s1"), ("s1", "s2")], success=["s2"])
tgt = system(["t0", "m", "t1", "t2"], [("t0", "m"), ("m", "t1"), ("t1", "t2")], success=["t2"])
enc = EncodingInstance(src, tgt, {"s0": "t0", "s1": "t1", "s2": "t2"})

print(success_sensitiveness(enc))

# With plain identity on the targets, m has no counterpart ...
ident = Rel.identity(tgt.states, "target")
for variant in ("strong", "standard", "weak"):
    print(variant, operational_correspondence(enc, ident, variant).holds)

# ... weak correspondence lets m catch up with t1 first.
report = verify_lemma("OC-WEAK", enc, LemmaArgs(RT=ident))
print(report.lhs.holds, report.rhs_holds)
for name, verdict in report.rhs:
    print(" ", name, verdict.holds)

# Relating m with t1 repairs standard correspondence too; the relation is
# still a preorder and the witness is rebuilt from it.
RT = closures(ident | {("t1", "m"), ("m", "t1")}, ["trans"])
report = verify_lemma("OC-WEAK", enc, LemmaArgs(RT=RT))
print("standard with m~t1:", operational_correspondence(enc, RT, "standard").holds)
print("witness:", report.relation)
