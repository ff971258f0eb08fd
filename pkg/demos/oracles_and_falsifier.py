# Cross-checking the fixpoint engine against exhaustive enumeration, then
# running the lemma falsifier.

import time

import numpy as np

from encodecheck import GenConfig, brute_force_greatest, falsify, generate, greatest_relation
from encodecheck.oracles import all_relations
from encodecheck.relations import KINDS

# every relation over four states is one 16-bit mask
masks = all_relations(4)
print(masks.shape, masks.dtype, np.count_nonzero(masks & 1))

cfg = GenConfig(seed=11, max_src=2, max_tgt=2)
agree = total = 0
for i in range(30):
    C = generate(cfg, i).enc.combined
    if len(C.states) > 4:
        continue
    for kind in KINDS:
        total += 1
        agree += greatest_relation(kind, C).pairs == brute_force_greatest(kind, C).pairs
print(f"{agree}/{total} greatest relations agree")

t = time.perf_counter()
report = falsify("all", GenConfig(seed=7), 200)
print(report.render())
print(f"{time.perf_counter() - t:.1f}s")
