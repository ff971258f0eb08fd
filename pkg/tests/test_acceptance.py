"""Acceptance criteria 1-7. Each test records one PASS/FAIL line, printed in
the terminal summary. All verdicts are exact booleans; the only numeric
tolerances are the pinned limits below."""
import io
import json
import time

from encodecheck.cli import run
from encodecheck.criteria import (
    barb_sensitiveness,
    divergence_reflection,
    full_abstraction,
    operational_correspondence,
)
from encodecheck.harness import GenConfig, falsify, fixture, generate, repair
from encodecheck.instance_format import dump_document, dumps, parse_instance
from encodecheck.model import EncodingInstance, ReductionSystem
from encodecheck.oracles import brute_force_exists_rhs, brute_force_greatest, literal_is_simulation
from encodecheck.relations import (
    KINDS,
    greatest_relation,
    inverse,
    is_simulation,
    lemma5_containment,
    relation_respect,
)
from encodecheck.witness import LEMMAS, LemmaArgs, minimal_witness, verify_lemma, vg12_check

FIXTURE_SECONDS = 1.0
FALSIFY_SECONDS = 60.0
ORACLE_INSTANCES = 50
ROUND_TRIP_FILES = 100


def test_criterion_1_fig1(acceptance):
    start = time.perf_counter()
    enc, rels = fixture("fig1")
    RT = rels["RT"]
    checks = {
        "oc standard holds": operational_correspondence(enc, RT, "standard").holds,
        "divergence reflection holds": divergence_reflection(enc).holds,
        "OC-STANDARD bi-implication": verify_lemma("OC-STANDARD", enc, LemmaArgs(RT=RT)).holds,
        "vg12 corr-sim reflecting divergence fails":
            not vg12_check(enc, "correspondence-sim", [("divergent", "reflect")]).holds,
    }
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < FIXTURE_SECONDS
    failed = [k for k, v in checks.items() if not v]
    assert acceptance(1, ok, f"fig1, {elapsed:.3f}s, failed: {failed or 'none'}")


def _move_step(enc):
    source = ReductionSystem(enc.source.states, enc.source.steps | {("s2", "s3")},
                             enc.source.barbs, enc.source.success)
    target = ReductionSystem(enc.target.states, enc.target.steps - {("t2", "t3")},
                             enc.target.barbs, enc.target.success)
    return EncodingInstance(source, target, enc.mapping)


def test_criterion_2_fig2(acceptance):
    start = time.perf_counter()
    enc, rels = fixture("fig2")
    RS, RT = rels["RS"], rels["RT"]
    oc = operational_correspondence(enc, RT, "standard")
    mutant = _move_step(enc)
    checks = {
        "full abstraction": full_abstraction(enc, RS, RT).holds,
        "oc fails at s2: t2 => t3": [(c.subject, c.challenge) for c in oc.counterexamples]
                                    == [(("s2", "t3"), ("t2", "t3"))],
        "RS weak-bisim": is_simulation("weak-bisim", enc.source, RS).holds,
        "RT not weak-bisim": not is_simulation("weak-bisim", enc.target, RT).holds,
        "mutant full abstraction": full_abstraction(mutant, RS, RT).holds,
        "mutant RS not weak-bisim": not is_simulation("weak-bisim", mutant.source, RS).holds,
        "mutant RT weak-bisim": is_simulation("weak-bisim", mutant.target, RT).holds,
    }
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < FIXTURE_SECONDS
    failed = [k for k, v in checks.items() if not v]
    assert acceptance(2, ok, f"fig2, {elapsed:.3f}s, failed: {failed or 'none'}")


def test_criterion_3_fig3(acceptance):
    start = time.perf_counter()
    enc, rels = fixture("fig3")
    R = rels["R_corr_sim"]
    C, T = enc.combined, enc.target
    corr = greatest_relation("correspondence-sim", T, [("reaches-barb", "respect")])
    # barbed coupled simulation: both simulations preserve weak barbs, so
    # their kernel (coupled similarity) respects them
    coupled = greatest_relation("coupled-sim", T, [("reaches-barb", "preserve")])
    report = verify_lemma("COMB-OC-SUCC-BARB", enc, LemmaArgs(RT=rels["RT"]))
    checks = {
        "R_corr_sim is a correspondence simulation": is_simulation("correspondence-sim", C, R).holds,
        "R_corr_sim respects reaches-barb": relation_respect(R, C, "reaches-barb", "respect").holds,
        "R_corr_sim contains every (S, [S])": minimal_witness(enc).pairs <= R.pairs,
        "(t2,t3), (t3,t2) outside greatest corr-sim": not ({("t2", "t3"), ("t3", "t2")} & corr.pairs),
        "(t2,t3), (t3,t2) inside greatest coupled-sim": {("t2", "t3"), ("t3", "t2")} <= coupled.pairs,
        "coupled kernel respects reaches-barb":
            relation_respect(coupled & inverse(coupled), T, "reaches-barb", "respect").holds,
        "barb sensitiveness (weak) holds": barb_sensitiveness(enc).holds,
        "COMB-OC-SUCC-BARB LHS false": not report.lhs.holds,
    }
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < FIXTURE_SECONDS
    failed = [k for k, v in checks.items() if not v]
    assert acceptance(3, ok, f"fig3, {elapsed:.3f}s, failed: {failed or 'none'}")


def test_criterion_4_oracles(acceptance):
    cfg = GenConfig(seed=4, max_src=2, max_tgt=2, pair_density=0.3)
    constraint_sets = [(), (("reaches-barb", "respect"),), (("divergent", "reflect"), ("has-success", "respect"))]
    instances = greatest_mismatch = lemma_mismatch = lemma_checks = 0
    exercised = set()
    index = 0
    while instances < ORACLE_INSTANCES:
        gen = generate(cfg, index)
        index += 1
        C = gen.enc.combined
        if len(C.states) > 4:
            continue
        instances += 1
        for kind in KINDS:
            for cons in constraint_sets:
                if greatest_relation(kind, C, cons).pairs != brute_force_greatest(kind, C, cons).pairs:
                    greatest_mismatch += 1
        for lemma in LEMMAS:
            args = repair(lemma, gen)
            if args is None:
                continue
            report = verify_lemma(lemma, gen.enc, args)
            exists = brute_force_exists_rhs(lemma, gen.enc, args)
            if report.form == "iff":
                expected = exists == report.lhs.holds
            else:
                expected = (not report.lhs.holds) or exists
            lemma_checks += 1
            exercised.add(lemma)
            if report.holds != expected or report.rhs_holds != exists:
                lemma_mismatch += 1
    ok = greatest_mismatch == 0 and lemma_mismatch == 0 and exercised == set(LEMMAS)
    assert acceptance(4, ok, f"{instances} instances, {lemma_checks} lemma checks, "
                             f"greatest mismatches {greatest_mismatch}, lemma mismatches {lemma_mismatch}, "
                             f"lemmas exercised {len(exercised)}/19")


def test_criterion_5_falsify(acceptance):
    report = falsify("all", GenConfig(seed=7, max_src=4, max_tgt=5), 1000)
    exercised = sum(1 for s in report.lemmas if s.preconditions_held > 0)
    ok = (report.ok and len(report.lemmas) == 19 and exercised == 19
          and report.elapsed < FALSIFY_SECONDS)
    assert acceptance(5, ok, f"seed 7, 1000 iterations, {len(report.discrepancies)} discrepancies, "
                             f"{exercised}/19 lemmas exercised, {report.elapsed:.1f}s")


def test_criterion_6_hierarchy(acceptance):
    cfg = GenConfig(seed=7)
    violations = relations_seen = literal_checks = 0
    for index in range(300):
        gen = generate(cfg, index)
        enc = gen.enc
        candidates = [(enc.source, gen.relations["RS"]), (enc.target, gen.relations["RT"]),
                      (enc.combined, gen.relations["R"])]
        candidates += [(enc.combined, greatest_relation(k, enc.combined)) for k in KINDS]
        candidates += [(enc.target, greatest_relation(k, enc.target, within=gen.relations["RT"])) for k in KINDS]
        for sys, R in candidates:
            relations_seen += 1
            verdicts = {k: is_simulation(k, sys, R).holds for k in KINDS}
            if verdicts["strong-bisim"] and not verdicts["weak-bisim"]:
                violations += 1
            if verdicts["weak-bisim"] and not verdicts["correspondence-sim"]:
                violations += 1
            sym = R & inverse(R)
            if is_simulation("coupled-sim", sys, sym).holds and not is_simulation("weak-bisim", sys, sym).holds:
                violations += 1
            if verdicts["correspondence-sim"] and not lemma5_containment(sys, R).holds:
                violations += 1
            if len(sys.states) <= 5:
                for k in KINDS:
                    literal_checks += 1
                    if literal_is_simulation(k, sys, R) != verdicts[k]:
                        violations += 1
    ok = violations == 0
    assert acceptance(6, ok, f"{relations_seen} relations, {literal_checks} literal comparisons, "
                             f"{violations} violations")


def _machine(argv):
    out = io.StringIO()
    code = run(argv, out, io.StringIO())
    return code, out.getvalue()


def test_criterion_7_determinism(acceptance, tmp_path):
    cfg = GenConfig(seed=7)
    first = json.dumps(falsify("all", cfg, 60).as_dict(), sort_keys=True)
    second = json.dumps(falsify("all", cfg, 60, workers=2).as_dict(), sort_keys=True)
    argv = ["--format", "machine", "falsify", "--lemma", "all", "--seed", "7", "--iters", "30"]
    cli_same = _machine(argv) == _machine(argv)
    round_trips = 0
    for index in range(ROUND_TRIP_FILES):
        gen = generate(cfg, index)
        path = tmp_path / f"corpus{index:03d}.instance"
        path.write_text(dumps(gen.document()), encoding="utf-8")
        enc, rels = parse_instance(str(path))
        text = dumps(dump_document(enc, rels))
        enc2, rels2 = parse_instance(text)
        if enc2 == enc == gen.enc and rels2 == rels and dumps(dump_document(enc2, rels2)) == text:
            round_trips += 1
    ok = first == second and cli_same and round_trips == ROUND_TRIP_FILES
    assert acceptance(7, ok, f"reports identical: {first == second and cli_same}, "
                             f"round trips {round_trips}/{ROUND_TRIP_FILES}")
