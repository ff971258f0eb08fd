"""Checker and witness synthesis for encodability criteria between finite
reduction systems."""
from .criteria import (
    barb_sensitiveness,
    divergence_reflection,
    full_abstraction,
    is_surjective,
    operational_correspondence,
    success_sensitiveness,
)
from .errors import EncodabilityError
from .harness import FalsifyReport, GenConfig, falsify, fixture, generate
from .instance_format import dump_document, parse_instance
from .model import EncodingInstance, Pred, ReductionSystem, combine, system, validate_instance
from .oracles import brute_force_exists_rhs, brute_force_greatest
from .relations import (
    Rel,
    closure,
    closures,
    greatest_relation,
    inverse,
    is_simulation,
    lemma5_containment,
    relation_properties,
    relation_respect,
    restrict,
)
from .verdict import Counterexample, Verdict
from .witness import LEMMAS, LemmaArgs, WitnessReport, fa_witness, minimal_witness, oc_witness, verify_lemma, verify_rhs_only

__version__ = "0.1.0"
