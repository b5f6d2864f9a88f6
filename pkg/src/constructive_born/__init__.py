"""Constructive-logic account of quantum measurement: Kripke forcing over
pre/post-measurement frames, rational replica weights, and a seeded Born sampler."""

from . import errors
from .gleason import FrameAssignment, born_assignment, check_additivity, check_exclusivity
from .kripke import (
    KripkeModel,
    build_model,
    eval3,
    forces,
    load_model,
    measurement_frame,
    modal_forces,
    pihc_frame,
    post_valuation,
)
from .logic import TruthValue3, desugar_xor, parse, unparse
from .measurement import (
    ExperimentStats,
    MeasurementRecord,
    apply_record_to_frame,
    exactly_one,
    run_experiment,
    sample,
)
from .quantum import (
    CompositeState,
    SampleSpace,
    StateVector,
    apply_swap,
    born_probability,
    new_state,
    premeasurement_evolve,
    schmidt_rank,
)
from .weights import WeightVector, expand_replicas, to_weights, weight_probability

__version__ = "0.1.0"
