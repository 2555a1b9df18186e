"""Exact leakage analysis for arithmetic-masked modular-reduction wires.

The library answers one question about the internal wire of a masked
Barrett-style reduction over Z_q: for a fixed secret, how many masks
send the wire to each output value?  Everything else — support gaps,
min-entropy floors, composition behavior — is bookkeeping on top of
those preimage counts.
"""

from ._version import VERSION as __version__
from .gadgets import (
    BarrettParams,
    ScopeConditionError,
    WireGadget,
    barrett_algebraic_eval,
    barrett_nat_eval,
    identity_mask_eval,
    make_barrett_gadget,
    make_identity_gadget,
)
from .leakage import (
    MAX_LEAKAGE_BITS,
    EntropyBound,
    barrier_table,
    max_output_probability,
    min_entropy,
)
from .modring import Modulus, ZqElem, branch_offset, reduce, sub
from .pipeline import (
    CompositionReport,
    PipelineSpec,
    compose,
    compose_fresh,
    compose_shared,
)
from .preimage import (
    EquivalenceReport,
    MultiplicityProfile,
    TrichotomyReport,
    WitnessReport,
    count_bruteforce,
    count_closedform,
    counts_bruteforce_all,
    counts_closedform_all,
    equivalence_check,
    multiplicity_profile,
    sample_secrets,
    support_gap_observed,
    support_gap_predicted_extended,
    support_gap_predicted_paper,
    tightness_witness_search,
    trichotomy_check,
)
from .presets import PRESETS, Preset, get_preset

__all__ = [
    "__version__",
    "Modulus",
    "ZqElem",
    "reduce",
    "sub",
    "branch_offset",
    "BarrettParams",
    "ScopeConditionError",
    "WireGadget",
    "barrett_algebraic_eval",
    "barrett_nat_eval",
    "identity_mask_eval",
    "make_barrett_gadget",
    "make_identity_gadget",
    "MultiplicityProfile",
    "WitnessReport",
    "TrichotomyReport",
    "EquivalenceReport",
    "count_bruteforce",
    "count_closedform",
    "counts_bruteforce_all",
    "counts_closedform_all",
    "multiplicity_profile",
    "sample_secrets",
    "trichotomy_check",
    "support_gap_observed",
    "support_gap_predicted_paper",
    "support_gap_predicted_extended",
    "tightness_witness_search",
    "equivalence_check",
    "EntropyBound",
    "MAX_LEAKAGE_BITS",
    "max_output_probability",
    "min_entropy",
    "barrier_table",
    "PipelineSpec",
    "CompositionReport",
    "compose",
    "compose_fresh",
    "compose_shared",
    "Preset",
    "PRESETS",
    "get_preset",
]
