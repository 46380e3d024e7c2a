import logging

from .core.base import ProblemManager, estimate_report, verify_fixtures
from .core.caps import DEFAULT_CAPS, resolve_caps
from .core.modules import (Code, all_submodules, big_M, decompose, max_min_genset_size, mu_local, reconstruct,
                           socle)
from .core.monomial import (BettiTable, Monomial, MonomialIdeal, betti, ideal_from_text, ideal_of_code,
                            independent_sets_from_ideal, taylor_cancellation_report, taylor_ranks, weights_from_betti)
from .core.ring import RingElem, RingSpec, arith, idempotents, inverse, is_unit, make_ring, radical_data
from .core.support import (SupportSpec, code_support, decompose_modular, evaluate, is_modular, is_support,
                           support_from_json)
from .core.verifications import CapExceededError, HypothesisError, MismatchError, ModsuppError, ValidationError
from .core.weights import (WeightProfile, circuits, estimate_maximal, gen_weights_fast, gen_weights_oracle,
                           matroid_independent_sets, maximal_generation, min_codewords, monte_carlo_maximal,
                           special_genset)

logging.getLogger(__name__).addHandler(logging.NullHandler())

# A hardcoded __all__ variable is necessary to appease
# `mypy --strict` running in projects that import modsupp.
__all__ = (
    # Top-level classes
    "ProblemManager",
    "Code",
    "RingSpec",
    "RingElem",
    "SupportSpec",
    "Monomial",
    "MonomialIdeal",
    "BettiTable",
    "WeightProfile",
    # Errors
    "ModsuppError",
    "ValidationError",
    "HypothesisError",
    "CapExceededError",
    "MismatchError",
    # Top-level functions
    "DEFAULT_CAPS",
    "resolve_caps",
    "make_ring",
    "arith",
    "is_unit",
    "inverse",
    "idempotents",
    "radical_data",
    "decompose",
    "reconstruct",
    "socle",
    "mu_local",
    "big_M",
    "all_submodules",
    "max_min_genset_size",
    "evaluate",
    "is_support",
    "is_modular",
    "decompose_modular",
    "code_support",
    "support_from_json",
    "min_codewords",
    "gen_weights_fast",
    "gen_weights_oracle",
    "special_genset",
    "circuits",
    "matroid_independent_sets",
    "maximal_generation",
    "estimate_maximal",
    "monte_carlo_maximal",
    "ideal_of_code",
    "ideal_from_text",
    "betti",
    "weights_from_betti",
    "taylor_cancellation_report",
    "taylor_ranks",
    "independent_sets_from_ideal",
    "estimate_report",
    "verify_fixtures",
)
