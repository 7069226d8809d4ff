"""Idempotent-generated semigroups of partition-preserving transformations."""

from .combinatorics import idempotent_count, migs_count, rank_and_idrank
from .core import (
    IncompatiblePartitions,
    InvalidGenerator,
    InvalidInput,
    Partition,
    PartTransformation,
    SizeLimitExceeded,
    compose,
    count_all,
    enumerate_all,
    from_json,
    identity,
    is_idempotent,
    make_e_ij_f,
    make_g_k,
    make_partition,
    profile,
)
from .elements import ElementSet
from .generators import (
    GeneratingSetSpec,
    factorize_idempotent,
    full_idempotent_generators,
    minimal_generating_set,
    rank_generating_set,
)
from .oracle import (
    BudgetExceeded,
    SearchBudget,
    closure,
    enumerate_idempotents,
    exhaustive_migs,
    exhaustive_rank,
    generates,
    idempotent_generated,
)

__version__ = "0.1.0"

__all__ = [
    "ElementSet",
    "BudgetExceeded",
    "GeneratingSetSpec",
    "IncompatiblePartitions",
    "InvalidGenerator",
    "InvalidInput",
    "PartTransformation",
    "Partition",
    "SearchBudget",
    "SizeLimitExceeded",
    "closure",
    "compose",
    "count_all",
    "enumerate_all",
    "enumerate_idempotents",
    "exhaustive_migs",
    "exhaustive_rank",
    "factorize_idempotent",
    "from_json",
    "full_idempotent_generators",
    "generates",
    "idempotent_count",
    "idempotent_generated",
    "identity",
    "is_idempotent",
    "make_e_ij_f",
    "make_g_k",
    "make_partition",
    "migs_count",
    "minimal_generating_set",
    "profile",
    "rank_and_idrank",
    "rank_generating_set",
]
