"""Dynamical entropies of finite-state stochastic systems.

The package computes and compares four finite-depth entropy notions of a
stochastic dynamical system observed through a partition of unity, their
rate estimates, and the decomposition functional whose one-time value has
a closed form and whose two-time landscape is searched numerically.
"""

__version__ = "0.1.0"

from ._errors import (
    CapExceededError,
    DocumentError,
    EntropyLabError,
    InequalityViolationError,
    ValidationError,
)
from .decompositions import (
    Decomposition,
    MultiDecomposition,
    entropy_defect,
    extremal_decompositions,
    from_densities,
    multi_marginal,
    to_densities,
    trivial_decomposition,
)
from .documents import (
    load_partition,
    load_system,
    parse_partition,
    parse_system,
    partition_to_document,
    system_to_document,
)
from .dynamical import (
    CntSearchResult,
    EntropyKind,
    EntropySequence,
    RateEstimate,
    SupResult,
    cnt_functional,
    cnt_onetime,
    cnt_search,
    entropy_sequence,
    hud_functional,
    iter_set_partitions,
    mutual_information,
    rate_estimate,
    rho_afl,
    rho_mak,
    sup_over_sharp,
)
from .entropy import (
    diag_restrict,
    eta,
    pushforward,
    relative_entropy,
    shannon_entropy,
    symmetric_eigenvalues,
    von_neumann_entropy,
)
from .partitions import (
    PartitionOfUnity,
    RefinedPartition,
    distribution,
    evolve,
    join,
    point_distribution,
    refine_afl,
    refine_mak,
    sharp_partition,
    simple_decomposition,
    uniform_unsharp,
    word_code,
    word_from_code,
    word_label,
    word_probability,
)
from .sampling import empirical_distribution, sample_words, tv_bound, tv_distance
from .systems import (
    StochasticSystem,
    make_bernoulli,
    make_deterministic,
    make_markov,
    stationary_measure,
    theta_apply,
)

__all__ = [name for name in dir() if not name.startswith("_")]
