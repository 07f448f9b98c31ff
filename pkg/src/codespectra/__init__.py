"""Random matrices from linear codes and their Marchenko-Pastur spectra."""

__version__ = "0.1.0"

from .codes import (
    LinearCode,
    bch_dual_code,
    builtin_code,
    gold_code,
    hamming_code,
    macwilliams_transform,
    read_generator_file,
    repetition_code,
    simplex_code,
    weight_distribution,
    write_generator_file,
)
from .ensemble import GramMatrix, SampledMatrix, gram, sample_matrix, trial_seed
from .errors import BudgetExceededError, CodeConstructionError, SpectralError
from .gf import FieldCtx, FieldElement, additive_character, field_arith, trace
from .moments import (
    MomentReport,
    c_A,
    el_bound,
    exhaustive_moment,
    moment_main_term,
    monte_carlo_moments,
)
from .paths import (
    PathClass,
    ReductionTrace,
    brute_force_W,
    count_gamma,
    enumerate_path_classes,
    exact_expected_moment,
    reduce,
    verify_class,
)
from .spectra import MPLaw, SpectralSample, eigenvalues, esd, mp_cdf, mp_moment, sup_distance, theorem_bound
