"""Sequence prefixes, complexity estimators and finite-n profiles."""
from .estimators import Compress, Estimator, EstimatorRefusal, Exact, Oracle, log_term
from .generators import (
    Custom,
    HaltingChar,
    Interleave,
    Prefix,
    RandomPool,
    SequenceGen,
    ThueMorse,
    ZeroDilute,
    Zeros,
    example_pair,
    ordered_pair,
)
from .profiles import (
    DimDepth,
    ImStar,
    LemmaCheck,
    PrefixProfile,
    SuperDeepReport,
    dim_depth_profile,
    dim_lemma_check,
    dim_mutual_info,
    dim_profile,
    dim_t_profile,
    im_star,
    levin_mi_profile,
    super_deep_diag,
)
