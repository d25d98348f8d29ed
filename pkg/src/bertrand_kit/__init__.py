"""Bertrand curve pairs in three-dimensional Euclidean space.

Exact Frenet apparatus of analytic curves via Taylor-jet arithmetic,
construction and detection of Bertrand mates, closed-form apparatus of
the six spherical indicatrices of a pair, and numerical verification of
the identities that tie them together.
"""

from .bertrand import (
    BertrandPairModel,
    ConstancyStat,
    MateApparatus,
    RatioInvariants,
    bertrand_lambda,
    construct_mate,
    detect_bertrand,
    generate_bertrand_curve,
    generated_pair,
    geodesic_indicator_closed_form,
    linear_relation_fit,
    mate_apparatus_from_base,
    pair_constraint_residual,
    ratio_invariants,
    sphere_preset,
    DEFAULT_OMEGA,
    SPHERE_PRESETS,
)
from .classify import (
    CurveClass,
    PairClass,
    TheoremEntry,
    TheoremReport,
    classify_curve,
    pair_classify,
    theorem_suite,
)
from .curves import (
    AnalyticCurve,
    ArcLengthTable,
    Curve,
    FrenetData,
    JetBackedCurve,
    SampledCurve,
    arc_length,
    build_arclength_table,
    frenet_apparatus,
    frenet_grid,
    slant_geodesic_indicator,
)
from .errors import (
    BertrandKitError,
    DegenerateRatioError,
    DegenerateSphereCurveError,
    DomainError,
    ExprSyntaxError,
    GridMismatchError,
    IllConditionedError,
    NonConstantExponentError,
    NonConvergentError,
    NotAPairError,
    NotSphericalError,
    OrderOverflowError,
    OutOfDomainError,
    SingularPointError,
    TooFewSamplesError,
    UnknownFunctionError,
)
from .indicatrix import (
    AffineFit,
    ArcLengthRelations,
    IndicatrixKind,
    IndicatrixSample,
    binormal_indicatrix_apparatus,
    frame_relations_check,
    indicatrix_apparatus,
    indicatrix_arclength_relations,
    indicatrix_curve,
    normal_indicatrix_apparatus,
    tangent_indicatrix_apparatus,
)
from .io import (
    CurveFileError,
    RunReport,
    curve_from_dict,
    curve_to_dict,
    load_curve,
    save_curve,
)
from .jets import Jet, compose, evaluate_jet, invert_series

__version__ = "1.0.0"
