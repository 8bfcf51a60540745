"""Exact symbolic dynamics for the interval map x -> |1 - 1/x| on [0, infinity]."""

from .exact import (
    GOLDEN_FIXED_POINT,
    IDENTITY_MAP,
    INF,
    INFINITE_DISTANCE,
    ONE,
    ZERO,
    AmbiguousFixedPointError,
    ExtendedRational,
    InfiniteDistance,
    MobiusMap,
    NoFixedPointError,
    QuadraticSurd,
    escape_time,
    mobius_apply,
    mobius_fixed_point,
    phi_rat,
    phi_surd,
)
from .coding import (
    BRANCH_DOWN,
    BRANCH_UP,
    FULL_LINE,
    PSI0,
    PSI1,
    CodeStream,
    FareyInterval,
    InadmissibleWordError,
    PointEnclosure,
    admissible_words,
    code_of_rational,
    cylinder,
    is_admissible,
    iter_admissible_words,
    itinerary,
    periodic_point,
    phi_interval_image,
    point_of_code,
    shift,
    sigma_metric,
)
from .conjugacy import (
    DyadicRational,
    FareyLevel,
    FareyPropertyReport,
    conjugacy_check,
    f_map,
    farey_level,
    farey_properties_report,
    h_enclosure,
    h_inverse,
    h_level,
    h_rational,
)
from .entropy import (
    EntropyEstimate,
    MixingCertificate,
    TransitivityReport,
    count_admissible_words,
    dense_periodic_witness,
    entropy_lap,
    entropy_polynomial_root,
    entropy_word_growth,
    lap_count,
    mixing_certificate,
    transition_spectral_radius,
    transitivity_check,
    verify_cubic_factorization,
)
from .scrambled import (
    BlockLayout,
    EventOutcome,
    ScheduleEvent,
    ScrambleReport,
    alpha_transitive,
    c_block,
    c_star_block,
    enumerate_admissible,
    g_map,
    mu_code,
    rational_vs_tau,
    schedule_events,
    tau_code,
    verify_scrambling,
)

__version__ = "0.1.0"
