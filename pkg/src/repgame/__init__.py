"""Exact toolkit for finite k-player one-round games.

Implements exact value computation by strategy enumeration, projection and
connectivity analysis, link-based game transformations with saturation, and a
verification harness for the inequalities connecting a game to its parallel
repetitions.
"""

from .core import (
    ACCEPT_ALL,
    BASE,
    DEFAULT_BUDGET,
    Game,
    GameValue,
    PredicateAtom,
    RepeatedGame,
    Strategy,
    accept_all,
    all_strategies,
    answers_on,
    base_predicate,
    check_strategy,
    evaluate,
    exact_value,
    exact_value_repeated,
    lift_strategy,
    local_search_value,
    marginal,
    repeated_game,
    strategy_space_size,
    validate_game,
)
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    DistributionNotNormalized,
    MaxPassesExceeded,
    MBlowup,
    NotLooselyConnected,
    NotProjection,
    NotUniformized,
    ParseError,
    PivotMismatch,
    PlayerOutOfRange,
    RepgameError,
    UncoveredVariable,
    UnknownLabel,
)
from .generators import (
    BUNDLED,
    GeneratorParams,
    chain3,
    chsh,
    diag3,
    ghz,
    random_projection_game,
    random_split_game,
    sat_consistency,
    sat_demo,
    single_tuple_game,
)
from .jsonio import parse_game, serialize_game
from .structure import (
    ConnectivityReport,
    ProjectionCounterexample,
    ProjectionWitness,
    QuestionLabeling,
    connectivity_report,
    decompose_loosely,
    graph_dot,
    is_connected,
    is_loosely_connected,
    is_player_wise_connected,
    is_projection,
)
from .transforms import (
    LinkDistribution,
    SaturationResult,
    check_transform_spec,
    consistency_probability,
    dedup_predicates,
    default_sweep,
    diagonal_floor,
    diagonal_mass,
    is_link_consistent,
    link_distribution,
    product_link_distribution,
    saturate,
    splice,
    support_closure,
    to_plain_game,
    transform,
    transform_seq,
    uniformize,
)
from .verify import (
    DecayPoint,
    PipelineComponent,
    PipelineReport,
    VerificationReport,
    bundled_suite,
    decay_csv,
    decay_curve,
    reports_to_csv,
    run_theorem_pipeline,
    verify_link_identity,
    verify_path_bound,
    verify_projection_preserved,
    verify_transform_bounds,
    verify_uniformize_preserved,
)

__version__ = "0.1.0"
