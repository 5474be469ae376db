"""Business-centric threat quantification.

Builds technical threat models, translates them into business threat
scenarios, runs business impact analysis with tangible and intangible
factors and recovery curves, and reduces each threat to a yearly monetary
figure that supports ranking, control evaluation (ROSI), and comparison
against qualitative baselines (risk matrix, DREAD).
"""

from .baselines import (
    DEFAULT_DREAD_THRESHOLDS,
    DEFAULT_MATRIX_POLICY,
    DreadAssessment,
    DreadGrade,
    DreadThresholds,
    MatrixRating,
    OrdinalLevel,
    ScoreRange,
    dread_score,
    matrix_priority,
)
from .bia import (
    BiaRecord,
    LossBreakdown,
    OneTimeImpact,
    PersistentImpact,
    RecoveryStage,
    classify_ciaa,
    compute_persistent_loss,
    compute_scenario_loss,
    suggest_factors,
)
from .catalog import (
    BUILTIN_FACTORS,
    KEYWORD_TABLE,
    FactorCatalog,
    ImpactFactor,
    LossKind,
    Tangibility,
    builtin_catalog,
)
from .model import (
    Asset,
    AssetKind,
    Duration,
    SecurityPrinciple,
    ThreatAssetLink,
    ThreatEffect,
    ThreatEvent,
    ThreatModel,
    ThreatScenario,
    Violation,
    build_threat_model,
    translate_to_scenarios,
    validate_model,
)
from .money import Money, convert_currency
from .pipeline import quantify_project, reference_divergences
from .project import (
    PlotKind,
    PlotSeries,
    ProjectFile,
    emit_plot_series,
    empty_project,
    export_report,
    load_fixture,
    load_project,
    save_project,
    validate_project,
)
from .quantify import (
    QuantifiedThreat,
    RosiResult,
    SecurityControl,
    evaluate_rosi,
    loss_expectancy,
    quantify_threat,
    rank_by_emergency,
    rank_by_impact,
)

__version__ = "0.1.0"
