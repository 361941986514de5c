"""Interval type-2 fuzzy rule-based classifier with cluster-based class
representation: per-class subtractive clustering proposes rule antecedents,
dual fuzzifiers open an interval footprint of uncertainty, and an interval
fuzzy reasoning method classifies patterns.
"""
from .dataset import (
    Dataset,
    NormalizationParams,
    Pattern,
    SplitSpec,
    apply_normalizer,
    fit_normalizer,
    gen_circular,
    gen_irregular,
    load_csv,
    load_features_csv,
    normalize_dataset,
    save_csv,
    split,
)
from .errors import ConfigError, DataError, InternalError
from .evaluation import (
    ExperimentConfig,
    ExperimentReport,
    RunResult,
    accuracy,
    confusion_matrix,
    emit_report,
    run_experiment,
    train_and_score,
)
from .inference import (
    AssociationInterval,
    ClassificationResult,
    SoundnessInterval,
    association_degrees,
    classify,
    classify_batch,
    matching_degree,
    quasiarithmetic_mean,
    soundness,
)
from .rulebase import (
    ClusterPrototype,
    Fuzzifiers,
    MembershipInterval,
    Rule,
    RuleBase,
    build_rulebase,
    certainty_degrees,
    export_rules_text,
    load_rulebase,
    membership_interval,
    memberships_single_fuzzifier,
    save_rulebase,
)
from .subclust import PotentialField, SubclustParams, initial_potentials, revise_potentials, subtractive_cluster

__version__ = "0.1.0"

__all__ = [
    "AssociationInterval",
    "ClassificationResult",
    "ClusterPrototype",
    "ConfigError",
    "DataError",
    "Dataset",
    "ExperimentConfig",
    "ExperimentReport",
    "Fuzzifiers",
    "InternalError",
    "MembershipInterval",
    "NormalizationParams",
    "Pattern",
    "PotentialField",
    "Rule",
    "RuleBase",
    "RunResult",
    "SoundnessInterval",
    "SplitSpec",
    "SubclustParams",
    "accuracy",
    "apply_normalizer",
    "association_degrees",
    "build_rulebase",
    "certainty_degrees",
    "classify",
    "classify_batch",
    "confusion_matrix",
    "emit_report",
    "export_rules_text",
    "fit_normalizer",
    "gen_circular",
    "gen_irregular",
    "initial_potentials",
    "load_csv",
    "load_features_csv",
    "load_rulebase",
    "matching_degree",
    "membership_interval",
    "memberships_single_fuzzifier",
    "normalize_dataset",
    "quasiarithmetic_mean",
    "revise_potentials",
    "run_experiment",
    "save_csv",
    "save_rulebase",
    "soundness",
    "split",
    "subtractive_cluster",
    "train_and_score",
]
