"""Interval fuzzy reasoning: classify patterns against a rule base.

Pipeline per pattern: matching degree (interval membership to each rule's
prototype) -> association degree (matching interval times the rule's
per-class certainty) -> soundness degree per class (quasiarithmetic mean
over the rules with non-zero association, applied bound-wise) -> decision
(class with the highest interval midpoint; ties go to the lowest index).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .rulebase import MembershipInterval, RuleBase, membership_bounds, membership_interval


@dataclass(frozen=True)
class AssociationInterval:
    """Association degree interval of one rule with one class."""

    lower: float
    upper: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper:
            raise DataError(f"invalid association interval [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class SoundnessInterval:
    """Aggregated per-class evidence interval."""

    lower: float
    upper: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper:
            raise DataError(f"invalid soundness interval [{self.lower}, {self.upper}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


@dataclass(frozen=True)
class ClassificationResult:
    predicted: int
    soundness: tuple[SoundnessInterval, ...]
    scores: np.ndarray
    no_rule_fired: bool = False

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=float)
        s.flags.writeable = False
        object.__setattr__(self, "scores", s)


def quasiarithmetic_mean(values, p: float) -> float:
    """Power mean ((1/s) * sum a_l^p)^(1/p) over non-negative values.

    Tends to min as p -> -inf and max as p -> +inf; p = 0 (the geometric
    limit) is rejected. Computed with max/min scaling so extreme p stays
    stable. For p < 0 a zero value forces the limit 0.
    """
    if p == 0.0:
        raise ConfigError("aggregation exponent p=0 is not supported")
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        raise ConfigError("quasiarithmetic mean needs at least one value")
    if np.any(vals < 0):
        raise ConfigError("quasiarithmetic mean is defined for non-negative values")
    if p > 0:
        peak = float(vals.max())
        if peak == 0.0:
            return 0.0
        return peak * float(((vals / peak) ** p).mean() ** (1.0 / p))
    low = float(vals.min())
    if low == 0.0:
        return 0.0
    return low * float(((vals / low) ** p).mean() ** (1.0 / p))


def _power_mean_rows(vals: np.ndarray, mask: np.ndarray, p: float) -> np.ndarray:
    """Row-wise power mean of the masked entries; rows with no entry -> 0."""
    n = vals.shape[0]
    out = np.zeros(n)
    count = mask.sum(axis=1)
    rows = count > 0
    if not rows.any():
        return out
    masked = np.where(mask, vals, np.nan)
    if p > 0:
        scale = np.where(rows, np.nanmax(masked, axis=1, initial=-np.inf), 0.0)
        live = rows & (scale > 0)
        if live.any():
            ratio = np.where(mask & live[:, None], vals / np.where(scale > 0, scale, 1.0)[:, None], 0.0)
            out[live] = scale[live] * ((ratio[live] ** p).sum(axis=1) / count[live]) ** (1.0 / p)
    else:
        has_zero = (np.where(mask, vals, 1.0) == 0.0).any(axis=1)
        live = rows & ~has_zero
        if live.any():
            scale = np.where(live, np.nanmin(masked, axis=1, initial=np.inf), 1.0)
            ratio = np.where(mask & live[:, None], vals / np.where(scale > 0, scale, 1.0)[:, None], 1.0)
            powered = np.where(mask & live[:, None], ratio**p, 0.0)
            out[live] = scale[live] * (powered[live].sum(axis=1) / count[live]) ** (1.0 / p)
    return out


def matching_degree(x, rb: RuleBase) -> list[MembershipInterval]:
    """Interval membership of a normalized pattern to each rule antecedent.

    Rules have a single antecedent, so the matching degree is exactly the
    membership interval to the rule's prototype.
    """
    return membership_interval(x, rb.prototypes, rb.fuzzifiers)


def association_degrees(match: list[MembershipInterval], rb: RuleBase) -> list[list[AssociationInterval]]:
    """Matrix (c rules x M classes) of matching intervals scaled by certainty."""
    if len(match) != rb.num_rules:
        raise DataError("one matching interval per rule required")
    return [
        [
            AssociationInterval(iv.lower * float(r), iv.upper * float(r))
            for r in rb.certainty[k]
        ]
        for k, iv in enumerate(match)
    ]


def soundness(assoc: list[list[AssociationInterval]], p: float) -> list[SoundnessInterval]:
    """Aggregate association intervals per class with the power mean.

    A rule participates in class j's aggregation when its upper association
    bound is positive; the mean is applied to lower and upper bounds
    separately. No participating rule leaves the class at [0, 0].
    """
    if not assoc:
        return []
    num_classes = len(assoc[0])
    result = []
    for j in range(num_classes):
        lowers = [row[j].lower for row in assoc if row[j].upper > 0.0]
        uppers = [row[j].upper for row in assoc if row[j].upper > 0.0]
        if not uppers:
            result.append(SoundnessInterval(0.0, 0.0))
            continue
        result.append(
            SoundnessInterval(quasiarithmetic_mean(lowers, p), quasiarithmetic_mean(uppers, p))
        )
    return result


def _soundness_bounds(
    lower: np.ndarray, upper: np.ndarray, certainty: np.ndarray, p: float
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class soundness bound matrices (n, M) from membership bounds (n, c)."""
    n = lower.shape[0]
    M = certainty.shape[1]
    y_lower = np.zeros((n, M))
    y_upper = np.zeros((n, M))
    for j in range(M):
        r = certainty[:, j][None, :]
        assoc_lower = lower * r
        assoc_upper = upper * r
        firing = assoc_upper > 0.0
        y_lower[:, j] = _power_mean_rows(assoc_lower, firing, p)
        y_upper[:, j] = _power_mean_rows(assoc_upper, firing, p)
    return y_lower, y_upper


def classify_batch(X, rb: RuleBase) -> tuple[np.ndarray, np.ndarray]:
    """Classify raw-unit patterns (n, N); returns (predictions, scores).

    Normalization is applied internally; scores are the per-class soundness
    interval midpoints and predictions their row argmax (ties -> lowest
    class index).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != rb.num_features:
        raise DataError(
            f"input has {X.shape[1]} features but model expects {rb.num_features}"
        )
    Xn = rb.normalization.apply(X)
    lower, upper = membership_bounds(Xn, rb.prototypes, rb.fuzzifiers)
    y_lower, y_upper = _soundness_bounds(lower, upper, rb.certainty, rb.aggregation_p)
    scores = 0.5 * (y_lower + y_upper)
    return scores.argmax(axis=1), scores


def classify(x, rb: RuleBase) -> ClassificationResult:
    """Classify one raw-unit pattern with full interval detail."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DataError("classify expects a single feature vector")
    if x.shape[0] != rb.num_features:
        raise DataError(f"input has {x.shape[0]} features but model expects {rb.num_features}")
    xn = rb.normalization.apply(x)
    lower, upper = membership_bounds(xn[None, :], rb.prototypes, rb.fuzzifiers)
    y_lower, y_upper = _soundness_bounds(lower, upper, rb.certainty, rb.aggregation_p)
    scores = 0.5 * (y_lower[0] + y_upper[0])
    intervals = tuple(
        SoundnessInterval(float(lo), float(up)) for lo, up in zip(y_lower[0], y_upper[0])
    )
    no_rule = bool(np.all(scores == 0.0))
    return ClassificationResult(
        predicted=int(scores.argmax()),
        soundness=intervals,
        scores=scores,
        no_rule_fired=no_rule,
    )
