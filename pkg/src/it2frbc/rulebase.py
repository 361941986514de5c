"""Rule-base construction for the interval type-2 fuzzy classifier.

Each rule has a single antecedent: an interval type-2 fuzzy set defined by
a cluster prototype. A pattern's membership to prototype k under fuzzifier
m follows the fuzzy-partition form

    mu_k = 1 / sum_q (d_k / d_q)^(2/(m-1)),

where d_k is the Euclidean distance to prototype k, so memberships over
all c prototypes sum to 1. Evaluating with two fuzzifiers m1 and m2 and
taking the pointwise min/max yields the interval [lower_k, upper_k] —
the footprint of uncertainty of the rule's antecedent.

The rule consequent is a certainty vector over classes, estimated from the
training patterns' interval-midpoint memberships.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, NormalizationParams, _freeze
from .errors import ConfigError, DataError
from .subclust import SubclustParams, subtractive_cluster

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Fuzzifiers:
    """Lower/upper fuzziness exponents (both > 1, m1 <= m2).

    m1 == m2 degenerates to an ordinary type-1 membership (zero-width
    intervals); m1 < m2 opens the footprint of uncertainty.
    """

    m1: float = 1.5
    m2: float = 2.5

    def __post_init__(self):
        if not (self.m1 > 1.0 and self.m2 > 1.0):
            raise ConfigError("fuzzifiers must be greater than 1")
        if self.m1 > self.m2:
            raise ConfigError("m1 must not exceed m2")


@dataclass(frozen=True)
class ClusterPrototype:
    """A cluster center in normalized feature space, tagged with its class."""

    center: np.ndarray
    source_class: int

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        if c.ndim != 1:
            raise DataError("prototype center must be a 1-D vector")
        object.__setattr__(self, "center", _freeze(c))


@dataclass(frozen=True)
class MembershipInterval:
    """Primary-membership interval [lower, upper] within [0,1]."""

    lower: float
    upper: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise DataError(f"invalid membership interval [{self.lower}, {self.upper}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class Rule:
    """IF x is near the prototype THEN certainty vector over classes."""

    antecedent: ClusterPrototype
    certainty: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.certainty, dtype=float)
        if r.ndim != 1:
            raise DataError("certainty must be a vector over classes")
        object.__setattr__(self, "certainty", _freeze(r))


@dataclass(frozen=True)
class RuleBase:
    """The persisted model: c prototypes, their certainty vectors, and the
    parameters needed to classify raw patterns (normalization, fuzzifiers,
    aggregation exponent)."""

    prototypes: np.ndarray
    source_classes: np.ndarray
    certainty: np.ndarray
    fuzzifiers: Fuzzifiers
    normalization: NormalizationParams
    class_names: tuple[str, ...]
    aggregation_p: float = 2.0

    def __post_init__(self):
        P = np.asarray(self.prototypes, dtype=float)
        src = np.asarray(self.source_classes, dtype=np.int64)
        R = np.asarray(self.certainty, dtype=float)
        if P.ndim != 2 or P.shape[0] < 1:
            raise DataError("prototypes must be a non-empty (c, N) array")
        if src.shape != (P.shape[0],):
            raise DataError("one source class per prototype required")
        if R.shape != (P.shape[0], len(self.class_names)):
            raise DataError("certainty must be a (c, num_classes) matrix")
        if P.shape[1] != self.normalization.num_features:
            raise DataError("prototype dimensionality must match normalization")
        if self.aggregation_p == 0.0:
            raise ConfigError("aggregation exponent p=0 is not supported")
        object.__setattr__(self, "prototypes", _freeze(P))
        object.__setattr__(self, "source_classes", _freeze(src))
        object.__setattr__(self, "certainty", _freeze(R))
        object.__setattr__(self, "class_names", tuple(str(c) for c in self.class_names))

    @property
    def num_rules(self) -> int:
        return self.prototypes.shape[0]

    @property
    def num_features(self) -> int:
        return self.prototypes.shape[1]

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    @property
    def rules(self) -> list[Rule]:
        return [
            Rule(ClusterPrototype(self.prototypes[k], int(self.source_classes[k])), self.certainty[k])
            for k in range(self.num_rules)
        ]


def membership_matrix(X: np.ndarray, prototypes: np.ndarray, m: float) -> np.ndarray:
    """Fuzzy-partition memberships of each row of X to each prototype, (n, c).

    Rows sum to 1. A pattern coinciding with t prototypes gets 1/t on each
    of those and 0 elsewhere.
    """
    if not m > 1.0:
        raise ConfigError("fuzzifier must be greater than 1")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    P = np.atleast_2d(np.asarray(prototypes, dtype=float))
    if X.shape[1] != P.shape[1]:
        raise DataError(f"input has {X.shape[1]} features but prototypes have {P.shape[1]}")
    diff = X[:, None, :] - P[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    out = np.zeros_like(d)
    exponent = 2.0 / (m - 1.0)
    zero_rows = (d == 0.0).any(axis=1)

    regular = ~zero_rows
    if regular.any():
        dr = d[regular]
        # Scale by the row minimum so powers stay <= 1 (no overflow for
        # sharp fuzzifiers / tiny distances).
        ratio = dr / dr.min(axis=1, keepdims=True)
        w = ratio ** (-exponent)
        out[regular] = w / w.sum(axis=1, keepdims=True)
    for i in np.flatnonzero(zero_rows):
        hits = d[i] == 0.0
        out[i, hits] = 1.0 / hits.sum()
    return out


def memberships_single_fuzzifier(x, prototypes, m: float) -> np.ndarray:
    """Memberships of a single pattern vector, shape (c,)."""
    return membership_matrix(np.asarray(x, dtype=float)[None, :], prototypes, m)[0]


def membership_bounds(
    X: np.ndarray, prototypes: np.ndarray, fz: Fuzzifiers
) -> tuple[np.ndarray, np.ndarray]:
    """Lower/upper membership matrices (n, c) from the two fuzzifiers."""
    mu1 = membership_matrix(X, prototypes, fz.m1)
    mu2 = membership_matrix(X, prototypes, fz.m2)
    return np.minimum(mu1, mu2), np.maximum(mu1, mu2)


def membership_interval(x, prototypes, fz: Fuzzifiers) -> list[MembershipInterval]:
    """Footprint-of-uncertainty interval of one pattern per prototype."""
    lower, upper = membership_bounds(np.asarray(x, dtype=float)[None, :], prototypes, fz)
    return [MembershipInterval(float(lo), float(up)) for lo, up in zip(lower[0], upper[0])]


def certainty_degrees(train: Dataset, prototypes, fz: Fuzzifiers) -> np.ndarray:
    """Certainty matrix (c, M): per rule, the class shares of the summed
    interval-midpoint memberships over all training patterns."""
    if len(train) == 0:
        raise DataError("certainty degrees need a non-empty training set")
    if np.any(train.labels < 0):
        raise DataError("certainty degrees need every training pattern labeled")
    P = np.atleast_2d(np.asarray(prototypes, dtype=float))
    lower, upper = membership_bounds(train.features, P, fz)
    U = 0.5 * (lower + upper)  # (n, c)

    c = P.shape[0]
    M = train.num_classes
    per_class = np.zeros((c, M))
    for j in range(M):
        per_class[:, j] = U[train.labels == j].sum(axis=0)
    totals = U.sum(axis=0)
    degenerate = totals <= 0.0
    totals[degenerate] = 1.0
    R = per_class / totals[:, None]
    R[degenerate] = 1.0 / M
    return R


def build_rulebase(
    train: Dataset,
    params: SubclustParams | None,
    fz: Fuzzifiers,
    aggregation_p: float,
    normalization: NormalizationParams,
) -> RuleBase:
    """Construct the rule base from a training set in normalized space.

    With ``params`` set, subtractive clustering runs separately on each
    class's patterns and every found center becomes a rule antecedent.
    With ``params=None`` (a single-prototype baseline) each class
    contributes one prototype: the mean of its training patterns.
    Certainty degrees are then estimated jointly over all prototypes.
    """
    counts = train.class_counts()
    for j, cnt in enumerate(counts):
        if cnt == 0:
            raise DataError(f"class {train.class_names[j]!r} has no training patterns")

    centers: list[np.ndarray] = []
    sources: list[int] = []
    for j in range(train.num_classes):
        members = train.features[train.labels == j]
        if params is None:
            found = members.mean(axis=0)[None, :]
        else:
            found = subtractive_cluster(members, params)
        centers.append(found)
        sources.extend([j] * found.shape[0])

    prototypes = np.vstack(centers)
    certainty = certainty_degrees(train, prototypes, fz)
    return RuleBase(
        prototypes=prototypes,
        source_classes=np.array(sources),
        certainty=certainty,
        fuzzifiers=fz,
        normalization=normalization,
        class_names=train.class_names,
        aggregation_p=aggregation_p,
    )


def save_rulebase(rb: RuleBase, path) -> None:
    """Write the model as JSON (floats keep full round-trip precision)."""
    doc = {
        "format": "it2frbc-model",
        "format_version": FORMAT_VERSION,
        "num_classes": rb.num_classes,
        "class_names": list(rb.class_names),
        "fuzzifiers": {"m1": rb.fuzzifiers.m1, "m2": rb.fuzzifiers.m2},
        "aggregation_p": rb.aggregation_p,
        "normalization": {
            "min": rb.normalization.minimum.tolist(),
            "max": rb.normalization.maximum.tolist(),
        },
        "rules": [
            {
                "center": rb.prototypes[k].tolist(),
                "source_class": int(rb.source_classes[k]),
                "certainty": rb.certainty[k].tolist(),
            }
            for k in range(rb.num_rules)
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_rulebase(path) -> RuleBase:
    """Load a model written by save_rulebase."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"malformed model file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != "it2frbc-model":
        raise DataError(f"{path} is not a recognized model file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataError(
            f"unsupported model format version {doc.get('format_version')!r} "
            f"(expected {FORMAT_VERSION})"
        )
    try:
        rules = doc["rules"]
        if not rules:
            raise DataError("model has no rules")
        norm = NormalizationParams(
            np.array(doc["normalization"]["min"], dtype=float),
            np.array(doc["normalization"]["max"], dtype=float),
        )
        rb = RuleBase(
            prototypes=np.array([r["center"] for r in rules], dtype=float),
            source_classes=np.array([r["source_class"] for r in rules]),
            certainty=np.array([r["certainty"] for r in rules], dtype=float),
            fuzzifiers=Fuzzifiers(float(doc["fuzzifiers"]["m1"]), float(doc["fuzzifiers"]["m2"])),
            normalization=norm,
            class_names=tuple(doc["class_names"]),
            aggregation_p=float(doc["aggregation_p"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed model file {path}: {exc}") from exc
    if rb.num_classes != int(doc["num_classes"]):
        raise DataError(f"malformed model file {path}: class count mismatch")
    return rb


def export_rules_text(rb: RuleBase) -> str:
    """Human-readable rules, one line each, centers in original units."""
    lines = []
    for k in range(rb.num_rules):
        center = rb.normalization.invert(rb.prototypes[k])
        coords = ", ".join(f"{v:.6g}" for v in center)
        certainty = ", ".join(
            f"{name}: {val:.3f}" for name, val in zip(rb.class_names, rb.certainty[k])
        )
        source = rb.class_names[int(rb.source_classes[k])]
        lines.append(f"R{k + 1}: IF x is near ({coords}) [from class {source}] THEN ({certainty})")
    return "\n".join(lines) + "\n"
