"""Subtractive clustering: estimate number and location of cluster centers.

Every data point is scored by its potential as a cluster center,

    P_i = sum_j exp(-alpha * ||x_i - x_j||^2),    alpha = 4 / r_a^2,

so points with many close neighbours score high. Centers are picked
greedily by maximum remaining potential; after each accepted center x* with
potential P*, all potentials are reduced by

    P_i <- P_i - P* * exp(-beta * ||x_i - x*||^2),   beta = 4 / r_b^2,

with r_b = 1.25 * r_a by default, which suppresses candidates near an
existing center. Candidates between the accept and reject thresholds are
kept only if they are far enough from the accepted centers.

Points are expected in normalized feature space (r_a is relative to it).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError


@dataclass(frozen=True)
class SubclustParams:
    """Controls for the clustering loop.

    r_a is the neighbourhood radius and the only parameter that normally
    needs tuning; it governs how many centers emerge. accept_ratio and
    reject_ratio are fractions of the first (highest) potential.
    """

    r_a: float
    rb_ratio: float = 1.25
    accept_ratio: float = 0.5
    reject_ratio: float = 0.15
    max_centers: int | None = None

    def __post_init__(self):
        if not self.r_a > 0:
            raise ConfigError("r_a must be positive")
        if not self.rb_ratio > 0:
            raise ConfigError("rb_ratio must be positive")
        if not 0.0 < self.accept_ratio <= 1.0:
            raise ConfigError("accept_ratio must lie in (0,1]")
        if not 0.0 <= self.reject_ratio < self.accept_ratio:
            raise ConfigError("reject_ratio must lie in [0,1) and below accept_ratio")
        if self.max_centers is not None and self.max_centers < 1:
            raise ConfigError("max_centers must be at least 1")

    @property
    def alpha(self) -> float:
        return 4.0 / self.r_a**2

    @property
    def beta(self) -> float:
        return 4.0 / (self.rb_ratio * self.r_a) ** 2


@dataclass(frozen=True)
class PotentialField:
    """Potential value per data point."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]


def _as_points(points) -> np.ndarray:
    X = np.asarray(points, dtype=float)
    if X.ndim != 2:
        raise DataError("points must be a 2-D array (n, num_features)")
    if X.shape[0] < 1:
        raise DataError("need at least one point")
    return X


def initial_potentials(points, params: SubclustParams) -> PotentialField:
    """P_i = sum_j exp(-alpha * ||x_i - x_j||^2), including the j=i term."""
    X = _as_points(points)
    diff = X[:, None, :] - X[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    return PotentialField(np.exp(-params.alpha * sq).sum(axis=1))


def revise_potentials(
    field: PotentialField, points, center_index: int, params: SubclustParams
) -> PotentialField:
    """Subtract the accepted center's influence from every potential.

    Uses the center's current potential as the subtracted peak, so the
    center's own potential becomes exactly 0. Values may go negative.
    """
    X = _as_points(points)
    if len(field) != X.shape[0]:
        raise DataError("potential field length must match point count")
    if not 0 <= center_index < X.shape[0]:
        raise DataError("center_index out of range")
    return PotentialField(_revised(field.values, X, center_index, params.beta))


def _revised(P: np.ndarray, X: np.ndarray, k: int, beta: float) -> np.ndarray:
    d2 = ((X - X[k]) ** 2).sum(axis=1)
    return P - P[k] * np.exp(-beta * d2)


def subtractive_cluster(points, params: SubclustParams) -> np.ndarray:
    """Run the accept/reject loop; returns center coordinates (c, N).

    The first candidate (global potential maximum) is always accepted.
    Each next candidate k (maximum remaining potential P_k) is
      - accepted outright if P_k >= accept_ratio * P_first,
      - rejected (loop ends) if P_k < reject_ratio * P_first,
      - otherwise accepted iff d_min/r_a + P_k/P_first >= 1, where d_min is
        its distance to the nearest accepted center; failing that its
        potential is zeroed and the search continues.
    Ties on the maximum break toward the lowest point index.
    """
    X = _as_points(points)
    n = X.shape[0]
    cap = n if params.max_centers is None else min(params.max_centers, n)

    P = initial_potentials(X, params).values.copy()
    first_potential = float(P.max())
    k = int(P.argmax())
    chosen = [k]
    P = _revised(P, X, k, params.beta)

    while len(chosen) < cap:
        k = int(P.argmax())
        peak = float(P[k])
        if peak >= params.accept_ratio * first_potential:
            pass
        elif peak < params.reject_ratio * first_potential:
            break
        else:
            d_min = float(np.sqrt(((X[chosen] - X[k]) ** 2).sum(axis=1)).min())
            if d_min / params.r_a + peak / first_potential < 1.0:
                P[k] = 0.0
                continue
        chosen.append(k)
        P = _revised(P, X, k, params.beta)

    return X[chosen].copy()
