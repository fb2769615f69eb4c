"""Extraction of measurable quantities from two-mode density matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DimensionMismatchError,
    annihilation_op,
    embed,
    expectation,
    number_op,
)

NEGATIVE_PROB_TOL = -1e-10


@dataclass(frozen=True)
class JointNumberTable:
    """P(n_s, n_i) read off the density-matrix diagonal; not clipped."""

    probs: np.ndarray  # (n_s_max+1, n_i_max+1)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.min() < NEGATIVE_PROB_TOL or p.max() > 1.0 + 1e-10:
            raise ValueError("probabilities outside [-1e-10, 1]")
        if abs(p.sum() - 1.0) > 1e-8:
            raise ValueError(f"probabilities sum to {p.sum():.10f}, not 1")


@dataclass(frozen=True)
class HeraldingMetrics:
    """Pair-detection bookkeeping for a heralded-photon scheme."""

    p_coincidence: float  # equal nonzero photon numbers in both arms
    p_mismatch: float  # unequal photon numbers
    p_false_herald: float  # photons in exactly one arm


def _require_two_modes(rho):
    if rho.space.n_modes != 2:
        raise DimensionMismatchError(
            f"two-mode state required, got {rho.space.n_modes} modes"
        )


def joint_number_distribution(rho) -> JointNumberTable:
    """Diagonal of rho in the documented |n_s, n_i> ordering."""
    _require_two_modes(rho)
    d0 = rho.space.modes[0].dim
    d1 = rho.space.modes[1].dim
    return JointNumberTable(np.diag(rho.matrix).real.reshape(d0, d1).copy())


def heralding_metrics(table: JointNumberTable) -> HeraldingMetrics:
    p = table.probs
    n_s, n_i = np.indices(p.shape)
    diag = n_s == n_i
    coincidence = float(p[diag & (n_s >= 1)].sum())
    mismatch = float(p[~diag].sum())
    false_herald = float(p[(n_s == 0) & (n_i >= 1)].sum() + p[(n_i == 0) & (n_s >= 1)].sum())
    return HeraldingMetrics(coincidence, mismatch, false_herald)


def first_moments(rho):
    """(⟨b_s⟩, ⟨b_i⟩, ⟨n_s⟩, ⟨n_i⟩) for a two-mode state."""
    _require_two_modes(rho)
    space = rho.space
    b_s = embed(annihilation_op(space.modes[0]), 0, space)
    b_i = embed(annihilation_op(space.modes[1]), 1, space)
    n_s = embed(number_op(space.modes[0]), 0, space)
    n_i = embed(number_op(space.modes[1]), 1, space)
    return (
        expectation(b_s, rho),
        expectation(b_i, rho),
        expectation(n_s, rho).real,
        expectation(n_i, rho).real,
    )
