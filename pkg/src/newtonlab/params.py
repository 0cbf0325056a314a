"""Flat parameter vectors with an inner/outer index partition."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ParamVector:
    """Flat parameter vector split into inner (basis-building) and outer
    (coefficient) indices.

    The outer indices address the final linear layer of a network; every
    other trainable parameter is inner.
    """

    values: np.ndarray
    inner_indices: np.ndarray
    outer_indices: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        self.inner_indices = np.asarray(self.inner_indices, dtype=int).reshape(-1)
        self.outer_indices = np.asarray(self.outer_indices, dtype=int).reshape(-1)
        n = self.values.size
        if n == 0:
            raise ValueError("empty parameter vector")
        joint = np.concatenate([self.inner_indices, self.outer_indices])
        if joint.size != n or np.unique(joint).size != n or joint.min() < 0 or joint.max() != n - 1:
            raise ValueError("inner/outer indices must partition 0..n-1")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def inner(self) -> np.ndarray:
        return self.values[self.inner_indices]

    @property
    def outer(self) -> np.ndarray:
        return self.values[self.outer_indices]

    def with_values(self, values: np.ndarray) -> "ParamVector":
        """Same partition, new values."""
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size != self.n:
            raise ValueError(f"expected {self.n} values, got {values.size}")
        return ParamVector(values, self.inner_indices, self.outer_indices)

    def copy(self) -> "ParamVector":
        return ParamVector(self.values.copy(), self.inner_indices, self.outer_indices)


def all_inner(values: np.ndarray) -> ParamVector:
    """ParamVector where every index is inner (non-network objectives)."""
    values = np.asarray(values, dtype=float).reshape(-1)
    return ParamVector(values, np.arange(values.size), np.empty(0, dtype=int))
