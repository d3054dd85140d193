"""Core domain types: datasets, model selections, orderings, groupings.

Everything here is immutable after construction. Arrays are copied in and
marked read-only so instances can be shared freely across worker threads.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Binary outcomes plus a real covariate matrix with named columns.

    y is stored as integers so the "0 or 1" invariant is exact and code that
    branches on y never has to reason about float equality.
    """

    y: np.ndarray
    x: np.ndarray
    names: tuple[str, ...]

    def __init__(self, y, x, names=None):
        yarr = _frozen(np.asarray(y, dtype=np.int64).copy())
        xarr = _frozen(np.array(x, dtype=np.float64, ndmin=2, copy=True))
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(xarr.shape[1]))
        object.__setattr__(self, "y", yarr)
        object.__setattr__(self, "x", xarr)
        object.__setattr__(self, "names", tuple(str(s) for s in names))

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def m(self) -> int:
        return self.x.shape[1]

    def column(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ConfigError(f"unknown variable {name!r}; have {list(self.names)}") from None

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.names == other.names
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.x, other.x)
        )


def validate(d: Dataset) -> str | None:
    """Return a description of the first violated Dataset invariant, or None."""
    if d.y.ndim != 1:
        return f"dependent variable must be one-dimensional, got shape {d.y.shape}"
    if d.x.ndim != 2 or d.x.shape[0] != d.y.shape[0]:
        return f"covariate matrix shape {d.x.shape} does not match {d.y.shape[0]} observations"
    if d.n < 1:
        return "dataset has no observations"
    bad = np.nonzero((d.y != 0) & (d.y != 1))[0]
    if bad.size:
        return f"non-binary dependent value at row {int(bad[0]) + 1}"
    nf = np.argwhere(~np.isfinite(d.x))
    if nf.size:
        i, j = nf[0]
        return f"non-finite covariate at row {int(i) + 1}, column {d.names[int(j)]!r}"
    if len(d.names) != d.m:
        return f"{len(d.names)} names for {d.m} covariate columns"
    if len(set(d.names)) != len(d.names):
        dup = next(s for s in d.names if d.names.count(s) > 1)
        return f"duplicate variable name {dup!r}"
    return None


def ensure_valid(d: Dataset) -> Dataset:
    msg = validate(d)
    if msg is not None:
        raise DataError(msg)
    return d


@dataclass(frozen=True)
class ModelSpec:
    """Which covariate columns (by index) form a model. May be empty.

    The intercept is always fitted and is not part of the selection.
    """

    included: tuple[int, ...] = ()

    def __init__(self, included=()):
        object.__setattr__(self, "included", tuple(int(j) for j in included))

    @property
    def l(self) -> int:
        return len(self.included)

    def check_against(self, d: Dataset) -> None:
        if len(set(self.included)) != len(self.included):
            raise ConfigError(f"duplicate column index in model selection {self.included}")
        for j in self.included:
            if not 0 <= j < d.m:
                raise ConfigError(f"column index {j} out of range for {d.m} covariates")


@dataclass(frozen=True, eq=False)
class FittedModel:
    """A maximum-likelihood logistic fit: intercept, slope coefficients and
    the n fitted means, clamped strictly inside (0,1)."""

    intercept: float
    coefficients: np.ndarray
    mu: np.ndarray
    converged: bool
    iterations: int

    def __init__(self, intercept, coefficients, mu, converged, iterations):
        object.__setattr__(self, "intercept", float(intercept))
        object.__setattr__(self, "coefficients", _frozen(np.asarray(coefficients, dtype=np.float64).copy()))
        object.__setattr__(self, "mu", _frozen(np.asarray(mu, dtype=np.float64).copy()))
        object.__setattr__(self, "converged", bool(converged))
        object.__setattr__(self, "iterations", int(iterations))


class OrderingPolicy(enum.Enum):
    BY_FULL_MU = "mu-full"
    BY_TESTED_MU = "mu-tested"
    BY_RESIDUAL = "residual"
    GIVEN = "given"


@dataclass(frozen=True, eq=False)
class Ordering:
    """A permutation of observation indices together with how it was built."""

    sigma: np.ndarray
    policy: OrderingPolicy

    def __init__(self, sigma, policy):
        sig = _frozen(np.asarray(sigma, dtype=np.int64).copy())
        n = sig.shape[0]
        if not np.array_equal(np.sort(sig), np.arange(n)):
            raise DataError("ordering is not a permutation of 0..n-1")
        object.__setattr__(self, "sigma", sig)
        object.__setattr__(self, "policy", OrderingPolicy(policy))


@dataclass(frozen=True)
class GroupingScheme:
    """Consecutive group sizes for the grouped calibration statistic."""

    sizes: tuple[int, ...]

    def __init__(self, sizes):
        sz = tuple(int(s) for s in sizes)
        if not sz or any(s < 1 for s in sz):
            raise ConfigError(f"group sizes must all be positive, got {sz}")
        object.__setattr__(self, "sizes", sz)

    @property
    def g(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def starts(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.sizes)[:-1])).astype(np.intp)


def default_grouping(n: int, g: int) -> GroupingScheme:
    """g groups over n observations: the first g-1 of size ceil(n/g), the
    last takes the remainder. Errors when the remainder would be empty."""
    if g < 1 or g > n:
        raise ConfigError(f"cannot split {n} observations into {g} groups")
    head = math.ceil(n / g)
    last = n - (g - 1) * head
    if last < 1:
        raise ConfigError(
            f"{g} groups of {head} leave no observations for the last group (n={n})"
        )
    return GroupingScheme((head,) * (g - 1) + (last,))
