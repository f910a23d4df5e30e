"""Characterization of a single time-domain MAC cell.

A cell is described by two tables indexed by the applied input
combination (x, w): the systematic delay deviation ``inl(x, w)`` and
the random mismatch ``sigma(x, w)``, both in units of the cell's delay
step.  Folding the tables with an input distribution produces the three
moments every chain-level estimate is built from::

    mu   = sum_ij inl(i, j) * P(x=i) * P(w=j)
    evpv = sum_ij sigma(i, j)**2 * P(x=i) * P(w=j)
    vhm  = Var[inl] under the joint distribution

``evpv`` is the expected per-combination variance (the mismatch/noise
share of the cell error variance), ``vhm`` the variance of the
systematic deviations across combinations (the nonlinearity share).

Note that ``vhm`` is the true variance E[inl**2] - E[inl]**2.  It is
sometimes identified with the raw second moment E[inl**2]; the two
agree only when the mean deviation is zero, so the general form is
used here.

Averaging one delay step over ``r`` redundant cells divides the
systematic offset by r and averages r uncorrelated mismatch draws:

    mu -> mu / r,   evpv -> evpv / r,   vhm -> vhm / r**2

The mismatch share scales with exactly 1/r because redundant cells are
uncorrelated; physical cascades come close to but may deviate slightly
from this ideal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, IngestionError

#: weight-bit density matching ~70 % bitwise weight sparsity in CNNs
DEFAULT_WEIGHT_ONE_DENSITY = 0.3


def _frozen_table(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 2:
        raise ConfigurationError(f"{name} table must be 2-D (x by w), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} table contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CellSpec:
    """Measured parameters of one TD-MAC cell at redundancy 1.

    ``inl`` and ``sigma`` are (2**bit_width, n_weights) tables in delay
    steps; the shipped characterization uses binary weights
    (n_weights == 2) but wider tables load fine.  Energies in joules,
    times in seconds, cell geometry in meters.
    """

    bit_width: int
    inl: np.ndarray
    sigma: np.ndarray
    e_op: float
    e_op_per_r: float
    d_step: float
    d_max: float
    cpp: float
    h_cell: float

    def __post_init__(self):
        if self.bit_width < 1:
            raise ConfigurationError("bit_width must be >= 1")
        object.__setattr__(self, "inl", _frozen_table(self.inl, "inl"))
        object.__setattr__(self, "sigma", _frozen_table(self.sigma, "sigma"))
        nx = 2 ** self.bit_width
        if self.inl.shape != self.sigma.shape:
            raise ConfigurationError(
                f"inl shape {self.inl.shape} != sigma shape {self.sigma.shape}"
            )
        if self.inl.shape[0] != nx or self.inl.shape[1] < 2:
            raise ConfigurationError(
                f"tables must cover the full ({nx}, >=2) input grid, got {self.inl.shape}"
            )
        if np.any(self.sigma < 0.0):
            raise ConfigurationError("sigma table entries must be >= 0")
        if not self.e_op > 0.0:
            raise ConfigurationError("e_op must be > 0")
        if self.e_op_per_r < 0.0:
            raise ConfigurationError("e_op_per_r must be >= 0")
        if not self.d_step > 0.0:
            raise ConfigurationError("d_step must be > 0")
        if not self.d_max > 0.0:
            raise ConfigurationError("d_max must be > 0")

    @property
    def n_x(self) -> int:
        return self.inl.shape[0]

    @property
    def n_w(self) -> int:
        return self.inl.shape[1]


def load_cell_spec(path) -> CellSpec:
    """Read a cell characterization file (JSON, unit-suffixed keys)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise IngestionError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return CellSpec(
            bit_width=int(doc["bit_width"]),
            inl=doc["inl"],
            sigma=doc["sigma"],
            e_op=float(doc["e_op_joules"]),
            e_op_per_r=float(doc["e_op_per_r_joules"]),
            d_step=float(doc["d_step_seconds"]),
            d_max=float(doc["d_max_seconds"]),
            cpp=float(doc["cpp_meters"]),
            h_cell=float(doc["h_cell_meters"]),
        )
    except KeyError as exc:
        raise IngestionError(f"{path}: missing key {exc}") from exc


@dataclass(frozen=True)
class InputDistribution:
    """Distribution of the applied (x, w) input combinations.

    ``px`` is a pmf over x in [0, 2**B - 1]; ``pw`` is the probability
    of a weight bit being 1.
    """

    px: np.ndarray
    pw: float

    def __post_init__(self):
        arr = np.array(self.px, dtype=np.float64, copy=True)
        if arr.ndim != 1 or arr.size < 2:
            raise ConfigurationError("px must be a 1-D pmf with at least two atoms")
        if np.any(arr < 0.0):
            raise ConfigurationError("px entries must be >= 0")
        if abs(float(arr.sum()) - 1.0) > 1e-9:
            raise ConfigurationError(f"px must sum to 1 (got {arr.sum()!r})")
        arr.setflags(write=False)
        object.__setattr__(self, "px", arr)
        if not 0.0 <= self.pw <= 1.0:
            raise ConfigurationError("pw must lie in [0, 1]")

    @classmethod
    def default(cls, bit_width: int, pw: float = DEFAULT_WEIGHT_ONE_DENSITY) -> "InputDistribution":
        """Uniform activations, sparse weight bits."""
        nx = 2 ** bit_width
        return cls(px=np.full(nx, 1.0 / nx), pw=pw)

    @property
    def pw_vector(self) -> np.ndarray:
        return np.array([1.0 - self.pw, self.pw])


@dataclass(frozen=True)
class CellErrorStats:
    """Input-weighted error moments of one cell, in delay steps (steps**2).

    ``_base`` records the unscaled moments and the redundancy already
    applied, so repeated :func:`scale_with_redundancy` calls divide the
    original values once and compose exactly (no double rounding).
    """

    mu: float
    evpv: float
    vhm: float
    _base: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.evpv < 0.0 or self.vhm < 0.0:
            raise ConfigurationError("variance components must be >= 0")

    @property
    def variance(self) -> float:
        return self.evpv + self.vhm


def esnr(snr_cell: float, e_op: float) -> float:
    """Efficiency metric snr / sqrt(energy), invariant under cascading.

    Cascading R cells multiplies the SNR by sqrt(R) and the energy by R,
    so the metric ranks cell designs independently of cascade length.
    """
    if snr_cell <= 0.0:
        raise ValueError("snr_cell must be > 0")
    if e_op <= 0.0:
        raise ValueError("e_op must be > 0")
    return snr_cell / math.sqrt(e_op)


def cell_error_stats(spec: CellSpec, dist: InputDistribution) -> CellErrorStats:
    """Fold the cell tables with an input distribution.

    Law of total expectation for the mean, law of total variance for the
    split into mismatch (evpv) and nonlinearity (vhm) components.
    """
    if dist.px.size != spec.n_x:
        raise ConfigurationError(
            f"px has {dist.px.size} atoms but the cell grid has {spec.n_x} input levels"
        )
    if spec.n_w != 2:
        raise ConfigurationError(
            f"binary weight distribution cannot drive a {spec.n_w}-level weight table"
        )
    joint = np.outer(dist.px, dist.pw_vector)
    mu = float(np.sum(spec.inl * joint))
    evpv = float(np.sum(spec.sigma**2 * joint))
    second = float(np.sum(spec.inl**2 * joint))
    vhm = max(0.0, second - mu * mu)
    return CellErrorStats(mu=mu, evpv=evpv, vhm=vhm)


def scale_with_redundancy(stats: CellErrorStats, r: int) -> CellErrorStats:
    """Moments of a delay step averaged over r redundant cells."""
    if r < 1:
        raise ValueError("redundancy must be >= 1")
    if r == 1:
        return stats
    mu0, evpv0, vhm0, r0 = stats._base or (stats.mu, stats.evpv, stats.vhm, 1)
    r_total = r0 * r
    return CellErrorStats(
        mu=mu0 / r_total,
        evpv=evpv0 / r_total,
        vhm=vhm0 / (r_total * r_total),
        _base=(mu0, evpv0, vhm0, r_total),
    )
