"""Behavioral Monte-Carlo simulator of TD compute chains and converters.

This package is the independent ground truth for the analytic chain
statistics: it never calls them.  Per trial, each of the n chain
positions is applied its input combination (x, w) and contributes r
independent sub-cell delays; measured in units of the redundant
(r-cell) delay step, the position error is

    err_i = ( inl(x_i, w_i) + sigma(x_i, w_i) * sum_k eps_ik ) / r

with eps_ik standard normal, and the chain error is the sum over
positions.  Gaussian sub-cell noise is assumed; the empirical skew is
reported so that assumption stays inspectable.

Mismatch modes: ``static`` draws each sub-cell deviation once per trial
(a freshly fabricated chain instance per trial, deviations fixed within
the trial -- mismatch physics); ``noise`` re-draws per evaluation
event.  A chain pass evaluates every sub-cell exactly once per trial,
so the two modes coincide computationally; the flag records the
intended interpretation.

RNG contract (identical across backends): trials are processed in
batches of ``batch_size``; batch i seeds a fresh PCG64 from
``SeedSequence(seed, spawn_key=(i,))`` and draws, in order, the x
uniforms (trial-major), the w uniforms, then the standard normals in
(trial, position, sub-cell) order.  Batches are independent, so
execution order cannot change the result, and the trial error vector is
assembled in batch order before any reduction.  Means and variances are
reduced with exact (compensated) summation.  The default batch size is
min(4096, 4194304 // (n*r)), clamped to at least 1.

Two kernels implement this contract: a compiled Cython extension and a
pure-NumPy fallback, selected at import (override with the environment
variable ``VMMDSE_BACKEND=cython|python``).  They consume identical
random streams; results differ only by floating-point summation order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from ..cells import CellSpec, InputDistribution
from ..errors import ConfigurationError
from ..tdc import TdcRange, sar_bits

__all__ = [
    "MonteCarloConfig",
    "FixedInputs",
    "SampledInputs",
    "EmpiricalStats",
    "TdcReading",
    "backend_name",
    "chain_error_samples",
    "simulate_chain",
    "simulate_tdc",
    "nominal_chain_delay",
]

DEFAULT_BATCH_BUDGET = 4_194_304  # max normals per batch
DEFAULT_BATCH_SIZE = 4096

MISMATCH_STATIC = "static"
MISMATCH_NOISE = "noise"


def _select_kernel():
    choice = os.environ.get("VMMDSE_BACKEND", "auto").lower()
    if choice in ("cython", "compiled", "cy"):
        from . import _kernel  # hard failure if the extension is missing

        return _kernel, "cython"
    if choice in ("python", "py", "numpy"):
        from . import _kernel_py

        return _kernel_py, "python"
    if choice not in ("", "auto"):
        raise ConfigurationError(f"unknown VMMDSE_BACKEND {choice!r}")
    try:
        from . import _kernel

        return _kernel, "cython"
    except ImportError:
        from . import _kernel_py

        return _kernel_py, "python"


_KERNEL, _BACKEND_NAME = _select_kernel()


def backend_name() -> str:
    """Which kernel was selected at import: 'cython' or 'python'."""
    return _BACKEND_NAME


@dataclass(frozen=True)
class FixedInputs:
    """One fixed (x, w) vector pair applied on every trial."""

    x: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=np.int64, copy=True)
        w = np.array(self.w, dtype=np.int64, copy=True)
        if x.ndim != 1 or x.shape != w.shape:
            raise ConfigurationError("x and w must be equal-length 1-D vectors")
        x.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class SampledInputs:
    """Fresh (x, w) vectors drawn per trial from an input distribution."""

    dist: InputDistribution


@dataclass(frozen=True)
class MonteCarloConfig:
    trials: int
    seed: int
    n: int
    r: int
    input_mode: Union[FixedInputs, SampledInputs]
    mismatch: str = MISMATCH_STATIC
    batch_size: Optional[int] = None
    histogram_bins: int = 64

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.n < 1 or self.r < 1:
            raise ConfigurationError("n and r must be >= 1")
        if self.mismatch not in (MISMATCH_STATIC, MISMATCH_NOISE):
            raise ConfigurationError(f"unknown mismatch mode {self.mismatch!r}")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigurationError("batch_size must be >= 1")
        if self.histogram_bins < 1:
            raise ConfigurationError("histogram_bins must be >= 1")

    @property
    def resolved_batch_size(self) -> int:
        if self.batch_size is not None:
            return self.batch_size
        return max(1, min(DEFAULT_BATCH_SIZE, DEFAULT_BATCH_BUDGET // (self.n * self.r)))


@dataclass(frozen=True)
class EmpiricalStats:
    """Trial statistics of the chain error, in delay steps (steps**2)."""

    mean: float
    variance: float
    skew: float
    histogram: np.ndarray
    bin_edges: np.ndarray
    trials: int

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


class TdcReading(NamedTuple):
    code: int
    saturated: bool


def chain_error_samples(spec: CellSpec, cfg: MonteCarloConfig) -> np.ndarray:
    """Per-trial chain errors in delay steps, deterministic for a given cfg."""
    if isinstance(cfg.input_mode, FixedInputs):
        x = cfg.input_mode.x
        w = cfg.input_mode.w
        if x.size != cfg.n:
            raise ConfigurationError(
                f"fixed input vectors have {x.size} entries but n={cfg.n}"
            )
        if np.any(x < 0) or np.any(x >= spec.n_x):
            raise ConfigurationError("fixed x values outside the cell grid")
        if np.any(w < 0) or np.any(w >= spec.n_w):
            raise ConfigurationError("fixed w values outside the cell grid")
        cdf = None
        pw = 0.0
        x_idx, w_idx = x, w
    else:
        dist = cfg.input_mode.dist
        if dist.px.size != spec.n_x:
            raise ConfigurationError(
                f"px has {dist.px.size} atoms but the cell grid has {spec.n_x} levels"
            )
        if spec.n_w != 2:
            raise ConfigurationError("sampled weights require a binary weight table")
        cdf = np.cumsum(dist.px)
        pw = dist.pw
        x_idx = w_idx = None
    return _KERNEL.chain_error_batches(
        np.ascontiguousarray(spec.inl),
        np.ascontiguousarray(spec.sigma),
        cfg.n,
        cfg.r,
        cfg.trials,
        cfg.resolved_batch_size,
        cfg.seed,
        cdf,
        pw,
        x_idx,
        w_idx,
    )


def simulate_chain(spec: CellSpec, cfg: MonteCarloConfig) -> EmpiricalStats:
    """Run the behavioral chain simulation and reduce to moments.

    Reduction uses exact floating-point summation on the assembled trial
    vector, so the statistics do not depend on how batches were
    scheduled.
    """
    errors = chain_error_samples(spec, cfg)
    n = errors.size
    mean = math.fsum(errors) / n
    centered = errors - mean
    m2 = math.fsum(centered * centered)
    variance = m2 / (n - 1) if n > 1 else 0.0
    if m2 > 0.0:
        m3 = math.fsum(centered * centered * centered) / n
        skew = m3 / (m2 / n) ** 1.5
    else:
        skew = 0.0
    counts, edges = np.histogram(errors, bins=cfg.histogram_bins)
    counts.setflags(write=False)
    edges.setflags(write=False)
    return EmpiricalStats(
        mean=mean,
        variance=variance,
        skew=skew,
        histogram=counts,
        bin_edges=edges,
        trials=n,
    )


def dump_samples(errors: np.ndarray, path) -> None:
    """Write raw per-trial errors as CSV (trial,error_delay_steps)."""
    with open(path, "w", newline="") as fh:
        fh.write("trial,error_delay_steps\n")
        for i, e in enumerate(errors):
            fh.write(f"{i},{float(e)!r}\n")


def simulate_tdc(readout: float, trange: TdcRange, l_osc: int = 1) -> TdcReading:
    """Behavioral hybrid conversion: MSB counter plus binary-search LSBs.

    The counter advances every 2*l_osc unit delays; the residual inside
    one period is resolved by successive approximation.  With ideal
    components the result is the readout rounded toward zero.
    Out-of-range readouts saturate to the range bounds and set the flag.
    """
    if l_osc < 1:
        raise ValueError("l_osc must be >= 1")
    saturated = False
    if readout < 0.0:
        readout = 0.0
        saturated = True
    elif readout > trange.max_in:
        readout = float(trange.max_in)
        saturated = True
    step = 2 * l_osc
    counts = int(readout // step)
    residual = readout - counts * step
    code = 0
    for k in range(sar_bits(l_osc) - 1, -1, -1):
        trial = code + (1 << k)
        if residual >= trial:
            code = trial
    return TdcReading(code=counts * step + code, saturated=saturated)


def nominal_chain_delay(spec: CellSpec, x, w, r: int) -> float:
    """Error-free chain delay for given inputs, seconds.

    Each cell contributes its full-scale delay minus the delay steps it
    does not switch; redundancy multiplies every cell delay by r.
    """
    if r < 1:
        raise ValueError("redundancy must be >= 1")
    x = np.asarray(x, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if x.shape != w.shape or x.ndim != 1:
        raise ConfigurationError("x and w must be equal-length 1-D vectors")
    full = spec.n_x - 1
    steps_missing = full - x * w
    per_cell = spec.d_max - steps_missing * spec.d_step
    return float(r * np.sum(per_cell))
