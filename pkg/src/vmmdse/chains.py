"""Chain-level error statistics, redundancy sizing, and TD cost models.

Cell errors accumulate independently along a compute chain of n cells,
so after applying the redundancy scaling to the cell moments::

    mu_chain  = n * mu_cell
    var_chain = n * (evpv + vhm)

The systematic mean is reported for transparency but excluded from the
feasibility check: it is a fixed offset that is calibrated out
downstream, leaving sigma as the budgeted quantity.

Two accuracy regimes are supported.  Precise operation keeps
3 * sigma_chain <= 0.5 delay steps so that integer rounding absorbs
every error; relaxed operation accepts a larger, application-derived
sigma ceiling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cells import CellErrorStats, CellSpec, scale_with_redundancy
from .errors import InfeasibleError

#: default ceiling for the redundancy search; hitting it signals an
#: infeasible cell/budget pairing rather than a real design point
DEFAULT_R_CAP = 1024

#: precise-mode sigma so that 3*sigma <= 0.5 steps (rounding-exact)
PRECISE_SIGMA_MAX = 0.5 / 3.0

MODE_PRECISE = "precise"
MODE_RELAXED = "relaxed"


@dataclass(frozen=True)
class ChainErrorStats:
    """Error moments of a full chain, in delay steps (steps**2)."""

    n: int
    r: int
    mu: float
    variance: float

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class ErrorBudget:
    mode: str
    sigma_max: float

    def __post_init__(self):
        if self.mode not in (MODE_PRECISE, MODE_RELAXED):
            raise ValueError(f"unknown budget mode {self.mode!r}")
        if not self.sigma_max > 0.0:
            raise ValueError("sigma_max must be > 0")

    @classmethod
    def precise(cls) -> "ErrorBudget":
        return cls(MODE_PRECISE, PRECISE_SIGMA_MAX)

    @classmethod
    def relaxed(cls, sigma_max: float) -> "ErrorBudget":
        return cls(MODE_RELAXED, sigma_max)


def chain_stats(cell: CellErrorStats, n: int, r: int) -> ChainErrorStats:
    """Propagate cell moments to a chain of n cells at redundancy r."""
    if n < 1:
        raise ValueError("chain length must be >= 1")
    if r < 1:
        raise ValueError("redundancy must be >= 1")
    scaled = scale_with_redundancy(cell, r)
    return ChainErrorStats(n=n, r=r, mu=n * scaled.mu, variance=n * scaled.variance)


def solve_redundancy(
    cell: CellErrorStats, n: int, budget: ErrorBudget, r_cap: int = DEFAULT_R_CAP
) -> int:
    """Smallest integer redundancy whose chain sigma meets the budget.

    The continuous solution of n*(evpv/r + vhm/r**2) = sigma_max**2
    seeds the search; the result is then pinned on the integer grid so
    that sigma(r) <= sigma_max < sigma(r - 1) holds exactly as evaluated
    by :func:`chain_stats`.
    """
    if n < 1:
        raise ValueError("chain length must be >= 1")
    if cell.evpv == 0.0 and cell.vhm == 0.0:
        return 1
    a = n * cell.evpv
    b = n * cell.vhm
    s = budget.sigma_max * budget.sigma_max
    if b > 0.0:
        t = (math.sqrt(a * a + 4.0 * b * s) - a) / (2.0 * b)
    else:
        t = s / a
    r = max(1, math.ceil(1.0 / t)) if t > 0.0 else r_cap + 1
    r = min(r, r_cap + 1)
    while r > 1 and chain_stats(cell, n, r - 1).sigma <= budget.sigma_max:
        r -= 1
    while r <= r_cap and chain_stats(cell, n, r).sigma > budget.sigma_max:
        r += 1
    if r > r_cap:
        raise InfeasibleError(
            f"no redundancy <= {r_cap} brings sigma below {budget.sigma_max} "
            f"for n={n} (cell variance {cell.variance})"
        )
    return r


def cell_energy(spec: CellSpec, r: int) -> float:
    """Expected cell energy per operation at redundancy r, joules."""
    if r < 1:
        raise ValueError("redundancy must be >= 1")
    return spec.e_op + (r - 1) * spec.e_op_per_r


def td_mac_energy(cell_energy_at_r: float, e_tdc: float, n: int) -> float:
    """Energy of one TD MAC: cell energy plus the conversion amortized over n."""
    if n < 1:
        raise ValueError("chain length must be >= 1")
    return cell_energy_at_r + e_tdc / n


def td_cell_area(b: int, r: int, cpp: float, h_cell: float) -> float:
    """Layout area of one 1-by-b TD-MAC cell at redundancy r.

    Two subcells share one Euler path, so one diffusion break is added
    per pair of subcells; geometry is expressed in contacted poly
    pitches times the standard cell height:

        area = (9*b + 7*r*(2**(b+1) - 1)) * cpp * h_cell
    """
    if b < 1 or r < 1:
        raise ValueError("bit width and redundancy must be >= 1")
    return (9 * b + 7 * r * (2 ** (b + 1) - 1)) * cpp * h_cell


def td_latency(n: int, r: int, spec: CellSpec, tdc_time: float) -> float:
    """Serial chain traversal at full-scale cell delay plus conversion time.

    A conservative model: the chain is not pipelined and every cell is
    charged its full-scale delay (r redundant cells per step multiply
    the per-cell delay by r).
    """
    if n < 1 or r < 1:
        raise ValueError("chain length and redundancy must be >= 1")
    return n * r * spec.d_max + tdc_time
