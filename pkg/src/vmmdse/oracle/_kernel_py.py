"""Pure-NumPy fallback kernel for the chain simulation.

Implements the batch/draw-order contract documented in the package
docstring; the compiled kernel consumes the identical random stream, so
the two backends agree up to floating-point summation order.
"""

from __future__ import annotations

import numpy as np


def chain_error_batches(
    inl: np.ndarray,
    sigma: np.ndarray,
    n: int,
    r: int,
    trials: int,
    batch_size: int,
    seed: int,
    cdf,
    pw: float,
    x_fixed,
    w_fixed,
) -> np.ndarray:
    out = np.empty(trials, dtype=np.float64)
    n_w = inl.shape[1]
    inl_flat = inl.ravel()
    sigma_flat = sigma.ravel()
    sampled = x_fixed is None
    if not sampled:
        flat_idx = x_fixed * n_w + w_fixed
        base_mu = float(inl_flat[flat_idx].sum()) / r
        sig_vec = sigma_flat[flat_idx]

    n_batches = (trials + batch_size - 1) // batch_size
    for b in range(n_batches):
        lo = b * batch_size
        hi = min(trials, lo + batch_size)
        mb = hi - lo
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(b,))))
        if sampled:
            ux = rng.random((mb, n))
            x = np.searchsorted(cdf, ux, side="right")
            np.clip(x, 0, cdf.size - 1, out=x)
            uw = rng.random((mb, n))
            w = (uw < pw).astype(np.int64)
            flat = x * n_w + w
            inl_v = inl_flat[flat]
            sig_v = sigma_flat[flat]
            eps = rng.standard_normal((mb, n, r))
            out[lo:hi] = (inl_v + sig_v * eps.sum(axis=2)).sum(axis=1) / r
        else:
            eps = rng.standard_normal((mb, n, r))
            out[lo:hi] = base_mu + (eps.sum(axis=2) @ sig_vec) / r
    return out
