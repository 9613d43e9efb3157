"""Shared test pipeline builders, cached so expensive artifacts are reused."""

from functools import lru_cache
from pathlib import Path
from types import SimpleNamespace

import numpy as np

import fourierhybrid as fh

DATA_DIR = Path(__file__).parent / "data"

GRID_1024 = (np.arange(1024) + 0.5) / 1024


def frequency_set(scheme: str, m: int, seed: int = 42):
    if scheme == "jittered":
        return fh.jittered_frequencies(m, seed)
    if scheme == "log":
        return fh.log_frequencies(m)
    return fh.uniform_frequencies(m)


@lru_cache(maxsize=None)
def pipeline(function: str = "f1", scheme: str = "jittered", m: int = 128,
             seed: int = 42, n: int | None = None):
    """Build (and memoize) the full filter pipeline for one configuration."""
    f = fh.builtin_function(function)
    jumps = fh.jump_set(f)
    freqs = frequency_set(scheme, m, seed)
    samples = fh.fourier_samples(f, freqs)
    if n is None:
        n = fh.choose_n(scheme, m)
    operator = fh.assemble_omega(freqs, n)
    recon = fh.FilterReconstruction(
        operator=operator, samples=samples, filter_cfg=fh.FilterConfig(), jumps=jumps
    )
    return SimpleNamespace(
        f=f, jumps=jumps, freqs=freqs, samples=samples, operator=operator,
        recon=recon, m=m, n=n,
    )


@lru_cache(maxsize=None)
def hybrid_run(function: str = "f1", scheme: str = "jittered", m: int = 128,
               seed: int = 42):
    """Hybrid reconstruction on the standard 1024-point grid, memoized."""
    pipe = pipeline(function, scheme, m, seed)
    hyb = fh.hybrid_reconstruct(
        pipe.samples, pipe.jumps, fh.HybridConfig(), GRID_1024,
        filter_recon=pipe.recon,
    )
    truth = fh.evaluate(pipe.f, GRID_1024)
    return SimpleNamespace(
        pipe=pipe,
        hyb=hyb,
        truth=truth,
        err_filter=np.abs(hyb.filter_values - truth),
        err_hybrid=np.abs(hyb.values - truth),
        dist=fh.distance_to_set(GRID_1024, pipe.jumps),
    )
