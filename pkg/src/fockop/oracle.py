"""Independent floating-point verification of the exact engine.

Nothing here touches the exact big-integer/rational code paths: inner
products come from adaptive quadrature of the radial integral (n = 1),
from float Gamma-function recurrences grown out of Gamma(1) = 1, or
from seeded importance-sampled Monte Carlo against the standard complex
Gaussian (n >= 2).  Agreement of these routes with the exact engine is
the point; sharing code with it would verify nothing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .arith import MultiIndex
from .errors import DimensionMismatchError, InputError
from .operators import SpaceParams


class OracleMethod(Enum):
    RADIAL_QUADRATURE = "radial-quadrature"
    GAMMA_IDENTITY = "gamma-identity"
    MONTE_CARLO = "monte-carlo"


DEFAULT_SEED = 20417


@dataclass(frozen=True)
class OracleConfig:
    seed: int = DEFAULT_SEED
    samples: int = 200_000
    quad_tol: float = 1e-13
    workers: int = 1
    chunk: int = 1 << 18


@dataclass(frozen=True)
class OracleEstimate:
    value: float
    method: OracleMethod
    error_bound: Optional[float] = None
    standard_error: Optional[float] = None
    samples: Optional[int] = None
    imag_value: Optional[float] = None
    imag_standard_error: Optional[float] = None


# ---------------------------------------------------------------------------
# float Gamma recurrence (integer arguments only)


def gamma_recurrence(k: int) -> float:
    """Gamma(k) for integer k >= 1 via the recurrence from Gamma(1) = 1."""
    if k < 1:
        raise InputError("gamma_recurrence needs k >= 1")
    out = 1.0
    for i in range(1, k):
        out *= i
    return out


def _basis_constant_sq(alpha: MultiIndex, sp: SpaceParams) -> float:
    """Squared normalizing constant of e_alpha, via the float Gamma path."""
    n, m = sp.n, sp.m
    num = gamma_recurrence(m + n) * gamma_recurrence(n + alpha.order)
    den = gamma_recurrence(n)
    for a in alpha:
        den *= gamma_recurrence(a + 1)
    den *= gamma_recurrence(m + n + alpha.order)
    return num / den


# ---------------------------------------------------------------------------
# adaptive quadrature of int_0^inf u^k e^-u du


def _gamma_tail_bound(k: int, upper: float) -> float:
    """Upper bound for int_upper^inf u^k e^-u du, valid for upper > k."""
    if upper <= k:
        return math.inf
    return upper**k * math.exp(-upper) / (1.0 - k / upper)


def _simpson(f, a: float, fa: float, b: float, fb: float, fm: float) -> float:
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive_simpson(f, a, fa, b, fb, fm, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(f, a, fa, m, fm, flm)
    right = _simpson(f, m, fm, b, fb, frm)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, abs(delta) / 15.0
    lv, le = _adaptive_simpson(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1)
    rv, re = _adaptive_simpson(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1)
    return lv + rv, le + re


def gamma_integral_quadrature(k: int, rel_tol: float = 1e-13) -> Tuple[float, float]:
    """(value, absolute error bound) for int_0^inf u^k e^-u du."""
    if k < 0:
        raise InputError("k must be >= 0")

    def f(u: float) -> float:
        return u**k * math.exp(-u)

    # crude scale for absolute tolerances (Stirling; only used for scaling)
    scale = math.sqrt(2.0 * math.pi * k) * (k / math.e) ** k if k > 0 else 1.0
    upper = float(max(4 * k + 40, 60))
    while _gamma_tail_bound(k, upper) > 1e-16 * scale:
        upper *= 2.0
    a, b = 0.0, upper
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(f, a, fa, b, fb, fm)
    value, err = _adaptive_simpson(f, a, fa, b, fb, fm, whole, rel_tol * scale, 48)
    return value, err + _gamma_tail_bound(k, upper)


# ---------------------------------------------------------------------------
# Monte Carlo with importance sampling from the standard complex Gaussian


def _mc_worker(a: MultiIndex, b: MultiIndex, sp: SpaceParams, weight: float,
               seed_seq: "np.random.SeedSequence", count: int, chunk: int):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    n = sp.n
    sums = np.zeros(4)  # re, re^2, im, im^2
    done = 0
    while done < count:
        size = min(chunk, count - done)
        xy = rng.standard_normal((size, 2 * n)) * math.sqrt(0.5)
        z = xy[:, :n] + 1j * xy[:, n:]
        w = np.ones(size, dtype=np.complex128)
        for j in range(n):
            if a[j]:
                w *= z[:, j] ** a[j]
            if b[j]:
                w *= np.conj(z[:, j]) ** b[j]
        if sp.m:
            r2 = np.sum(xy * xy, axis=1)
            w *= r2**sp.m
        w *= weight
        sums[0] += float(np.sum(w.real))
        sums[1] += float(np.sum(w.real**2))
        sums[2] += float(np.sum(w.imag))
        sums[3] += float(np.sum(w.imag**2))
        done += size
    return sums


def _mc_inner(a: MultiIndex, b: MultiIndex, sp: SpaceParams, cfg: OracleConfig) -> OracleEstimate:
    total = cfg.samples
    if total < 2:
        raise InputError("Monte Carlo needs at least 2 samples")
    workers = max(1, cfg.workers)
    # importance weight: dv-measure density over the sampling density,
    # times the normalizing constant of the weighted measure
    weight = gamma_recurrence(sp.n) / gamma_recurrence(sp.m + sp.n)
    counts = [total // workers] * workers
    counts[0] += total - sum(counts)
    seeds = np.random.SeedSequence(cfg.seed).spawn(workers)
    if workers == 1:
        partials = [_mc_worker(a, b, sp, weight, seeds[0], counts[0], cfg.chunk)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(
                pool.map(
                    lambda args: _mc_worker(a, b, sp, weight, *args),
                    [(s, c, cfg.chunk) for s, c in zip(seeds, counts)],
                )
            )
    sums = np.sum(np.stack(partials), axis=0)
    mean_re = sums[0] / total
    var_re = max(sums[1] / total - mean_re**2, 0.0)
    mean_im = sums[2] / total
    var_im = max(sums[3] / total - mean_im**2, 0.0)
    return OracleEstimate(
        value=mean_re,
        method=OracleMethod.MONTE_CARLO,
        standard_error=math.sqrt(var_re / total),
        samples=total,
        imag_value=mean_im,
        imag_standard_error=math.sqrt(var_im / total),
    )


# ---------------------------------------------------------------------------
# public operations


def oracle_inner(
    a: MultiIndex,
    b: MultiIndex,
    sp: SpaceParams,
    method: OracleMethod,
    cfg: OracleConfig = OracleConfig(),
) -> OracleEstimate:
    """Numerical estimate of <z^a, z^b> in the weighted space."""
    if a.dimension != sp.n or b.dimension != sp.n:
        raise DimensionMismatchError("multi-index dimension must equal n")
    if method is OracleMethod.RADIAL_QUADRATURE:
        if sp.n != 1:
            raise InputError("radial quadrature is a one-dimensional method")
        if a != b:
            # distinct monomials: the angular integral vanishes identically
            return OracleEstimate(0.0, method, error_bound=0.0)
        k = a[0] + sp.m
        val_num, err_num = gamma_integral_quadrature(k, cfg.quad_tol)
        val_den, err_den = gamma_integral_quadrature(sp.m, cfg.quad_tol)
        value = val_num / val_den
        bound = value * (err_num / val_num + err_den / val_den)
        return OracleEstimate(value, method, error_bound=bound)
    if method is OracleMethod.GAMMA_IDENTITY:
        if a != b:
            return OracleEstimate(0.0, method, error_bound=0.0)
        num = gamma_recurrence(sp.n) * gamma_recurrence(sp.m + sp.n + a.order)
        den = gamma_recurrence(sp.m + sp.n) * gamma_recurrence(sp.n + a.order)
        for comp in a:
            num *= gamma_recurrence(comp + 1)
        value = num / den
        # float recurrences: ~1 ulp per multiplication
        ops = 2 * (sp.m + sp.n + a.order) + 8
        return OracleEstimate(value, method, error_bound=abs(value) * ops * 2.3e-16)
    if method is OracleMethod.MONTE_CARLO:
        return _mc_inner(a, b, sp, cfg)
    raise InputError(f"unknown oracle method {method}")


def oracle_toeplitz_coeff(
    beta: MultiIndex,
    gamma: MultiIndex,
    alpha: MultiIndex,
    sp: SpaceParams,
    method: OracleMethod = OracleMethod.RADIAL_QUADRATURE,
    cfg: OracleConfig = OracleConfig(),
) -> OracleEstimate:
    """Numerical <T_{z^beta conj(z)^gamma} e_alpha, e_target> via the oracle path."""
    comps = []
    for x, b_, g_ in zip(alpha, beta, gamma):
        t = x + b_ - g_
        if t < 0:
            return OracleEstimate(0.0, method, error_bound=0.0)
        comps.append(t)
    tau = MultiIndex(comps)
    power = alpha + beta
    inner = oracle_inner(power, power, sp, method, cfg)
    c_alpha = math.sqrt(_basis_constant_sq(alpha, sp))
    c_tau = math.sqrt(_basis_constant_sq(tau, sp))
    scale = c_alpha * c_tau
    out = replace(inner, value=inner.value * scale)
    if inner.error_bound is not None:
        out = replace(out, error_bound=inner.error_bound * scale + abs(out.value) * 1e-14)
    if inner.standard_error is not None:
        out = replace(out, standard_error=inner.standard_error * scale)
    return out
