"""Spectra of Gram matrices against the Marchenko-Pastur law."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .ensemble import GramMatrix
from .errors import SpectralError

log = logging.getLogger(__name__)

NEG_TOL = 1e-10
QUAD_EPSABS = 1e-10


@dataclass(frozen=True)
class SpectralSample:
    eigenvalues: np.ndarray  # sorted, nondecreasing
    n: int
    seed: int | None = None
    clamped: int = 0

    @property
    def p(self) -> int:
        return self.eigenvalues.size

    @property
    def y(self) -> float:
        return self.p / self.n


def eigenvalues(G: GramMatrix) -> SpectralSample:
    try:
        lam = np.linalg.eigvalsh(G.entries)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(
            f"eigensolver failed for {G.code_id} (seed={G.seed}, p={G.p})"
        ) from exc
    lam = np.sort(lam)
    if lam.size and lam[0] < -NEG_TOL:
        raise SpectralError(
            f"eigenvalue {lam[0]:.3e} < -{NEG_TOL} for {G.code_id} (seed={G.seed})"
        )
    neg = lam < 0
    clamped = int(neg.sum())
    if clamped:
        log.debug("clamped %d eigenvalues, largest magnitude %.2e", clamped, -lam[0])
        lam[neg] = 0.0
    if abs(lam.sum() - G.p) > 1e-8 * G.p:
        raise SpectralError(f"eigenvalue sum {lam.sum()} differs from trace {G.p}")
    return SpectralSample(lam, G.n, G.seed, clamped)


def esd(sample: SpectralSample, z):
    """Right-continuous empirical distribution function of the eigenvalues."""
    return np.searchsorted(sample.eigenvalues, z, side="right") / sample.p


@dataclass(frozen=True)
class MPLaw:
    y: float

    def __post_init__(self):
        if not 0 < self.y < 1:
            raise ValueError(f"aspect ratio must lie in (0, 1), got {self.y}")

    @property
    def a(self) -> float:
        return (1 - math.sqrt(self.y)) ** 2

    @property
    def b(self) -> float:
        return (1 + math.sqrt(self.y)) ** 2


def mp_pdf(law: MPLaw, z):
    z = np.asarray(z, dtype=float)
    a, b = law.a, law.b
    inside = (z >= a) & (z <= b)
    zc = np.where(inside, z, 1.0)
    dens = np.sqrt(np.clip((b - zc) * (zc - a), 0, None)) / (2 * np.pi * zc * law.y)
    return np.where(inside, dens, 0.0)


def _cdf_scalar(law: MPLaw, z: float) -> float:
    a, b, y = law.a, law.b, law.y
    if z <= a:
        return 0.0
    if z >= b:
        return 1.0
    # integrate from the nearer endpoint, absorbing its square-root factor
    # into the quadrature weight
    if z <= (a + b) / 2:
        val, _ = integrate.quad(
            lambda t: math.sqrt(b - t) / t, a, z, weight="alg", wvar=(0.5, 0.0),
            epsabs=QUAD_EPSABS, epsrel=1e-12, limit=200,
        )
        F = val / (2 * math.pi * y)
    else:
        val, _ = integrate.quad(
            lambda t: math.sqrt(t - a) / t, z, b, weight="alg", wvar=(0.0, 0.5),
            epsabs=QUAD_EPSABS, epsrel=1e-12, limit=200,
        )
        F = 1 - val / (2 * math.pi * y)
    if not math.isfinite(F):
        raise SpectralError(f"quadrature failed for MP cdf at z={z}, y={y}")
    return min(max(F, 0.0), 1.0)


def mp_cdf(law: MPLaw, z):
    """Marchenko-Pastur distribution function by adaptive quadrature."""
    if np.ndim(z) == 0:
        return _cdf_scalar(law, float(z))
    z = np.asarray(z, dtype=float)
    flat = z.ravel()
    order = np.argsort(flat, kind="stable")
    vals = np.array([_cdf_scalar(law, float(v)) for v in flat[order]])
    vals = np.maximum.accumulate(vals)  # monotone despite quadrature noise
    out = np.empty_like(vals)
    out[order] = vals
    return out.reshape(z.shape)


def mp_quad_moment(law: MPLaw, l: int) -> float:
    """int z**l dMP(z), by quadrature with the square-root endpoint weights."""
    val, _ = integrate.quad(
        lambda t: t ** (l - 1), law.a, law.b, weight="alg", wvar=(0.5, 0.5),
        epsabs=1e-13, epsrel=1e-13, limit=200,
    )
    return val / (2 * math.pi * law.y)


def mp_moment_exact(y, l: int) -> Fraction:
    y = Fraction(y)
    if l == 0:
        return Fraction(1)
    return sum(
        (y**i / (i + 1) * math.comb(l, i) * math.comb(l - 1, i) for i in range(l)),
        Fraction(0),
    )


def mp_moment(y: float, l: int) -> float:
    """sum_{i<l} y**i/(i+1) C(l,i) C(l-1,i), evaluated exactly then rounded."""
    if l < 0:
        raise ValueError("moment order must be nonnegative")
    return float(mp_moment_exact(y, l))


def sup_distance(sample: SpectralSample, law: MPLaw) -> float:
    """sup_z |ESD(z) - F(z)|, attained at a jump of the ESD since F is continuous."""
    lam = sample.eigenvalues
    p = lam.size
    F = mp_cdf(law, lam)
    i = np.arange(1, p + 1)
    return float(np.max(np.maximum(np.abs(F - i / p), np.abs(F - (i - 1) / p))))


def theorem_bound(n: int, y: float) -> float:
    """800 / (sqrt(y)(1-y)) * log log n / log n."""
    if n < 16:
        raise ValueError(f"bound needs n >= 16, got {n}")
    if not 0 < y < 1:
        raise ValueError(f"aspect ratio must lie in (0, 1), got {y}")
    return 800 / (math.sqrt(y) * (1 - y)) * math.log(math.log(n)) / math.log(n)
