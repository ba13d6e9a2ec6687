"""Spheroid-cavity ray and polarization transport.

A photon emitted at one focus of a prolate spheroid reflects once and passes
through the other focus.  Rays are parameterized by the angles (theta, phi)
of the surface point, with

    k  = (b sin(t) cos(p), b sin(t) sin(p), l + a cos(t)) / L+
    k' = (-b sin(t) cos(p), -b sin(t) sin(p), l - a cos(t)) / L-
    L+- = sqrt(b^2 sin^2(t) + (l -+ a cos(t))^2),   l = sqrt(a^2 - b^2)

k' points from the surface toward the second focus.  (The same construction
is sometimes written with the opposite sign on the z component of k'; that
variant does not pass through the second focus and is not used here.)

The polarization basis is eps1 (s, perpendicular to the plane of incidence),
eps2 = k x eps1, and the transported basis eps1' = eps1, eps2' = k' x eps1'.
A perfect mirror maps the s component to -eps1' and the p component to +eps2'
(tangential field flips, normal field survives); the relative sign between
the two channels is what the geometry factor is sensitive to.  ``convention=
"printed"`` drops the s-channel sign flip and is kept only for comparison:
it shifts the sphere value from 64*pi^2/27 to 32*pi^2/27 and breaks the
monotone decrease of the curve.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spheroid",
    "RayPair",
    "ThetaConvergenceError",
    "emission_ray",
    "angular_jacobian",
    "theta_factor_quadrature",
    "theta_factor_mc",
    "theta_curve",
    "THETA_SPHERE",
    "THETA_PLATEAU",
]

THETA_SPHERE = 64.0 * math.pi**2 / 27.0
THETA_PLATEAU = 8.0 * math.pi**2 / 9.0


class ThetaConvergenceError(RuntimeError):
    def __init__(self, msg, estimate):
        super().__init__(msg)
        self.estimate = estimate


@dataclass(frozen=True)
class Spheroid:
    """Prolate spheroid with semi-major axis a (along z) and semi-minor b."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a >= self.b > 0):
            raise ValueError(f"need a >= b > 0, got a={self.a}, b={self.b}")

    @property
    def l(self) -> float:
        """Focal half-distance sqrt(a^2 - b^2)."""
        return math.sqrt(self.a**2 - self.b**2)

    @property
    def ratio(self) -> float:
        return self.a / self.b


@dataclass(frozen=True)
class RayPair:
    theta: float
    phi: float
    k_hat: np.ndarray
    k_hat_prime: np.ndarray
    l_plus: float
    l_minus: float
    eps1: np.ndarray
    eps2: np.ndarray
    eps1_prime: np.ndarray
    eps2_prime: np.ndarray


def _frames(s: Spheroid, theta, phi):
    """Vectorized ray/polarization frames; returns a dict of arrays."""
    a, b, l = s.a, s.b, s.l
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    lp = np.sqrt(b * b * st * st + (l + a * ct) ** 2)
    lm = np.sqrt(b * b * st * st + (l - a * ct) ** 2)
    k = np.stack([b * st * cp, b * st * sp, l + a * ct]) / lp
    kp = np.stack([-b * st * cp, -b * st * sp, l - a * ct]) / lm
    e1 = np.stack([-sp, cp, np.zeros_like(sp + st)])
    e2 = np.stack([-(l + a * ct) * cp, -(l + a * ct) * sp, b * st]) / lp
    e2p = np.stack([(a * ct - l) * cp, (a * ct - l) * sp, -b * st]) / lm
    return {"k": k, "kp": kp, "e1": e1, "e2": e2, "e1p": e1, "e2p": e2p,
            "lp": lp, "lm": lm}


def emission_ray(s: Spheroid, theta: float, phi: float) -> RayPair:
    """Ray pair for emission angle (theta, phi); reflected ray hits the second focus."""
    if not (0.0 <= theta <= math.pi):
        raise ValueError(f"theta must be in [0, pi], got {theta}")
    if not (0.0 <= phi < 2.0 * math.pi):
        raise ValueError(f"phi must be in [0, 2*pi), got {phi}")
    f = _frames(s, np.float64(theta), np.float64(phi))
    return RayPair(
        theta=theta,
        phi=phi,
        k_hat=f["k"],
        k_hat_prime=f["kp"],
        l_plus=float(f["lp"]),
        l_minus=float(f["lm"]),
        eps1=f["e1"],
        eps2=f["e2"],
        eps1_prime=f["e1p"],
        eps2_prime=f["e2p"],
    )


def angular_jacobian(s: Spheroid, theta):
    """d(solid angle)/(dtheta dphi): the bracketed surface factor times sin(theta).

    Integrates to 4*pi over the full parameter range for any aspect ratio.
    """
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0) | (theta > math.pi)):
        raise ValueError("theta must be in [0, pi]")
    a, l = s.a, s.l
    st, ct = np.sin(theta), np.cos(theta)
    lp = np.sqrt(s.b**2 * st * st + (l + a * ct) ** 2)
    return (a / lp - l * (l + a * ct) * (a + l * ct) / lp**3) * st


def _pol_tensor_sum(s: Spheroid, theta, phi, convention: str):
    """sum_i sigma_i eps_i (x) eps_i' at each point; shape (3, 3, ...)."""
    f = _frames(s, theta, phi)
    sign_s = -1.0 if convention == "physical" else 1.0
    return sign_s * np.einsum("a...,b...->ab...", f["e1"], f["e1p"]) + np.einsum(
        "a...,b...->ab...", f["e2"], f["e2p"]
    )


def _check_convention(convention: str):
    if convention not in ("physical", "printed"):
        raise ValueError(f"convention must be 'physical' or 'printed', got {convention!r}")


def _grid(n_theta: int, n_phi: int):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    th = 0.5 * math.pi * (x + 1.0)
    wth = 0.5 * math.pi * w
    ph = 2.0 * math.pi * np.arange(n_phi) / n_phi
    wph = np.full(n_phi, 2.0 * math.pi / n_phi)
    return th, wth, ph, wph


def _theta_on_grid(s: Spheroid, n_theta: int, n_phi: int, convention: str) -> float:
    th, wth, ph, wph = _grid(n_theta, n_phi)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    w = np.outer(wth, wph) * angular_jacobian(s, tt)
    t = _pol_tensor_sum(s, tt, pp, convention)
    m = np.einsum("abxy,xy->ab", t, w)
    return float((m * m).sum()) / 9.0


def _theta_literal(s: Spheroid, n_theta: int, n_phi: int, convention: str) -> float:
    """Direct double-angle evaluation of the polarization integral (debug path).

    O(N^2) in grid points; use small grids.  Kept to check the factorized
    single-photon-tensor evaluation against the integral as written.
    """
    th, wth, ph, wph = _grid(n_theta, n_phi)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    w = (np.outer(wth, wph) * angular_jacobian(s, tt)).ravel()
    f = _frames(s, tt, pp)
    sign = np.array([-1.0 if convention == "physical" else 1.0, 1.0])
    e = np.stack([f["e1"], f["e2"]], axis=1).reshape(3, 2, -1)      # (3, i, x)
    ep = np.stack([f["e1p"], f["e2p"]], axis=1).reshape(3, 2, -1)
    ep = ep * sign[None, :, None]
    dot = np.einsum("aix,ajy->ixjy", e, e)
    dotp = np.einsum("aix,ajy->ixjy", ep, ep)
    return float(np.einsum("ixjy,ixjy,x,y->", dot, dotp, w, w)) / 9.0


def theta_factor_quadrature(
    s: Spheroid,
    rel_tol: float = 1e-9,
    convention: str = "physical",
    literal: bool = False,
) -> float:
    """Geometry factor Theta by adaptive tensor-product quadrature.

    Sphere limit is 64*pi^2/27; the large-aspect-ratio plateau is 8*pi^2/9.
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    _check_convention(convention)
    if literal:
        return _theta_literal(s, 48, 24, convention)
    n_theta, n_phi = 32, 16
    prev = _theta_on_grid(s, n_theta, n_phi, convention)
    while n_theta <= 4096:
        n_theta, n_phi = 2 * n_theta, min(2 * n_phi, 64)
        cur = _theta_on_grid(s, n_theta, n_phi, convention)
        if abs(cur - prev) <= rel_tol * abs(cur):
            return cur
        prev = cur
    raise ThetaConvergenceError(
        f"theta quadrature did not reach rel_tol={rel_tol} "
        f"for aspect ratio {s.ratio}", estimate=prev,
    )


def _theta_cdf(s: Spheroid, n: int = 8192):
    """Cumulative distribution of the theta marginal of the solid angle."""
    u = np.linspace(0.0, 1.0, n)
    th = 0.5 * math.pi * (1.0 - np.cos(math.pi * u))  # clusters at both poles
    pdf = angular_jacobian(s, th)
    cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) * np.diff(th) / 2.0)])
    cdf /= cdf[-1]
    return th, cdf


_BATCHES = 32


def theta_factor_mc(
    s: Spheroid,
    n_samples: int,
    seed: int = 42,
    convention: str = "physical",
    n_workers: int = 1,
) -> tuple[float, float]:
    """Monte-Carlo estimate of Theta with a bootstrap standard error.

    Emission directions are drawn from the true solid-angle density via an
    inverse-CDF table in theta (phi is uniform).  Work is split into a fixed
    number of batches, each with its own counter-derived substream, so the
    result is bit-identical for a given seed regardless of ``n_workers``.
    """
    if n_samples < 1000:
        raise ValueError("need n_samples >= 1000")
    _check_convention(convention)
    th_grid, cdf = _theta_cdf(s)
    sizes = np.full(_BATCHES, n_samples // _BATCHES)
    sizes[: n_samples % _BATCHES] += 1

    def run_batch(b: int) -> np.ndarray:
        rng = np.random.default_rng([seed, b])
        u = rng.random(sizes[b])
        theta = np.interp(u, cdf, th_grid)
        phi = rng.random(sizes[b]) * 2.0 * math.pi
        t = _pol_tensor_sum(s, theta, phi, convention)
        return t.mean(axis=-1)

    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            means = list(pool.map(run_batch, range(_BATCHES)))
    else:
        means = [run_batch(b) for b in range(_BATCHES)]
    means = np.stack(means)                      # (batch, 3, 3)
    weights = sizes / sizes.sum()

    def theta_of(mean_t: np.ndarray) -> float:
        m = 4.0 * math.pi * mean_t
        return float((m * m).sum()) / 9.0

    estimate = theta_of(np.einsum("b,bij->ij", weights, means))

    boot_rng = np.random.default_rng([seed, 2**31])
    resamples = boot_rng.integers(0, _BATCHES, size=(500, _BATCHES))
    boot = np.array(
        [theta_of(means[idx].mean(axis=0)) for idx in resamples]
    )
    return estimate, float(boot.std(ddof=1))


def theta_curve(ratios, rel_tol: float = 1e-7) -> list[dict]:
    """Theta over a list of aspect ratios a/b >= 1 (quadrature)."""
    rows = []
    for r in ratios:
        if r < 1:
            raise ValueError(f"aspect ratio must be >= 1, got {r}")
        theta = theta_factor_quadrature(Spheroid(float(r), 1.0), rel_tol=rel_tol)
        rows.append({"ratio": float(r), "theta": theta, "method": "quadrature",
                     "stderr": 0.0})
    return rows
