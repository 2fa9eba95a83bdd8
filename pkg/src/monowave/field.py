"""Evaluation of the wave, its gradient, the leading-order term of its
large-radius expansion, and the decay seminorms.

The wave attached to a coefficient set is

    u(x) = (2 pi)^(n/2) sum_{l,m} a_lm Y_lm(x/|x|) J_{l+Lam}(|x|) / |x|^Lam

with Lam = n/2 - 1.  Per-degree partial sums are accumulated
highest-degree-first with compensated summation, since large radii
subtract near-equal oscillatory terms.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import harmonics, randomwave
from .errors import ConfigError
from .randomwave import CoefficientSet
from .specfun import bessel_j_orders, funk_hecke_coefficient, lam, radial_factors


@dataclass(frozen=True)
class WaveField:
    """A coefficient set plus the evaluation policy."""

    coeffs: CoefficientSet
    mode: str = "exact_series"

    def __post_init__(self):
        if self.mode not in ("exact_series", "leading_order"):
            raise ConfigError(f"unknown evaluation mode {self.mode!r}")

    @property
    def n(self) -> int:
        return self.coeffs.n


def split_points(n: int, points):
    """Cartesian points (npts, n) -> (r, dirs); r = 0 rows keep a dummy dir."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[1] != n:
        raise ConfigError(f"points must have shape (npts, {n})")
    r = np.linalg.norm(pts, axis=1)
    safe = np.where(r > 0.0, r, 1.0)
    dirs = pts / safe[:, None]
    dirs[r == 0.0] = np.eye(n)[0]
    if n == 2:
        dirs = np.arctan2(dirs[:, 1], dirs[:, 0])
    return r, dirs


def r0_phase(n: int) -> float:
    """Stationary-phase offset pi (n-1) / 4."""
    return 0.25 * math.pi * (n - 1)


def leading_prefactor(n: int, r) -> np.ndarray:
    """2 (2 pi)^((n-1)/2) r^(-(n-1)/2), the amplitude of the leading term."""
    r = np.asarray(r, dtype=float)
    return 2.0 * (2.0 * math.pi) ** (0.5 * (n - 1)) * r ** (-0.5 * (n - 1))


def _degree_sums(coeffs: CoefficientSet, dirs) -> np.ndarray:
    """g_l(theta) = sum_m a_lm Y_lm(theta), shape (L+1, npts)."""
    B = harmonics.eval_Y_block(coeffs.L, coeffs.n, dirs)
    offs = coeffs.offsets
    npts = B.shape[1]
    g = np.empty((coeffs.L + 1, npts))
    for l in range(coeffs.L + 1):
        g[l] = coeffs.a[offs[l] : offs[l + 1]] @ B[offs[l] : offs[l + 1]]
    return g


def _degree_grad_sums(coeffs: CoefficientSet, dirs) -> np.ndarray:
    """sum_m a_lm grad_S Y_lm, shape (L+1, n-1, npts)."""
    G = harmonics.grad_Y_block(coeffs.L, coeffs.n, dirs)
    offs = coeffs.offsets
    out = np.empty((coeffs.L + 1, G.shape[1], G.shape[2]))
    for l in range(coeffs.L + 1):
        out[l] = np.einsum(
            "k,kcp->cp", coeffs.a[offs[l] : offs[l + 1]], G[offs[l] : offs[l + 1]]
        )
    return out


def _compensated_degree_sum(terms: np.ndarray) -> np.ndarray:
    """Kahan sum over axis 0, highest degree first."""
    total = np.zeros(terms.shape[1:])
    comp = np.zeros_like(total)
    for l in range(terms.shape[0] - 1, -1, -1):
        y = terms[l] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def eval_u(fld: WaveField, points) -> np.ndarray:
    """Wave values at Cartesian points (npts, n); r = 0 uses the series limit."""
    coeffs = fld.coeffs
    n = coeffs.n
    r, dirs = split_points(n, points)
    if fld.mode == "leading_order":
        if np.any(r <= 0.0):
            raise ConfigError("leading_order mode is undefined at the origin")
        return leading_prefactor(n, r) * eval_U_leading(coeffs, points)
    rf = radial_factors(n, coeffs.L, r)
    g = _degree_sums(coeffs, dirs)
    vals = (2.0 * math.pi) ** (0.5 * n) * _compensated_degree_sum(rf * g)
    return vals if vals.size > 1 else vals.reshape(-1)


def eval_grad_u(fld: WaveField, points):
    """Gradient split into radial and angular parts at r > 0.

    Returns (du_dr, angular) with du_dr of shape (npts,) and angular of
    shape (n-1, npts) in the local tangent frame (d/dphi scaled by 1/r
    already applied, i.e. these are Cartesian-gradient components).
    """
    coeffs = fld.coeffs
    n = coeffs.n
    lm = lam(n)
    r, dirs = split_points(n, points)
    if np.any(r <= 0.0):
        raise ConfigError("eval_grad_u requires r > 0")
    nu0 = lm
    seq = bessel_j_orders(nu0, coeffs.L + 1, r)
    jm1 = (2.0 * nu0 / r) * seq[0] - seq[1]  # J_{nu0 - 1}
    pref = (2.0 * math.pi) ** (0.5 * n)
    g = _degree_sums(coeffs, dirs)
    dr_terms = np.empty_like(g)
    for l in range(coeffs.L + 1):
        below = jm1 if l == 0 else seq[l - 1]
        dr_terms[l] = (below / r**lm - (l + 2.0 * lm) * seq[l] / r ** (lm + 1.0)) * g[l]
    du_dr = pref * _compensated_degree_sum(dr_terms)
    ggrad = _degree_grad_sums(coeffs, dirs)
    ang_terms = ggrad * seq[:, None, :]
    angular = pref * r ** (-lm - 1.0) * _compensated_degree_sum(ang_terms)
    return du_dr, angular


def eval_U_leading(coeffs: CoefficientSet, points) -> np.ndarray:
    """U = f_R(theta) cos(r - r0) + f_I(theta) sin(r - r0).

    The full leading term of u is leading_prefactor(n, r) * U.
    """
    n = coeffs.n
    r, dirs = split_points(n, points)
    f_r, f_i = randomwave.eval_f(coeffs, dirs)
    r0 = r0_phase(n)
    return f_r * np.cos(r - r0) + f_i * np.sin(r - r0)


def error_terms(fld: WaveField, points, r_min: float = 1.0):
    """Remainders of the three stationary-phase expansions.

    Returns a dict with 'E1' (npts,), 'E2' (npts,) and 'E3' (n-1, npts);
    each is the exact quantity minus its leading term, rescaled by the
    expansion amplitude.  Points below ``r_min`` are rejected: the
    asymptotic split has no meaning there.
    """
    coeffs = fld.coeffs
    n = coeffs.n
    r, dirs = split_points(n, points)
    if np.any(r < r_min):
        raise ConfigError(f"error_terms requires r >= r_min = {r_min}")
    r0 = r0_phase(n)
    cosr, sinr = np.cos(r - r0), np.sin(r - r0)
    f_r, f_i = randomwave.eval_f(coeffs, dirs)
    gf_r, gf_i = randomwave.eval_grad_f(coeffs, dirs)
    amp = leading_prefactor(n, r)
    exact = eval_u(WaveField(coeffs, "exact_series"), points)
    e1 = exact / amp - (f_r * cosr + f_i * sinr)
    du_dr, angular = eval_grad_u(fld if fld.mode == "exact_series" else WaveField(coeffs), points)
    e2 = du_dr / amp - (-f_r * sinr + f_i * cosr)
    e3 = angular * r / amp - (gf_r * cosr + gf_i * sinr)
    return {"E1": e1, "E2": e2, "E3": e3}


def ft_single_harmonic(l: int, m: int, n: int, points) -> np.ndarray:
    """Transform of a single harmonic surface density, complex-valued.

    Equals (2 pi)^(n/2) (-i)^l Y_lm(theta) J_{l+Lam}(r) / r^Lam; the
    quadrature oracle ``funk_hecke_coefficient(l, n, r) * Y_lm(theta)``
    must agree with it.
    """
    r, dirs = split_points(n, points)
    if np.any(r <= 0.0):
        raise ConfigError("ft_single_harmonic requires r > 0")
    rf = radial_factors(n, l, r)[l]
    y = np.atleast_1d(harmonics.eval_Y(l, m, n, dirs))
    return (2.0 * math.pi) ** (0.5 * n) * (-1j) ** l * y * rf


def ft_single_harmonic_oracle(l: int, m: int, n: int, points) -> np.ndarray:
    """Same transform through the one-dimensional quadrature route."""
    r, dirs = split_points(n, points)
    y = np.atleast_1d(harmonics.eval_Y(l, m, n, dirs))
    c = np.array([funk_hecke_coefficient(l, n, ri) for ri in r])
    return c * y


# ---------------------------------------------------------------------------
# decay seminorms


def _radial_simpson_nodes(R: float, nodes_per_period: int):
    num = int(math.ceil(R / (2.0 * math.pi) * nodes_per_period))
    num += num % 2  # Simpson needs an even interval count
    num = max(num, 8)
    r = np.linspace(0.0, R, num + 1)
    w = np.ones(num + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (R / num) / 3.0
    return r, w


def _angular_rule(coeffs: CoefficientSet):
    if coeffs.n == 2:
        return harmonics.sphere_quadrature(2, max(64, 4 * coeffs.L + 8))
    return harmonics.sphere_quadrature(3, max(12, coeffs.L + 4))


@dataclass(frozen=True)
class SeminormTable:
    radii: np.ndarray
    values: np.ndarray
    trend: str  # 'bounded' or 'growing'
    plateau_ratio: float


def _trend_from_values(radii, values) -> tuple:
    ratio = float(values[-1] / values[len(values) // 2]) if values[len(values) // 2] > 0 else math.inf
    return ("bounded" if 0.8 <= ratio <= 1.25 else "growing"), ratio


def agmon_hormander(fld: WaveField, R_list, nodes_per_period: int = 40) -> SeminormTable:
    """Decay seminorm (R^{-1} int_{B_R} u^2)^{1/2} on an increasing radius list.

    Tensor quadrature: composite Simpson radially (>= ``nodes_per_period``
    nodes per 2 pi) times a band-exact angular rule.
    """
    R_list = np.asarray(R_list, dtype=float)
    if np.any(np.diff(R_list) <= 0) or np.any(R_list <= 0):
        raise ConfigError("R_list must be positive and increasing")
    if nodes_per_period < 20:
        import warnings

        warnings.warn("fewer than 20 radial nodes per period; quadrature may be coarse")
    coeffs = fld.coeffs
    n = coeffs.n
    dirs, wang = _angular_rule(coeffs)
    vals = np.empty(R_list.size)
    for k, R in enumerate(R_list):
        r, wrad = _radial_simpson_nodes(R, nodes_per_period)
        rf = radial_factors(n, coeffs.L, r)  # (L+1, nr)
        g = _degree_sums(coeffs, dirs)  # (L+1, na)
        u = (2.0 * math.pi) ** (0.5 * n) * np.einsum("lr,la->ra", rf, g)
        shell = (u**2) @ wang  # (nr,)
        vals[k] = math.sqrt(max(0.0, float(np.sum(wrad * shell * r ** (n - 1)) / R)))
    trend, ratio = _trend_from_values(R_list, vals)
    return SeminormTable(R_list, vals, trend, ratio)


def angular_decay_check(fld: WaveField, R_list, nodes_per_period: int = 40,
                        weighted: bool = True) -> SeminormTable:
    """Weighted angular-gradient seminorm (R^{-1} int <x>^2 |ang grad u|^2)^{1/2}.

    With ``weighted=False`` drops the <x>^2 factor (for decay-rate
    comparisons).
    """
    R_list = np.asarray(R_list, dtype=float)
    if np.any(np.diff(R_list) <= 0) or np.any(R_list <= 0):
        raise ConfigError("R_list must be positive and increasing")
    coeffs = fld.coeffs
    n = coeffs.n
    lm = lam(n)
    dirs, wang = _angular_rule(coeffs)
    ggrad = _degree_grad_sums(coeffs, dirs)  # (L+1, n-1, na)
    vals = np.empty(R_list.size)
    pref = (2.0 * math.pi) ** (0.5 * n)
    for k, R in enumerate(R_list):
        r, wrad = _radial_simpson_nodes(R, nodes_per_period)
        r = r[1:]  # integrand ~ r^{n-3}; drop the origin node (weight ~ 0 anyway)
        wrad = wrad[1:]
        seq = bessel_j_orders(lm, coeffs.L, r)
        ang = pref * np.einsum("lr,lca->rca", seq, ggrad) * (r ** (-lm - 1.0))[:, None, None]
        dens = np.einsum("rca,a->r", ang**2, wang)
        weight = (1.0 + r**2) if weighted else np.ones_like(r)
        vals[k] = math.sqrt(max(0.0, float(np.sum(wrad * weight * dens * r ** (n - 1)) / R)))
    trend, ratio = _trend_from_values(R_list, vals)
    return SeminormTable(R_list, vals, trend, ratio)
