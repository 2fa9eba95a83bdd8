"""Real orthonormal spherical harmonics on S^1 and S^2.

Basis convention (documented here because any orthonormal choice gives
the same ensemble law; fixing one makes every test deterministic):

n = 2, directions are angles phi:
    l = 0:            Y_{0,1} = 1/sqrt(2 pi)
    l >= 1:  m = 1 -> cos(l phi)/sqrt(pi),   m = 2 -> sin(l phi)/sqrt(pi)

n = 3, directions are unit vectors; colatitude theta, longitude phi:
    m = 1      -> p_{l,0}(cos theta)                       (zonal)
    m = 2k     -> sqrt(2) p_{l,k}(cos theta) cos(k phi)
    m = 2k + 1 -> sqrt(2) p_{l,k}(cos theta) sin(k phi),   k = 1..l

where p_{l,k} are the fully normalized associated Legendre functions
without the Condon-Shortley phase (p_{l,k} > 0 near theta = 0+), so that
every basis function has unit L^2 norm on the sphere.

Surface gradients are returned in the orthonormal tangent frame
(e_theta, e_phi); the recurrences are written in terms of
q_{l,m} = p_{l,m}/sin(theta), which is seeded without any division, so
all formulas stay finite at the coordinate poles.
"""

import math

import numpy as np

from .errors import ConfigError

_SQRT2 = math.sqrt(2.0)


def sphere_area(n: int) -> float:
    """|S^{n-1}|: 2 pi for n = 2, 4 pi for n = 3."""
    if n == 2:
        return 2.0 * math.pi
    if n == 3:
        return 4.0 * math.pi
    raise ConfigError(f"dimension must be 2 or 3, got {n}")


def multiplicity(l: int, n: int) -> int:
    """Dimension d_l of the degree-l eigenspace (1 for l = 0)."""
    if l < 0:
        raise ConfigError(f"degree must be nonnegative, got {l}")
    sphere_area(n)  # validates n
    if l == 0:
        return 1
    return round((2 * l + n - 2) / (l + n - 2) * math.comb(l + n - 2, l))


def num_harmonics(lmax: int, n: int) -> int:
    return sum(multiplicity(l, n) for l in range(lmax + 1))


def degree_offsets(lmax: int, n: int) -> np.ndarray:
    """offsets[l] = flat index of (l, m=1); offsets[lmax+1] = total count."""
    offs = np.zeros(lmax + 2, dtype=np.int64)
    for l in range(lmax + 1):
        offs[l + 1] = offs[l] + multiplicity(l, n)
    return offs


def addition_constant(l: int, n: int) -> float:
    """c_{ln} = d_l / |S^{n-1}|, the pointwise value of sum_m Y_lm^2."""
    return multiplicity(l, n) / sphere_area(n)


# ---------------------------------------------------------------------------
# direction handling


def as_angles_2d(dirs) -> np.ndarray:
    return np.atleast_1d(np.asarray(dirs, dtype=float)).ravel()


def as_unit_vectors(dirs) -> np.ndarray:
    """Coerce to an (npts, 3) array of unit vectors (norm checked to 1e-8)."""
    v = np.asarray(dirs, dtype=float)
    if v.ndim == 1:
        v = v[None, :]
    if v.shape[-1] != 3:
        raise ConfigError("n=3 directions must be 3-vectors")
    norms = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(norms - 1.0) > 1e-8):
        raise ConfigError("directions must be unit vectors")
    return v / norms[:, None]


def colat_lon(dirs):
    """(cos(theta), sin(theta), phi) arrays for unit 3-vectors."""
    v = as_unit_vectors(dirs)
    ct = np.clip(v[:, 2], -1.0, 1.0)
    st = np.hypot(v[:, 0], v[:, 1])
    phi = np.arctan2(v[:, 1], v[:, 0])
    return ct, st, phi


def direction_from_angles(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
        axis=-1,
    )


def tangent_frame(dirs):
    """Orthonormal frame (e_theta, e_phi) at unit 3-vectors, shape (npts,3) each.

    At the exact poles the frame limit along phi = 0 is used.
    """
    ct, st, phi = colat_lon(dirs)
    cp, sp = np.cos(phi), np.sin(phi)
    e_th = np.stack([ct * cp, ct * sp, -st], axis=-1)
    e_ph = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
    return e_th, e_ph


# ---------------------------------------------------------------------------
# normalized associated Legendre recurrences (n = 3)


def plm_recurrence_coeffs(lmax: int):
    """Tables (alpha, beta, gamma) for the l-recurrences, shape (lmax+1, lmax+1).

    p_lm = alpha_lm cos(theta) p_{l-1,m} - beta_lm p_{l-2,m}
    sin(theta) dp_lm/dtheta = l cos(theta) p_lm - gamma_lm p_{l-1,m}
    """
    a = np.zeros((lmax + 1, lmax + 1))
    b = np.zeros((lmax + 1, lmax + 1))
    g = np.zeros((lmax + 1, lmax + 1))
    for m in range(lmax + 1):
        for l in range(m + 1, lmax + 1):
            a[l, m] = math.sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) / ((l - m) * (l + m)))
            if l >= m + 2:
                b[l, m] = math.sqrt(
                    (2.0 * l + 1.0)
                    * (l + m - 1.0)
                    * (l - m - 1.0)
                    / ((l - m) * (l + m) * (2.0 * l - 3.0))
                )
        for l in range(m, lmax + 1):
            g[l, m] = math.sqrt((2.0 * l + 1.0) * (l * l - m * m) / (2.0 * l - 1.0)) if l >= 1 else 0.0
    return a, b, g


def _plm_columns(lmax: int, ct: np.ndarray, st: np.ndarray, want_q: bool):
    """Yield per-order columns of p (and q = p/sin(theta)) over points.

    Generator of tuples (m, p_col, q_col) where p_col has shape
    (lmax - m + 1, npts); q_col is None for m = 0 or when not requested.
    """
    a, b, _ = plm_recurrence_coeffs(lmax)
    npts = ct.size
    pmm = np.full(npts, 1.0 / math.sqrt(4.0 * math.pi))
    pmm_prev = None
    for m in range(lmax + 1):
        if m > 0:
            pmm_prev, pmm = pmm, math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * pmm
        col = np.empty((lmax - m + 1, npts))
        col[0] = pmm
        if m + 1 <= lmax:
            col[1] = math.sqrt(2.0 * m + 3.0) * ct * pmm
        for l in range(m + 2, lmax + 1):
            col[l - m] = a[l, m] * ct * col[l - m - 1] - b[l, m] * col[l - m - 2]
        qcol = None
        if want_q and m >= 1:
            qcol = np.empty_like(col)
            qcol[0] = math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * pmm_prev
            if m + 1 <= lmax:
                qcol[1] = math.sqrt(2.0 * m + 3.0) * ct * qcol[0]
            for l in range(m + 2, lmax + 1):
                qcol[l - m] = a[l, m] * ct * qcol[l - m - 1] - b[l, m] * qcol[l - m - 2]
        yield m, col, qcol


# ---------------------------------------------------------------------------
# basis evaluation


def eval_Y_block(lmax: int, n: int, dirs) -> np.ndarray:
    """Matrix of basis values, shape (num_harmonics(lmax, n), npts)."""
    if n == 2:
        phi = as_angles_2d(dirs)
        out = np.empty((num_harmonics(lmax, 2), phi.size))
        out[0] = 1.0 / math.sqrt(2.0 * math.pi)
        row = 1
        inv = 1.0 / math.sqrt(math.pi)
        for l in range(1, lmax + 1):
            out[row] = np.cos(l * phi) * inv
            out[row + 1] = np.sin(l * phi) * inv
            row += 2
        return out
    ct, st, phi = colat_lon(dirs)
    offs = degree_offsets(lmax, 3)
    out = np.empty((offs[-1], ct.size))
    for m, col, _ in _plm_columns(lmax, ct, st, want_q=False):
        if m == 0:
            for l in range(lmax + 1):
                out[offs[l]] = col[l]
        else:
            cmphi = np.cos(m * phi)
            smphi = np.sin(m * phi)
            for l in range(m, lmax + 1):
                base = offs[l]
                out[base + 2 * m - 1] = _SQRT2 * col[l - m] * cmphi
                out[base + 2 * m] = _SQRT2 * col[l - m] * smphi
    return out


def grad_Y_block(lmax: int, n: int, dirs) -> np.ndarray:
    """Surface gradients of the basis, shape (num_harmonics, n-1, npts).

    n = 3 components are in the (e_theta, e_phi) frame.
    """
    if n == 2:
        phi = as_angles_2d(dirs)
        out = np.zeros((num_harmonics(lmax, 2), 1, phi.size))
        row = 1
        inv = 1.0 / math.sqrt(math.pi)
        for l in range(1, lmax + 1):
            out[row, 0] = -l * np.sin(l * phi) * inv
            out[row + 1, 0] = l * np.cos(l * phi) * inv
            row += 2
        return out
    ct, st, phi = colat_lon(dirs)
    _, _, g = plm_recurrence_coeffs(lmax)
    offs = degree_offsets(lmax, 3)
    out = np.zeros((offs[-1], 2, ct.size))
    p_l1 = None
    cols = dict(_iter_grad_columns(lmax, ct, st))
    # theta-derivative of the zonal column uses the m = 1 column:
    # d/dtheta p_l0 = -sqrt(l(l+1)) p_l1
    p0, _ = cols[0]
    if lmax >= 1:
        p_l1 = cols[1][0]
    for l in range(lmax + 1):
        if l >= 1:
            out[offs[l], 0] = -math.sqrt(l * (l + 1.0)) * p_l1[l - 1]
    for m in range(1, lmax + 1):
        pcol, qcol = cols[m]
        cmphi = np.cos(m * phi)
        smphi = np.sin(m * phi)
        for l in range(m, lmax + 1):
            # sin(theta)-free theta derivative via q = p/sin(theta)
            if l == m:
                dth = l * ct * qcol[0]
            else:
                dth = l * ct * qcol[l - m] - g[l, m] * qcol[l - m - 1]
            base = offs[l]
            out[base + 2 * m - 1, 0] = _SQRT2 * dth * cmphi
            out[base + 2 * m, 0] = _SQRT2 * dth * smphi
            out[base + 2 * m - 1, 1] = -_SQRT2 * m * qcol[l - m] * smphi
            out[base + 2 * m, 1] = _SQRT2 * m * qcol[l - m] * cmphi
    return out


def _iter_grad_columns(lmax, ct, st):
    for m, col, qcol in _plm_columns(lmax, ct, st, want_q=True):
        yield m, (col, qcol)


def _flat_index(l: int, m: int, n: int) -> int:
    d = multiplicity(l, n)
    if not (1 <= m <= d):
        raise ConfigError(f"intra-degree index m={m} out of range [1, {d}] for l={l}, n={n}")
    return degree_offsets(l, n)[l] + (m - 1)


def eval_Y(l: int, m: int, n: int, dirs):
    """Single real orthonormal harmonic Y_{lm} at one or many directions."""
    idx = _flat_index(l, m, n)
    block = eval_Y_block(l, n, dirs)
    vals = block[idx]
    return float(vals[0]) if vals.size == 1 else vals


def grad_Y(l: int, m: int, n: int, dirs):
    """Covariant surface gradient of Y_{lm}; shape (n-1,) or (n-1, npts)."""
    idx = _flat_index(l, m, n)
    block = grad_Y_block(l, n, dirs)
    vals = block[idx]
    return vals[:, 0] if vals.shape[-1] == 1 else vals


# ---------------------------------------------------------------------------
# quadrature grids


def sphere_quadrature(n: int, level: int):
    """Quadrature rule on S^{n-1}, exact for band-limited integrands.

    n = 2: ``level`` equispaced angles (trapezoid, spectrally accurate).
    n = 3: ``level`` Gauss-Legendre colatitudes x 2*level longitudes.
    Returns (dirs, weights); dirs are angles (n=2) or unit vectors (n=3).
    """
    if n == 2:
        phi = np.arange(level) * (2.0 * math.pi / level)
        return phi, np.full(level, 2.0 * math.pi / level)
    x, wx = np.polynomial.legendre.leggauss(level)
    nphi = 2 * level
    phi = np.arange(nphi) * (2.0 * math.pi / nphi)
    ct = x[:, None] * np.ones(nphi)[None, :]
    theta = np.arccos(np.clip(ct, -1, 1))
    ph = np.broadcast_to(phi[None, :], ct.shape)
    dirs = direction_from_angles(theta.ravel(), ph.ravel())
    w = (wx[:, None] * np.full(nphi, 2.0 * math.pi / nphi)[None, :]).ravel()
    return dirs, w
