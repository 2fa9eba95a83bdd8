"""Numba implementations of the hot kernels: per-point wave evaluation on
Cartesian grids and union-find labeling of sign-change cells.

The algorithms mirror the vectorized numpy twins in ``_kernels_numpy``;
the parity tests assert agreement between the two backends.
"""

import math

import numpy as np
from numba import njit

# ---------------------------------------------------------------------------
# Bessel helpers (scalar, per grid point)


@njit(cache=True)
def _sphjl_all(r, L, out):
    """Spherical Bessel j_l(r), l = 0..L, into ``out``."""
    if r < 1e-6:
        fact = 1.0
        for l in range(L + 1):
            if l > 0:
                fact *= r / (2.0 * l + 1.0)
            out[l] = fact * (1.0 - r * r / (2.0 * (2.0 * l + 3.0)))
        return
    s = math.sin(r)
    c = math.cos(r)
    out[0] = s / r
    if L == 0:
        return
    out[1] = s / (r * r) - c / r
    if L == 1:
        return
    if L + 2.0 < 0.5 * r:
        for l in range(2, L + 1):
            out[l] = (2.0 * l - 1.0) / r * out[l - 1] - out[l - 2]
        return
    m_start = L + int(2.0 * math.sqrt(L + 1.0)) + 25
    jp = 0.0
    jc = 1e-305
    for m in range(m_start, -1, -1):
        jm = (2.0 * m + 3.0) / r * jc - jp
        jp = jc
        jc = jm
        if m <= L:
            out[m] = jc
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            for k in range(m, L + 1):
                out[k] *= 1e-250
    if abs(s) > 0.1:
        scale = (s / r) / out[0]
    else:
        scale = (s / (r * r) - c / r) / out[1]
    for l in range(L + 1):
        out[l] *= scale


@njit(cache=True)
def _besj_int_all(z, L, out):
    """Integer-order J_l(z), l = 0..L, into ``out``."""
    if z <= 10.0:
        q = 0.25 * z * z
        for l in range(L + 1):
            term = 1.0
            for i in range(1, l + 1):
                term *= 0.5 * z / i
            total = term
            for k in range(1, 200):
                term *= -q / (k * (l + k))
                total += term
                if abs(term) <= 1e-18 * abs(total) + 1e-300:
                    break
            out[l] = total
        return
    top = max(L, int(z) + 1)
    m_start = top + int(2.0 * math.sqrt(top)) + 40
    if m_start % 2 == 1:
        m_start += 1
    jp = 0.0
    jc = 1e-305
    ssum = 0.0
    for m in range(m_start, -1, -1):
        if m % 2 == 0:
            ssum += (1.0 if m == 0 else 2.0) * jc
        if m <= L:
            out[m] = jc
        jm = 2.0 * m / z * jc - jp
        jp = jc
        jc = jm
        if abs(jc) > 1e250:
            jc *= 1e-250
            jp *= 1e-250
            ssum *= 1e-250
            for k in range(min(m, L + 1)):
                out[k] *= 1e-250
            for k in range(m, L + 1):
                if k <= L:
                    out[k] *= 1e-250
    scale = 1.0 / ssum
    for l in range(L + 1):
        out[l] *= scale


# ---------------------------------------------------------------------------
# wave evaluation on grid planes


@njit(cache=True)
def eval_plane_cart3(x0, ys, zs, bc, bs, alm_a, alm_b, r_lo, r_hi, fill, out):
    """u at nodes (x0, ys[j], zs[k]) with r in [r_lo, r_hi]; others get ``fill``.

    bc/bs: packed per-(l, m) cos/sin coefficient matrices, shape (L+1, L+1);
    alm_a/alm_b: normalized-Legendre recurrence tables of the same shape.
    """
    L = bc.shape[0] - 1
    ny = ys.size
    nz = zs.size
    g = np.empty(L + 1)
    jl = np.empty(L + 1)
    cosm = np.empty(L + 1)
    sinm = np.empty(L + 1)
    p00 = 1.0 / math.sqrt(4.0 * math.pi)
    for j in range(ny):
        y = ys[j]
        for k in range(nz):
            z = zs[k]
            r = math.sqrt(x0 * x0 + y * y + z * z)
            if r < r_lo or r > r_hi:
                out[j, k] = fill
                continue
            if r < 1e-12:
                out[j, k] = 4.0 * math.pi * bc[0, 0] * p00
                continue
            ct = z / r
            st = math.sqrt(x0 * x0 + y * y) / r
            phi = math.atan2(y, x0)
            cp = math.cos(phi)
            sp = math.sin(phi)
            cosm[0] = 1.0
            sinm[0] = 0.0
            for m in range(1, L + 1):
                cosm[m] = cosm[m - 1] * cp - sinm[m - 1] * sp
                sinm[m] = sinm[m - 1] * cp + cosm[m - 1] * sp
            for l in range(L + 1):
                g[l] = 0.0
            pmm = p00
            for m in range(L + 1):
                if m > 0:
                    pmm = st * math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * pmm
                trig = bc[m, m] * cosm[m] + bs[m, m] * sinm[m]
                p_prev = pmm
                g[m] += pmm * trig
                if m + 1 <= L:
                    p_curr = math.sqrt(2.0 * m + 3.0) * ct * pmm
                    g[m + 1] += p_curr * (bc[m + 1, m] * cosm[m] + bs[m + 1, m] * sinm[m])
                    for l in range(m + 2, L + 1):
                        p_next = alm_a[l, m] * ct * p_curr - alm_b[l, m] * p_prev
                        p_prev = p_curr
                        p_curr = p_next
                        g[l] += p_curr * (bc[l, m] * cosm[m] + bs[l, m] * sinm[m])
            _sphjl_all(r, L, jl)
            acc = 0.0
            comp = 0.0
            for l in range(L, -1, -1):
                term = g[l] * jl[l]
                yv = term - comp
                t = acc + yv
                comp = (t - acc) - yv
                acc = t
            out[j, k] = 4.0 * math.pi * acc
    return out


@njit(cache=True)
def eval_points_cart2(xs, ys, ac, as_, out):
    """u at 2-D points; ac/as_ are per-degree cos/sin coefficient arrays."""
    L = ac.size - 1
    jl = np.empty(L + 1)
    for i in range(xs.size):
        x = xs[i]
        y = ys[i]
        r = math.sqrt(x * x + y * y)
        if r < 1e-12:
            out[i] = 2.0 * math.pi * ac[0]
            continue
        phi = math.atan2(y, x)
        _besj_int_all(r, L, jl)
        cp = math.cos(phi)
        sp = math.sin(phi)
        cm = 1.0
        sm = 0.0
        acc = 0.0
        comp = 0.0
        for l in range(L + 1):
            if l > 0:
                cm_new = cm * cp - sm * sp
                sm = sm * cp + cm * sp
                cm = cm_new
            term = jl[l] * (ac[l] * cm + as_[l] * sm)
            yv = term - comp
            t = acc + yv
            comp = (t - acc) - yv
            acc = t
        out[i] = 2.0 * math.pi * acc
    return out


# ---------------------------------------------------------------------------
# union-find labeling


@njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True)
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


@njit(cache=True)
def label_mask_2d(mask, wrap_cols):
    """4-connected components of a boolean cell mask; labels 1..K, 0 outside.

    ``wrap_cols`` identifies the last column as adjacent to the first
    (polar grids wrap in the angular index).
    """
    ni, nj = mask.shape
    parent = np.arange(ni * nj, dtype=np.int32)
    for i in range(ni):
        for j in range(nj):
            if not mask[i, j]:
                continue
            flat = i * nj + j
            if i > 0 and mask[i - 1, j]:
                _union(parent, flat, flat - nj)
            if j > 0 and mask[i, j - 1]:
                _union(parent, flat, flat - 1)
    if wrap_cols and nj > 2:
        for i in range(ni):
            if mask[i, 0] and mask[i, nj - 1]:
                _union(parent, i * nj, i * nj + nj - 1)
    labels = np.zeros((ni, nj), dtype=np.int32)
    remap = np.zeros(ni * nj, dtype=np.int32)
    count = 0
    for i in range(ni):
        for j in range(nj):
            if not mask[i, j]:
                continue
            root = _find(parent, i * nj + j)
            if remap[root] == 0:
                count += 1
                remap[root] = count
            labels[i, j] = remap[root]
    return labels, count


@njit(cache=True)
def label_mask_3d(mask):
    """6-connected components of a 3-D boolean cell mask; labels 1..K."""
    ni, nj, nk = mask.shape
    parent = np.arange(ni * nj * nk, dtype=np.int32)
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                if not mask[i, j, k]:
                    continue
                flat = (i * nj + j) * nk + k
                if i > 0 and mask[i - 1, j, k]:
                    _union(parent, flat, flat - nj * nk)
                if j > 0 and mask[i, j - 1, k]:
                    _union(parent, flat, flat - nk)
                if k > 0 and mask[i, j, k - 1]:
                    _union(parent, flat, flat - 1)
    labels = np.zeros((ni, nj, nk), dtype=np.int32)
    remap = np.zeros(ni * nj * nk, dtype=np.int32)
    count = 0
    for i in range(ni):
        for j in range(nj):
            for k in range(nk):
                if not mask[i, j, k]:
                    continue
                root = _find(parent, (i * nj + j) * nk + k)
                if remap[root] == 0:
                    count += 1
                    remap[root] = count
                labels[i, j, k] = remap[root]
    return labels, count
