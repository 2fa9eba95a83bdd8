"""Gaussian ensembles of spherical densities: variance schedules,
coefficient sampling, evaluation of the density and its summary
statistics.

Sampling is reproducible and order-independent: the coefficients of
degree l are drawn from a counter-based Philox stream keyed by
``(seed, l)``, so a realization is bit-identical no matter which degrees
or seeds are generated first, and truncating at a smaller L yields a
prefix of the same coefficients.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import harmonics
from .errors import ConfigError, NumericError
from .specfun import legendre_table

_COEFF_FORMAT = "monowave-coefficients"
_COEFF_VERSION = 1


# ---------------------------------------------------------------------------
# variance schedules


@dataclass(frozen=True)
class VarianceSchedule:
    """Rule l -> sigma_l plus the regularity exponent it targets.

    kind 'power_law' uses sigma_l = (1+l)^(-beta); 'custom' reads from an
    explicit table (which must cover every degree up to L_max); 'unit' is
    the flat sigma_l = 1 ensemble, flagged non-scattering and rejected by
    operations that require a convergent weighted tail.
    """

    kind: str
    n: int
    s: float
    L_max: int
    beta: Optional[float] = None
    table: Optional[tuple] = None

    def __post_init__(self):
        harmonics.sphere_area(self.n)
        if self.L_max < 0:
            raise ConfigError("L_max must be nonnegative")
        if self.kind == "power_law":
            if self.beta is None:
                raise ConfigError("power_law schedule requires beta")
        elif self.kind == "custom":
            if self.table is None or len(self.table) < self.L_max + 1:
                raise ConfigError(
                    "custom schedule table must cover degrees 0..L_max"
                )
            object.__setattr__(self, "table", tuple(float(v) for v in self.table))
            if any(v <= 0 for v in self.table):
                raise ConfigError("custom schedule entries must be positive")
        elif self.kind != "unit":
            raise ConfigError(f"unknown schedule kind {self.kind!r}")

    @property
    def is_scattering(self) -> bool:
        return self.kind != "unit"

    def sigma(self, l) -> np.ndarray:
        l = np.atleast_1d(np.asarray(l))
        if np.any(l < 0):
            raise ConfigError("degrees must be nonnegative")
        if self.kind == "power_law":
            return (1.0 + l) ** (-self.beta)
        if self.kind == "unit":
            return np.ones(l.shape)
        if np.any(l > self.L_max):
            raise ConfigError("custom schedule queried beyond its table")
        return np.asarray(self.table, dtype=float)[l]

    def descriptor(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "s": self.s, "L_max": self.L_max}
        if self.kind == "power_law":
            d["beta"] = self.beta
        if self.kind == "custom":
            d["table"] = list(self.table)
        return d


def schedule_from_descriptor(d: dict) -> VarianceSchedule:
    return VarianceSchedule(
        kind=d["kind"],
        n=int(d["n"]),
        s=float(d["s"]),
        L_max=int(d["L_max"]),
        beta=d.get("beta"),
        table=tuple(d["table"]) if "table" in d else None,
    )


def power_law_schedule(n: int, s: float, beta: float, L_max: int) -> VarianceSchedule:
    return VarianceSchedule(kind="power_law", n=n, s=s, L_max=L_max, beta=beta)


def unit_schedule(n: int, L_max: int, s: float = 0.0) -> VarianceSchedule:
    return VarianceSchedule(kind="unit", n=n, s=s, L_max=L_max)


def tapered_schedule(n: int, s: float, beta: float, l_flat: int, L_max: int) -> VarianceSchedule:
    """Custom table: sigma_l = 1 for l <= l_flat, power-law decay beyond.

    Keeps low degrees at unit scale (so the even and odd parts of the
    density stay comparable) while the tail still satisfies the weighted
    summability requirement for the given s.
    """
    l = np.arange(L_max + 1, dtype=float)
    tab = np.minimum(1.0, ((1.0 + l) / (1.0 + l_flat)) ** (-beta))
    return VarianceSchedule(kind="custom", n=n, s=s, L_max=L_max, table=tuple(tab))


def default_schedule(n: int) -> VarianceSchedule:
    """Desk-scale defaults: n=2 (s=3.6, beta=4.5), n=3 (s=4.1, beta=5.5)."""
    if n == 2:
        return power_law_schedule(2, s=3.6, beta=4.5, L_max=32)
    if n == 3:
        return power_law_schedule(3, s=4.1, beta=5.5, L_max=24)
    raise ConfigError(f"dimension must be 2 or 3, got {n}")


def default_pn_schedule() -> VarianceSchedule:
    """Default n=3 ensemble for vanishing-probability experiments.

    The plain power-law default makes the odd part of the density ~40x
    smaller than the even part, so the nonvanishing fraction is
    indistinguishable from 1 at a few hundred seeds.  A flat-then-decay
    table keeps both parities at unit scale and puts the vanishing
    probability well inside (0, 1) while still being a valid scattering
    schedule for s = 4.1.
    """
    return tapered_schedule(3, s=4.1, beta=5.5, l_flat=4, L_max=24)


@dataclass(frozen=True)
class ConvergenceReport:
    converges: Optional[bool]
    tail_bound: float
    detail: str


def check_convergence(schedule: VarianceSchedule) -> ConvergenceReport:
    """Weighted-tail summability check sum (1+l)^(2s+n-2) sigma_l^2.

    Analytic for power-law schedules (converges iff the exponent beats
    -1); numeric partial sums with a fitted-decay tail heuristic for
    custom tables; always divergent for the unit schedule.
    """
    s, n = schedule.s, schedule.n
    expo = 2.0 * s + n - 2.0
    if schedule.kind == "unit":
        return ConvergenceReport(False, math.inf, "unit schedule: terms do not tend to 0")
    if schedule.kind == "power_law":
        e = expo - 2.0 * schedule.beta
        if e < -1.0:
            lmax = schedule.L_max
            tail = (1.0 + lmax) ** (e + 1.0) / (-e - 1.0)
            return ConvergenceReport(True, tail, f"power-law exponent {e:.3f} < -1")
        return ConvergenceReport(False, math.inf, f"power-law exponent {e:.3f} >= -1")
    l = np.arange(schedule.L_max + 1, dtype=float)
    terms = (1.0 + l) ** expo * schedule.sigma(np.arange(schedule.L_max + 1)) ** 2
    head = float(terms.sum())
    lo = max(2, schedule.L_max // 2)
    seg = terms[lo:]
    if np.all(seg > 0) and seg.size >= 3:
        x = np.log(1.0 + l[lo:])
        p = -np.polyfit(x, np.log(seg), 1)[0]
        if p > 1.0:
            tail = float(seg[-1] * (1.0 + l[-1]) / (p - 1.0))
            return ConvergenceReport(True, tail, f"fitted decay exponent {p:.2f} > 1")
        return ConvergenceReport(False, math.inf, f"fitted decay exponent {p:.2f} <= 1")
    return ConvergenceReport(None, math.nan, f"partial sum {head:.4g}; tail trend unclear")


def choose_truncation(schedule: VarianceSchedule, tol: float = 1e-6) -> int:
    """Smallest L with variance-mass tail below tol x head.

    Uses the unweighted mass sum d_l sigma_l^2, which controls the
    evaluation accuracy of the wave; the weighted H^s tail of the
    schedule decays too slowly to be a usable truncation criterion at
    desk scale and is recorded separately in output metadata.
    """
    if schedule.kind == "unit":
        raise ConfigError("unit schedule has no finite auto-truncation; pass L explicitly")
    ls = np.arange(schedule.L_max + 1)
    d = np.array([harmonics.multiplicity(int(l), schedule.n) for l in ls], dtype=float)
    mass = d * schedule.sigma(ls) ** 2
    total = mass.sum()
    cum = np.cumsum(mass)
    ok = np.nonzero(total - cum <= tol * cum)[0]
    return int(ok[0]) if ok.size else schedule.L_max


def hs_tail_fraction(schedule: VarianceSchedule, L: int) -> float:
    """Fraction of the H^s-weighted mass beyond degree L (within the table)."""
    ls = np.arange(schedule.L_max + 1)
    d = np.array([harmonics.multiplicity(int(l), schedule.n) for l in ls], dtype=float)
    w = d * schedule.sigma(ls) ** 2 * (1.0 + ls) ** (2.0 * schedule.s)
    total = w.sum()
    return float(w[L + 1 :].sum() / total) if total > 0 else 0.0


# ---------------------------------------------------------------------------
# coefficient sets


@dataclass(frozen=True)
class CoefficientSet:
    """Realized Gaussian coefficients a_{lm} for degrees 0..L."""

    n: int
    L: int
    s: float
    seed: int
    schedule: dict
    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = harmonics.num_harmonics(self.L, self.n)
        if self.a.shape != (expected,):
            raise ConfigError(f"coefficient array must have shape ({expected},)")
        self.a.setflags(write=False)

    @property
    def offsets(self) -> np.ndarray:
        return harmonics.degree_offsets(self.L, self.n)

    def degree_coeffs(self, l: int) -> np.ndarray:
        offs = self.offsets
        return self.a[offs[l] : offs[l + 1]]

    def coeff(self, l: int, m: int) -> float:
        d = harmonics.multiplicity(l, self.n)
        if not (1 <= m <= d):
            raise ConfigError(f"m={m} out of range [1, {d}]")
        return float(self.degree_coeffs(l)[m - 1])

    def save(self, path) -> None:
        doc = {
            "format": _COEFF_FORMAT,
            "version": _COEFF_VERSION,
            "n": self.n,
            "L": self.L,
            "s": self.s,
            "seed": self.seed,
            "schedule": self.schedule,
            "a_hex": [float(v).hex() for v in self.a],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "CoefficientSet":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if doc.get("format") != _COEFF_FORMAT or doc.get("version") != _COEFF_VERSION:
            raise ConfigError(f"not a version-{_COEFF_VERSION} coefficient dump: {path}")
        a = np.array([float.fromhex(v) for v in doc["a_hex"]])
        return cls(n=int(doc["n"]), L=int(doc["L"]), s=float(doc["s"]),
                   seed=int(doc["seed"]), schedule=doc["schedule"], a=a)

    def same_realization(self, other: "CoefficientSet") -> bool:
        return (
            self.n == other.n
            and self.L == other.L
            and self.seed == other.seed
            and np.array_equal(self.a, other.a)
        )


def _degree_stream(seed: int, l: int) -> np.random.Generator:
    key = ((int(seed) & 0xFFFFFFFFFFFFFFFF) << 64) | (l & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))


def sample_coefficients(schedule: VarianceSchedule, seed: int,
                        L: Optional[int] = None) -> CoefficientSet:
    """Draw a_{lm} ~ N(0, sigma_l^2), independent across (l, m).

    Deterministic in (seed, schedule, L); L defaults to the variance-mass
    auto-truncation.
    """
    if L is None:
        L = choose_truncation(schedule)
    if L > schedule.L_max:
        raise ConfigError(f"L={L} exceeds schedule L_max={schedule.L_max}")
    n = schedule.n
    sig = schedule.sigma(np.arange(L + 1))
    parts = []
    for l in range(L + 1):
        g = _degree_stream(seed, l)
        parts.append(g.standard_normal(harmonics.multiplicity(l, n)) * sig[l])
    return CoefficientSet(n=n, L=L, s=schedule.s, seed=int(seed),
                          schedule=schedule.descriptor(), a=np.concatenate(parts))


def sample_coefficient_matrix(schedule: VarianceSchedule, seeds,
                              L: Optional[int] = None) -> np.ndarray:
    """Coefficient rows for many seeds, shape (nseeds, num_harmonics).

    Row k is bit-identical to ``sample_coefficients(schedule, seeds[k], L).a``.
    """
    if L is None:
        L = choose_truncation(schedule)
    n = schedule.n
    sig = schedule.sigma(np.arange(L + 1))
    offs = harmonics.degree_offsets(L, n)
    out = np.empty((len(seeds), offs[-1]))
    for i, seed in enumerate(seeds):
        for l in range(L + 1):
            g = _degree_stream(seed, l)
            out[i, offs[l] : offs[l + 1]] = g.standard_normal(offs[l + 1] - offs[l]) * sig[l]
    return out


# ---------------------------------------------------------------------------
# density evaluation


def parity_signs(L: int, n: int) -> np.ndarray:
    """Per-coefficient signs and parity flags for the density split.

    Returns (signs, is_even) where f_R = sum over even-l entries of
    sign * a * Y and f_I likewise over odd-l entries.
    """
    offs = harmonics.degree_offsets(L, n)
    signs = np.empty(offs[-1])
    even = np.empty(offs[-1], dtype=bool)
    for l in range(L + 1):
        sl = slice(offs[l], offs[l + 1])
        if l % 2 == 0:
            signs[sl] = (-1.0) ** (l // 2)
            even[sl] = True
        else:
            signs[sl] = (-1.0) ** ((l - 1) // 2)
            even[sl] = False
    return signs, even


def eval_f(coeffs: CoefficientSet, dirs, chunk: int = 8192):
    """Real and imaginary parts of the density at the given directions."""
    n, L = coeffs.n, coeffs.L
    pts = harmonics.as_angles_2d(dirs) if n == 2 else harmonics.as_unit_vectors(dirs)
    npts = pts.shape[0]
    signs, even = parity_signs(L, n)
    wr = np.where(even, coeffs.a * signs, 0.0)
    wi = np.where(~even, coeffs.a * signs, 0.0)
    f_r = np.empty(npts)
    f_i = np.empty(npts)
    for lo in range(0, npts, chunk):
        hi = min(npts, lo + chunk)
        B = harmonics.eval_Y_block(L, n, pts[lo:hi])
        f_r[lo:hi] = wr @ B
        f_i[lo:hi] = wi @ B
    return f_r, f_i


def eval_grad_f(coeffs: CoefficientSet, dirs, chunk: int = 4096):
    """Surface gradients of f_R and f_I, each of shape (n-1, npts)."""
    n, L = coeffs.n, coeffs.L
    pts = harmonics.as_angles_2d(dirs) if n == 2 else harmonics.as_unit_vectors(dirs)
    npts = pts.shape[0]
    signs, even = parity_signs(L, n)
    wr = np.where(even, coeffs.a * signs, 0.0)
    wi = np.where(~even, coeffs.a * signs, 0.0)
    g_r = np.empty((n - 1, npts))
    g_i = np.empty((n - 1, npts))
    for lo in range(0, npts, chunk):
        hi = min(npts, lo + chunk)
        G = harmonics.grad_Y_block(L, n, pts[lo:hi])
        g_r[:, lo:hi] = np.einsum("k,kcp->cp", wr, G)
        g_i[:, lo:hi] = np.einsum("k,kcp->cp", wi, G)
    return g_r, g_i


def hs_norm(coeffs: CoefficientSet, s: Optional[float] = None) -> float:
    """sqrt( sum (1+l)^(2s) a_{lm}^2 ); s defaults to the set's exponent."""
    if s is None:
        s = coeffs.s
    offs = coeffs.offsets
    total = 0.0
    for l in range(coeffs.L + 1):
        block = coeffs.a[offs[l] : offs[l + 1]]
        total += (1.0 + l) ** (2.0 * s) * float(block @ block)
    return math.sqrt(total)


def phase_and_modulus(coeffs: CoefficientSet, dirs, threshold: float = 1e-10):
    """Pointwise modulus and principal phase of f = |f| e^{i Theta}.

    Raises NumericError where the modulus is degenerate (below
    ``threshold`` times the ensemble scale); use ``phase_field`` for
    globally unwrapped phases on a grid.
    """
    f_r, f_i = eval_f(coeffs, dirs)
    mod = np.hypot(f_r, f_i)
    scale = math.sqrt(analytic_variance(schedule_from_descriptor(coeffs.schedule)))
    if np.any(mod < threshold * scale):
        raise NumericError("degenerate modulus: |f| below threshold at a queried direction")
    phase = np.arctan2(f_i, f_r)
    if mod.size == 1:
        return float(mod[0]), float(phase[0])
    return mod, phase


def phase_field(coeffs: CoefficientSet, resolution: int):
    """Unwrapped phase of f on an angular grid, plus the total winding.

    n = 2: returns (phi_nodes, Theta, winding); winding is the integer
    (Theta(2 pi) - Theta(0)) / (2 pi), always 0 for these real-wave
    ensembles (f(-xi) = conj f(xi)).

    n = 3: returns (colat_nodes, lon_nodes, Theta, max_seam_jump) where
    Theta has shape (ncolat, nlon); the seam diagnostic is the largest
    wrap-around mismatch and should be ~0 for nonvanishing f.
    """
    if coeffs.n == 2:
        phi = np.arange(resolution + 1) * (2.0 * math.pi / resolution)
        f_r, f_i = eval_f(coeffs, phi)
        theta = np.unwrap(np.arctan2(f_i, f_r))
        winding = int(round((theta[-1] - theta[0]) / (2.0 * math.pi)))
        return phi, theta, winding
    ncolat = resolution
    nlon = 2 * resolution
    colat = (np.arange(ncolat) + 0.5) * (math.pi / ncolat)
    lon = np.arange(nlon) * (2.0 * math.pi / nlon)
    cg, lg = np.meshgrid(colat, lon, indexing="ij")
    dirs = harmonics.direction_from_angles(cg.ravel(), lg.ravel())
    f_r, f_i = eval_f(coeffs, dirs)
    raw = np.arctan2(f_i, f_r).reshape(ncolat, nlon)
    theta = raw.copy()
    mid = ncolat // 2
    theta[mid] = np.unwrap(theta[mid])
    for i in range(mid + 1, ncolat):
        theta[i] = theta[i - 1] + _wrap_to_pi(theta[i] - theta[i - 1])
    for i in range(mid - 1, -1, -1):
        theta[i] = theta[i + 1] + _wrap_to_pi(theta[i] - theta[i + 1])
    seam = np.abs(_wrap_to_pi(theta[:, 0] - theta[:, -1]) - (theta[:, 0] - theta[:, -1]))
    return colat, lon, theta, float(seam.max())


def _wrap_to_pi(x):
    return (x + math.pi) % (2.0 * math.pi) - math.pi


# ---------------------------------------------------------------------------
# minimum modulus and vanishing classification


def analytic_variance(schedule: VarianceSchedule, parity: Optional[str] = None,
                      L: Optional[int] = None) -> float:
    """Pointwise variance sum sigma_l^2 c_{ln} over the requested parity."""
    if L is None:
        L = schedule.L_max
    total = 0.0
    for l in range(L + 1):
        if parity == "even" and l % 2 == 1:
            continue
        if parity == "odd" and l % 2 == 0:
            continue
        total += float(schedule.sigma(l)[0]) ** 2 * harmonics.addition_constant(l, schedule.n)
    return total


@dataclass(frozen=True)
class MinModulusReport:
    min_value: float
    argmin: np.ndarray
    classification: str  # 'nonvanishing' | 'vanishing' | 'undetermined'
    threshold: float
    zero_point: Optional[np.ndarray] = None


def min_modulus_on_sphere(coeffs: CoefficientSet, grid_resolution: int = 96) -> MinModulusReport:
    """Grid minimum of |f| with local refinement and a zero certificate.

    classification: 'nonvanishing' when the refined minimum exceeds the
    threshold delta = 1e-3 sqrt(Var f); 'vanishing' when a Newton search
    converges to a common transversal zero of (f_R, f_I); otherwise
    'undetermined'.
    """
    if grid_resolution <= 0:
        raise ConfigError("grid resolution must be positive")
    sched = schedule_from_descriptor(coeffs.schedule)
    scale = math.sqrt(analytic_variance(sched))
    delta = 1e-3 * scale
    if coeffs.n == 2:
        return _min_modulus_2d(coeffs, grid_resolution, delta, scale)
    return _min_modulus_3d(coeffs, grid_resolution, delta, scale)


def _min_modulus_2d(coeffs, resolution, delta, scale):
    nphi = max(64, resolution)
    phi = np.arange(nphi) * (2.0 * math.pi / nphi)
    f_r, f_i = eval_f(coeffs, phi)
    mod = np.hypot(f_r, f_i)
    j = int(np.argmin(mod))
    x, step = phi[j], 2.0 * math.pi / nphi

    def val(p):
        fr, fi = eval_f(coeffs, np.array([p]))
        return math.hypot(fr[0], fi[0])

    best, bx = mod[j], x
    while step > 1e-12:
        for cand in (bx - step, bx + step):
            v = val(cand)
            if v < best:
                best, bx = v, cand
        step *= 0.5
    arg = np.array([bx % (2.0 * math.pi)])
    if best > delta:
        return MinModulusReport(best, arg, "nonvanishing", delta)
    if best < 1e-12 * scale:
        return MinModulusReport(best, arg, "vanishing", delta, zero_point=arg)
    return MinModulusReport(best, arg, "undetermined", delta)


def _min_modulus_3d(coeffs, resolution, delta, scale):
    ncolat, nlon = resolution, 2 * resolution
    colat = (np.arange(ncolat) + 0.5) * (math.pi / ncolat)
    lon = np.arange(nlon) * (2.0 * math.pi / nlon)
    cg, lg = np.meshgrid(colat, lon, indexing="ij")
    dirs = harmonics.direction_from_angles(cg.ravel(), lg.ravel())
    f_r, f_i = eval_f(coeffs, dirs)
    mod = np.hypot(f_r, f_i).reshape(ncolat, nlon)

    # coordinate-descent refinement of the grid minimum
    i, j = np.unravel_index(np.argmin(mod), mod.shape)
    th, ph = colat[i], lon[j]
    step = math.pi / ncolat

    def val(t, p):
        t = min(max(t, 1e-9), math.pi - 1e-9)
        fr, fi = eval_f(coeffs, harmonics.direction_from_angles(t, p))
        return math.hypot(fr[0], fi[0])

    best = mod[i, j]
    while step > 1e-10:
        moved = False
        for dt, dp in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            v = val(th + dt, ph + dp)
            if v < best:
                best, th, ph = v, th + dt, ph + dp
                moved = True
        if not moved:
            step *= 0.5
    argmin = harmonics.direction_from_angles(th, ph)

    zero = _newton_zero_certificate(coeffs, mod, colat, lon, scale)
    if zero is not None:
        return MinModulusReport(best, argmin, "vanishing", delta, zero_point=zero)
    if best > delta:
        return MinModulusReport(best, argmin, "nonvanishing", delta)
    return MinModulusReport(best, argmin, "undetermined", delta)


def _newton_zero_certificate(coeffs, mod, colat, lon, scale, max_candidates=40):
    """2-D Newton in the tangent plane from the most promising grid cells.

    Certifies a regular zero when |f| contracts below 1e-10 x scale with a
    well-conditioned Jacobian (smallest singular value bounded away from 0).
    """
    order = np.argsort(mod.ravel())[:max_candidates]
    grad_scale = scale  # gradients carry the same sigma scale
    for flat in order:
        i, j = np.unravel_index(flat, mod.shape)
        p = harmonics.direction_from_angles(colat[i], lon[j])[None, :][0]
        ok = True
        for _ in range(40):
            fr, fi = eval_f(coeffs, p)
            gr, gi = eval_grad_f(coeffs, p)
            jac = np.array([[gr[0, 0], gr[1, 0]], [gi[0, 0], gi[1, 0]]])
            sv = np.linalg.svd(jac, compute_uv=False)
            if sv[-1] < 1e-6 * grad_scale:
                ok = False
                break
            stepv = np.linalg.solve(jac, -np.array([fr[0], fi[0]]))
            if not np.all(np.isfinite(stepv)) or np.linalg.norm(stepv) > 1.0:
                ok = False
                break
            e_th, e_ph = harmonics.tangent_frame(p)
            p = p + stepv[0] * e_th[0] + stepv[1] * e_ph[0]
            p = p / np.linalg.norm(p)
            if math.hypot(fr[0], fi[0]) < 1e-12 * scale:
                break
        if not ok:
            continue
        fr, fi = eval_f(coeffs, p)
        gr, gi = eval_grad_f(coeffs, p)
        jac = np.array([[gr[0, 0], gr[1, 0]], [gi[0, 0], gi[1, 0]]])
        sv = np.linalg.svd(jac, compute_uv=False)
        if math.hypot(fr[0], fi[0]) < 1e-10 * scale and sv[-1] > 1e-4 * grad_scale:
            return p
    return None


# ---------------------------------------------------------------------------
# covariance kernel of the density


@dataclass(frozen=True)
class CovarianceValue:
    value: float
    tail_bound: float


def covariance_f_analytic(schedule: VarianceSchedule, parity: str, cosangle,
                          L: Optional[int] = None) -> CovarianceValue:
    """Covariance kernel sum over one parity: sigma_l^2 c_{ln} P_{ln}(cos angle).

    Truncated at L (default the schedule's L_max) with the tail bounded by
    the remaining mass sum (|P_{ln}| <= 1 on [-1, 1]).
    """
    if parity not in ("even", "odd"):
        raise ConfigError("parity must be 'even' or 'odd'")
    if L is None:
        L = schedule.L_max
    t = np.atleast_1d(np.asarray(cosangle, dtype=float))
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise ConfigError("cosangle must lie in [-1, 1]")
    (ptab,) = legendre_table(L, schedule.n, np.clip(t, -1, 1))
    start = 0 if parity == "even" else 1
    val = np.zeros(t.size)
    for l in range(start, L + 1, 2):
        c = float(schedule.sigma(l)[0]) ** 2 * harmonics.addition_constant(l, schedule.n)
        val += c * ptab[l]
    if schedule.kind == "power_law":
        # crude geometric-style bound on the dropped degrees
        sig_next = float(schedule.sigma(L + 1)[0])
        d_next = harmonics.multiplicity(L + 1, schedule.n)
        tail = 2.0 * sig_next**2 * d_next / harmonics.sphere_area(schedule.n)
    elif schedule.kind == "unit":
        tail = math.inf
    else:
        tail = 0.0  # custom tables are complete up to L_max
    out_val = float(val[0]) if val.size == 1 else val
    return CovarianceValue(out_val, tail)
