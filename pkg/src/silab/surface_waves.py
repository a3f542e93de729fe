"""Massless 2+1D wave field with data on the timelike hyperplane x2 = 0.

Data are the field f(x1, t) and its transverse derivative g(x1, t) on a
doubly periodic (x1, t) grid.  Each Fourier mode exp(i(k1 x1 - w t)) evolves
in x2 under k2^2 = w^2 - k1^2: oscillatory where w^2 > k1^2, exponential
where w^2 < k1^2, linear on the light cone k2 = 0.  Restricting the data's
spectrum to one of the two cones is a constraint that couples the data at
arbitrarily separated surface points; the operations here make both the
stability consequences and the support-leakage consequences measurable.

Conventions: c = 1; arrays are indexed [i, j] for (x1_i, t_j); the frequency
label w is chosen so that coefficient [m, n] of numpy's fft2 multiplies
exp(i(k1[m] x1 - w[n] t)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORIENTATIONS = ("omega-dominant", "k-dominant")

_IMAG_TOL = 1e-12


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SurfaceGrid:
    """Doubly periodic grid on the data surface: n1 x nt samples covering
    periods l1 (in x1) and lt (in t)."""

    n1: int
    nt: int
    l1: float
    lt: float

    def __post_init__(self):
        for name, n in (("n1", self.n1), ("nt", self.nt)):
            if not (_is_pow2(n) and n >= 8):
                raise ValueError(f"{name} must be a power of two >= 8, got {n}")
        if not (self.l1 > 0 and self.lt > 0):
            raise ValueError("periods must be positive")

    @property
    def x1(self) -> np.ndarray:
        return np.arange(self.n1) * (self.l1 / self.n1)

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.nt) * (self.lt / self.nt)

    @property
    def k1(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n1, d=self.l1 / self.n1)

    @property
    def omega(self) -> np.ndarray:
        # Sign fixed by the exp(i(k1 x1 - w t)) basis convention.
        return -2.0 * np.pi * np.fft.fftfreq(self.nt, d=self.lt / self.nt)

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.k1, self.omega, indexing="ij")


@dataclass(frozen=True)
class SurfaceData:
    """Real samples of the field (f) and its x2-derivative (g) on the surface."""

    grid: SurfaceGrid
    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=np.float64)
        g = np.asarray(self.g, dtype=np.float64)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        shape = (self.grid.n1, self.grid.nt)
        if f.shape != shape or g.shape != shape:
            raise ValueError(f"fields must have shape {shape}")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
            raise ValueError("fields must be finite")


@dataclass(frozen=True)
class SpectralData:
    grid: SurfaceGrid
    ftilde: np.ndarray
    gtilde: np.ndarray


@dataclass(frozen=True)
class ConeMask:
    """Allowed-mode set in the (k1, w) plane.  omega-dominant allows
    |w| >= |k1| (the x2-oscillatory modes), k-dominant the complement cone."""

    allowed: np.ndarray
    orientation: str

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS + ("all-pass",):
            raise ValueError(f"unknown orientation {self.orientation!r}")


def cone_mask(grid: SurfaceGrid, orientation: str = "omega-dominant",
              strict: bool = False) -> ConeMask:
    """Build the allowed-mode mask; strict=True also drops the boundary
    (marginal, k2 = 0) modes shared by both cones."""
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    k1m, omm = grid.meshes()
    if orientation == "omega-dominant":
        allowed = omm**2 > k1m**2 if strict else omm**2 >= k1m**2
    else:
        allowed = k1m**2 > omm**2 if strict else k1m**2 >= omm**2
    return ConeMask(allowed=allowed, orientation=orientation)


def all_pass_mask(grid: SurfaceGrid) -> ConeMask:
    return ConeMask(allowed=np.ones((grid.n1, grid.nt), dtype=bool),
                    orientation="all-pass")


def mode_character(k1: float, omega: float) -> tuple[str, float]:
    """Classify the x2-behavior of mode exp(i(k1 x1 - w t)).

    Returns ("oscillatory", kappa) with kappa = sqrt(w^2 - k1^2), or
    ("exponential", rate) with rate = sqrt(k1^2 - w^2), or ("marginal", 0.0).
    """
    if not (np.isfinite(k1) and np.isfinite(omega)):
        raise ValueError("k1 and omega must be finite")
    k2sq = omega * omega - k1 * k1
    if k2sq > 0.0:
        return "oscillatory", float(np.sqrt(k2sq))
    if k2sq < 0.0:
        return "exponential", float(np.sqrt(-k2sq))
    return "marginal", 0.0


def to_spectral(data: SurfaceData) -> SpectralData:
    return SpectralData(data.grid, np.fft.fft2(data.f), np.fft.fft2(data.g))


def to_surface(spec: SpectralData) -> SurfaceData:
    f = _real_ifft2(spec.ftilde)
    g = _real_ifft2(spec.gtilde)
    return SurfaceData(spec.grid, f, g)


def _real_ifft2(coeffs: np.ndarray) -> np.ndarray:
    out = np.fft.ifft2(coeffs)
    scale = np.max(np.abs(out))
    if scale > 0 and np.max(np.abs(out.imag)) > _IMAG_TOL * scale:
        raise ValueError("inverse transform lost Hermitian symmetry")
    return np.ascontiguousarray(out.real)


def project_to_cone(data: SurfaceData, mask: ConeMask) -> SurfaceData:
    """Zero every Fourier coefficient outside the allowed cone.  Idempotent,
    and real data stay real (the mask is symmetric under (k1, w) -> (-k1, -w))."""
    spec = to_spectral(data)
    ft = np.where(mask.allowed, spec.ftilde, 0.0)
    gt = np.where(mask.allowed, spec.gtilde, 0.0)
    return to_surface(SpectralData(data.grid, ft, gt))


@dataclass(frozen=True)
class FieldSlice:
    """Field values phi(x1, t) on the surface grid at a fixed transverse x2."""

    grid: SurfaceGrid
    x2: float
    phi: np.ndarray


def _mirror(a: np.ndarray) -> np.ndarray:
    """a evaluated at the conjugate-partner indices (-i mod n, -j mod m)."""
    return np.roll(a[::-1, ::-1], (1, 1), axis=(0, 1))


def evolve_x2(data: SurfaceData, x2: float, mask: ConeMask | None = None,
              trunc_tol: float = 1e-12) -> FieldSlice:
    """Transverse evolution of surface data to offset x2, mode by mode.

    Oscillatory modes: ft*cos(kappa x2) + gt*sin(kappa x2)/kappa.  Marginal
    modes: ft + gt*x2.  Exponential modes: ft*cosh(r x2) + gt*sinh(r x2)/r.
    Constraint violation is not an error; disallowed modes simply grow.  If a
    mask is given the data are projected onto it first.

    Spectral coefficients below trunc_tol (relative to each field's largest
    coefficient) are zeroed first: the fastest exponential modes would
    otherwise amplify transform roundoff past the actual signal.  The cut is
    conjugate-symmetric, so real output stays real.
    """
    if mask is not None:
        data = project_to_cone(data, mask)
    spec = to_spectral(data)

    def truncate(c: np.ndarray) -> np.ndarray:
        peak = np.max(np.abs(c))
        if peak == 0.0 or trunc_tol <= 0.0:
            return c
        mag = np.abs(c)
        keep = np.maximum(mag, _mirror(mag)) >= trunc_tol * peak
        return np.where(keep, c, 0.0)

    ftilde = truncate(spec.ftilde)
    gtilde = truncate(spec.gtilde)
    k1m, omm = data.grid.meshes()
    k2sq = omm**2 - k1m**2

    osc = k2sq > 0.0
    expo = k2sq < 0.0
    kappa = np.sqrt(np.where(osc, k2sq, 1.0))
    rate = np.sqrt(np.where(expo, -k2sq, 1.0))

    mult_f = np.ones_like(k2sq)
    mult_g = np.full_like(k2sq, x2)
    mult_f[osc] = np.cos(kappa[osc] * x2)
    mult_g[osc] = np.sin(kappa[osc] * x2) / kappa[osc]
    mult_f[expo] = np.cosh(rate[expo] * x2)
    mult_g[expo] = np.sinh(rate[expo] * x2) / rate[expo]

    phi_hat = spec.ftilde * mult_f + spec.gtilde * mult_g
    return FieldSlice(data.grid, float(x2), _real_ifft2(phi_hat))


def rms(field: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(field))))


@dataclass(frozen=True)
class SpatialGrid:
    """Periodic spatial grid for the ordinary (spacelike) Cauchy problem."""

    n1: int
    n2: int
    l1: float
    l2: float

    def __post_init__(self):
        for name, n in (("n1", self.n1), ("n2", self.n2)):
            if not (_is_pow2(n) and n >= 8):
                raise ValueError(f"{name} must be a power of two >= 8, got {n}")
        if not (self.l1 > 0 and self.l2 > 0):
            raise ValueError("periods must be positive")

    @property
    def x1(self) -> np.ndarray:
        return np.arange(self.n1) * (self.l1 / self.n1)

    @property
    def x2(self) -> np.ndarray:
        return np.arange(self.n2) * (self.l2 / self.n2)

    def k_meshes(self) -> tuple[np.ndarray, np.ndarray]:
        k1 = 2.0 * np.pi * np.fft.fftfreq(self.n1, d=self.l1 / self.n1)
        k2 = 2.0 * np.pi * np.fft.fftfreq(self.n2, d=self.l2 / self.n2)
        return np.meshgrid(k1, k2, indexing="ij")


@dataclass(frozen=True)
class TimeSlice:
    """Field and velocity on the spatial grid at a fixed time."""

    grid: SpatialGrid
    t: float
    phi: np.ndarray
    phidot: np.ndarray


def evolve_t(phi0: np.ndarray, phidot0: np.ndarray, grid: SpatialGrid,
             t: float) -> TimeSlice:
    """Exact spectral time evolution of ordinary Cauchy data.

    Per mode with wavenumber k = |(k1, k2)|: phi_hat(t) = phi_hat0 cos(kt) +
    phidot_hat0 sin(kt)/k, with the k = 0 mode evolving linearly.
    """
    phi0 = np.asarray(phi0, dtype=np.float64)
    phidot0 = np.asarray(phidot0, dtype=np.float64)
    shape = (grid.n1, grid.n2)
    if phi0.shape != shape or phidot0.shape != shape:
        raise ValueError(f"fields must have shape {shape}")
    k1m, k2m = grid.k_meshes()
    k = np.sqrt(k1m**2 + k2m**2)
    zero = k == 0.0
    ksafe = np.where(zero, 1.0, k)

    ph = np.fft.fft2(phi0)
    pd = np.fft.fft2(phidot0)
    cos = np.cos(k * t)
    sinc = np.where(zero, t, np.sin(ksafe * t) / ksafe)
    phi_hat = ph * cos + pd * sinc
    phidot_hat = -ph * ksafe * np.where(zero, 0.0, np.sin(k * t)) + pd * np.where(zero, 1.0, cos)
    return TimeSlice(grid, float(t), _real_ifft2(phi_hat), _real_ifft2(phidot_hat))


def energy(phi: np.ndarray, phidot: np.ndarray, grid: SpatialGrid) -> float:
    """Discrete wave energy sum (phidot^2 + |grad phi|^2) * dA, with the
    gradient taken spectrally."""
    k1m, k2m = grid.k_meshes()
    ph = np.fft.fft2(np.asarray(phi, dtype=np.float64))
    d1 = _real_ifft2(1j * k1m * ph)
    d2 = _real_ifft2(1j * k2m * ph)
    da = (grid.l1 / grid.n1) * (grid.l2 / grid.n2)
    return float(np.sum(np.square(phidot) + np.square(d1) + np.square(d2)) * da)


@dataclass(frozen=True)
class Region:
    """Half-open index rectangle [i0, i1) x [j0, j1) on a surface grid."""

    i0: int
    i1: int
    j0: int
    j1: int

    def __post_init__(self):
        if not (self.i0 < self.i1 and self.j0 < self.j1):
            raise ValueError("region must be nonempty")
        if self.i0 < 0 or self.j0 < 0:
            raise ValueError("region indices must be nonnegative")

    def mask(self, shape: tuple[int, int]) -> np.ndarray:
        if self.i1 > shape[0] or self.j1 > shape[1]:
            raise ValueError(f"region {self} exceeds grid shape {shape}")
        m = np.zeros(shape, dtype=bool)
        m[self.i0 : self.i1, self.j0 : self.j1] = True
        return m


def tail_mass(data: SurfaceData, region: Region) -> float:
    """Largest |f| or |g| outside the region, relative to the peak inside."""
    inside = region.mask(data.f.shape)
    outside = ~inside
    peak_in = max(np.max(np.abs(data.f[inside])), np.max(np.abs(data.g[inside])))
    if not outside.any():
        return 0.0
    peak_out = max(np.max(np.abs(data.f[outside])), np.max(np.abs(data.g[outside])))
    if peak_in == 0.0:
        return 0.0 if peak_out == 0.0 else np.inf
    return float(peak_out / peak_in)


def raised_cosine_bump(grid: SurfaceGrid) -> tuple[SurfaceData, Region]:
    """The standard compact bump: a Hann window product supported on the
    central quarter of each axis, on f, with g = 0.  Returns (data, support)."""
    def hann(n: int) -> tuple[np.ndarray, int, int]:
        w = np.zeros(n)
        width = n // 4
        start = (n - width) // 2
        u = np.arange(width)
        w[start : start + width] = 0.5 * (1.0 - np.cos(2.0 * np.pi * (u + 0.5) / width))
        return w, start, width

    w1, s1, d1 = hann(grid.n1)
    wt, st, dt = hann(grid.nt)
    f = np.outer(w1, wt)
    data = SurfaceData(grid, f, np.zeros_like(f))
    return data, Region(s1, s1 + d1, st, st + dt)


def plane_wave_data(grid: SurfaceGrid, m: int, n: int, branch: str = "stable",
                    amplitude: float = 1.0) -> SurfaceData:
    """Single-mode surface data for grid mode (m, n), i.e. k1 = 2 pi m / l1
    and w = 2 pi n / lt.

    branch "stable" pairs f with the g that keeps the mode's rms amplitude
    constant in x2 where possible: the traveling branch for oscillatory
    modes, pure decay for exponential ones, g = 0 for marginal ones.
    branch "growing" pairs f with g = rate * f, the pure e^{rate x2} branch
    for exponential modes (and a bounded combination elsewhere).
    """
    if branch not in ("stable", "growing"):
        raise ValueError("branch must be 'stable' or 'growing'")
    k1 = 2.0 * np.pi * m / grid.l1
    w = 2.0 * np.pi * n / grid.lt
    kind, rate = mode_character(k1, w)
    x1 = grid.x1[:, None]
    t = grid.t[None, :]
    theta = k1 * x1 - w * t
    f = amplitude * np.cos(theta)
    if branch == "stable":
        if kind == "oscillatory":
            g = -amplitude * rate * np.sin(theta)  # phi = cos(k1 x1 + kappa x2 - w t)
        elif kind == "exponential":
            g = -rate * f  # pure e^{-rate x2}
        else:
            g = np.zeros_like(f)
    else:
        g = rate * f
    return SurfaceData(grid, f, g)


@dataclass(frozen=True)
class StabilityReport:
    """Amplitude behavior of one representative allowed and one representative
    disallowed mode under a cone orientation."""

    orientation: str
    allowed_mode: tuple[int, int]
    disallowed_mode: tuple[int, int]
    x2_values: np.ndarray
    allowed_amplitude: np.ndarray      # rms ratios vs x2
    disallowed_amplitude: np.ndarray   # rms ratios vs x2
    constant_ok: bool
    growth_ok: bool
    growth_rate: float

    @property
    def passed(self) -> bool:
        return self.constant_ok and self.growth_ok


def stability_report(grid: SurfaceGrid, orientation: str,
                     x2_values: np.ndarray | None = None,
                     constant_tol: float = 1e-6,
                     growth_tol: float = 0.01,
                     growth_at: float = 5.0) -> StabilityReport:
    """Amplitude dichotomy check for one cone orientation.

    An orientation is vindicated when a mode inside its cone keeps constant
    rms amplitude across x2 in [0, 10] and the representative mode outside it
    (k1 or w equal to the fundamental, the other zero) grows like
    e^{rate x2}.  Exactly one orientation can win, because (k1, w) = (f, 0)
    and (0, f) swap roles between the cones.
    """
    if x2_values is None:
        x2_values = np.linspace(0.0, 10.0, 21)
    if orientation == "omega-dominant":
        allowed_mode, disallowed_mode = (0, 1), (1, 0)
    elif orientation == "k-dominant":
        allowed_mode, disallowed_mode = (1, 0), (0, 1)
    else:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")

    def amp_curve(data: SurfaceData) -> np.ndarray:
        base = rms(data.f)
        return np.array([rms(evolve_x2(data, x2).phi) / base for x2 in x2_values])

    allowed_amp = amp_curve(plane_wave_data(grid, *allowed_mode, branch="stable"))
    grow_data = plane_wave_data(grid, *disallowed_mode, branch="growing")
    disallowed_amp = amp_curve(grow_data)

    constant_ok = bool(np.max(np.abs(allowed_amp - 1.0)) <= constant_tol)
    k1 = 2.0 * np.pi * disallowed_mode[0] / grid.l1
    w = 2.0 * np.pi * disallowed_mode[1] / grid.lt
    _, rate = mode_character(k1, w)
    measured = rms(evolve_x2(grow_data, growth_at).phi) / rms(grow_data.f)
    target = np.exp(rate * growth_at)
    growth_ok = bool(abs(measured - target) <= growth_tol * target) and rate > 0.0
    return StabilityReport(orientation, allowed_mode, disallowed_mode,
                           np.asarray(x2_values, dtype=np.float64),
                           allowed_amp, disallowed_amp, constant_ok, growth_ok,
                           float(rate))


@dataclass(frozen=True)
class SiFieldReport:
    """Ensemble statistics for the field analogue of setting independence:
    does conditioning on near-zero data in regions A and B change the spread
    of the mean field in region L?"""

    variance_unconditional: float
    variance_conditional: float
    ratio: float
    n_samples: int
    n_selected: int
    seed: int
    quantile: float


def si_field_analogue(grid: SurfaceGrid, region_a: Region, region_b: Region,
                      region_lambda: Region, mask: ConeMask | None,
                      n_samples: int = 400, seed: int = 0,
                      quantile: float = 0.25) -> SiFieldReport:
    """Monte Carlo estimate of region-to-region dependence induced by the
    cone constraint.

    Draws white-noise surface data, optionally projects onto the mask, and
    compares the variance of the mean field over region_lambda across the
    whole ensemble with its variance over the sub-ensemble whose data are
    smallest (bottom ``quantile`` in rms) on regions A and B.  For
    unconstrained white noise the two agree; for cone-constrained fields
    they do not.
    """
    if n_samples < 100:
        raise ValueError("ensemble too small: need at least 100 samples")
    shape = (grid.n1, grid.nt)
    mask_a = region_a.mask(shape)
    mask_b = region_b.mask(shape)
    mask_l = region_lambda.mask(shape)
    if np.any(mask_a & mask_b):
        raise ValueError("regions A and B must be disjoint")

    rng = np.random.default_rng(seed)
    stat = np.empty(n_samples)
    cond = np.empty(n_samples)
    for s in range(n_samples):
        f = rng.standard_normal(shape)
        g = rng.standard_normal(shape)
        data = SurfaceData(grid, f, g)
        if mask is not None and not np.all(mask.allowed):
            data = project_to_cone(data, mask)
        stat[s] = np.mean(data.f[mask_l])
        rms_a = np.sqrt(np.mean(np.square(data.f[mask_a])) + np.mean(np.square(data.g[mask_a])))
        rms_b = np.sqrt(np.mean(np.square(data.f[mask_b])) + np.mean(np.square(data.g[mask_b])))
        cond[s] = max(rms_a, rms_b)

    threshold = np.quantile(cond, quantile)
    sel = cond <= threshold
    var_all = float(np.var(stat, ddof=1))
    var_sel = float(np.var(stat[sel], ddof=1))
    ratio = var_sel / var_all if var_all > 0 else np.nan
    return SiFieldReport(var_all, var_sel, ratio, n_samples, int(sel.sum()),
                         seed, quantile)
