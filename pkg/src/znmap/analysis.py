"""Orbit iteration, periodic-orbit refinement, and dynamic property checks.

Everything is pure given its inputs.  Sampling uses a seeded generator
(default seed 0x5EED) so reports are reproducible; batch classification is
elementwise-deterministic, so grids may be partitioned arbitrarily.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, Point, from_polar, rotate, to_polar
from .maps import MapSpec, eval_map, jac_map, step_batch

DEFAULT_SEED = 0x5EED

CONVERGED = "converged"
ESCAPED = "escaped"
UNDECIDED = "undecided"


@dataclass
class Orbit:
    spec: object
    start: Point
    points: list
    escaped: bool = False  # truncated due to coordinate overflow


@dataclass
class ConvergenceVerdict:
    kind: str  # converged | escaped | undecided
    steps: int | None
    budget: int
    eps_in: float
    r_escape: float


@dataclass
class PeriodicOrbit:
    point: Point
    period: int
    orbit: list
    multipliers: tuple
    residual: float
    minimal: bool


@dataclass
class SpectralSample:
    max_modulus: float
    argmax: Point
    samples: int
    region: tuple


def seeded_points(samples: int, radius: float, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Deterministic pseudo-random points, uniform on the disk |p| <= radius."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(samples))
    th = TWO_PI * rng.random(samples)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def iterate(spec, p0: Point, num_steps: int) -> Orbit:
    """Record p0 and its first num_steps forward images.

    Stops early (flagging the orbit escaped) if coordinates overflow.
    """
    if num_steps < 0:
        raise ValueError("step count must be nonnegative")
    points = [(float(p0[0]), float(p0[1]))]
    escaped = False
    p = points[0]
    for _ in range(num_steps):
        p = eval_map(spec, p)
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            escaped = True
            break
        points.append(p)
    return Orbit(spec=spec, start=points[0], points=points, escaped=escaped)


def classify_batch(spec: MapSpec, xs, ys, budget: int = 10_000,
                   eps_in: float = 1e-8, r_escape: float = 1e6):
    """Classify many starts at once: 1 = converged, 2 = escaped, 0 = undecided.

    Returns (kinds, steps) arrays; steps is -1 for undecided entries.
    Thresholds are tested before each step, so a start already inside
    eps_in classifies at step 0.
    """
    if not eps_in < r_escape:
        raise ValueError("eps_in must be below r_escape")
    x = np.asarray(xs, dtype=float).copy()
    y = np.asarray(ys, dtype=float).copy()
    npts = x.size
    kinds = np.zeros(npts, dtype=np.uint8)
    steps = np.full(npts, -1, dtype=np.int64)
    idx = np.arange(npts)
    eps2 = eps_in * eps_in
    esc2 = r_escape * r_escape
    for t in range(budget + 1):
        r2 = x * x + y * y
        conv = r2 < eps2
        esc = (r2 > esc2) | ~np.isfinite(r2)
        done = conv | esc
        if done.any():
            kinds[idx[conv]] = 1
            kinds[idx[esc]] = 2
            steps[idx[done]] = t
            keep = ~done
            x, y, idx = x[keep], y[keep], idx[keep]
        if idx.size == 0 or t == budget:
            break
        x, y = step_batch(spec, x, y)
    return kinds, steps


_KIND_NAMES = {0: UNDECIDED, 1: CONVERGED, 2: ESCAPED}


def classify_orbit(spec, p0: Point, budget: int = 10_000,
                   eps_in: float = 1e-8, r_escape: float = 1e6) -> ConvergenceVerdict:
    """Classify a single start; see classify_batch for the semantics."""
    if callable(spec):
        if not eps_in < r_escape:
            raise ValueError("eps_in must be below r_escape")
        p = (float(p0[0]), float(p0[1]))
        for t in range(budget + 1):
            r = math.hypot(*p)
            if r < eps_in:
                return ConvergenceVerdict(CONVERGED, t, budget, eps_in, r_escape)
            if r > r_escape or not math.isfinite(r):
                return ConvergenceVerdict(ESCAPED, t, budget, eps_in, r_escape)
            if t == budget:
                break
            p = eval_map(spec, p)
        return ConvergenceVerdict(UNDECIDED, None, budget, eps_in, r_escape)
    kinds, steps = classify_batch(spec, [p0[0]], [p0[1]], budget, eps_in, r_escape)
    kind = _KIND_NAMES[int(kinds[0])]
    return ConvergenceVerdict(kind, int(steps[0]) if kind != UNDECIDED else None,
                              budget, eps_in, r_escape)


def _compose(spec, p: Point, q: int) -> Point:
    for _ in range(q):
        p = eval_map(spec, p)
    return p


def _solve2(jac: np.ndarray, rhs) -> tuple[float, float]:
    # the Jacobian comes from finite differences (noise ~1e-9 relative), so
    # "not invertible within tolerance" means conditioning worse than ~1e6
    # or a derivative of f^q - id that vanishes to noise level
    det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    scale = float(np.abs(jac).max())
    if not (math.isfinite(det) and scale > 1e-8 and abs(det) > 1e-6 * scale * scale):
        raise RuntimeError("singular Newton system")
    u = (jac[1, 1] * rhs[0] - jac[0, 1] * rhs[1]) / det
    v = (-jac[1, 0] * rhs[0] + jac[0, 0] * rhs[1]) / det
    return u, v


def find_periodic(spec, guess: Point, period: int, tol: float = 1e-12,
                  max_iter: int = 50) -> PeriodicOrbit:
    """Newton-refine a periodic point of the given period.

    Newton runs on f^period(p) - p with a finite-difference Jacobian of the
    composite (works across sector charts); multipliers come from chaining
    the per-point Jacobians along the refined orbit.  Minimality is probed
    on every proper divisor with threshold 10*tol and reported as a flag.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    p = (float(guess[0]), float(guess[1]))
    residual = math.inf
    for _ in range(max_iter):
        fp = _compose(spec, p, period)
        gx, gy = fp[0] - p[0], fp[1] - p[1]
        residual = math.hypot(gx, gy)
        if residual <= tol:
            break
        h = 1e-7 * (1.0 + math.hypot(*p))
        cols = []
        for dx, dy in ((h, 0.0), (0.0, h)):
            fp_p = _compose(spec, (p[0] + dx, p[1] + dy), period)
            fp_m = _compose(spec, (p[0] - dx, p[1] - dy), period)
            cols.append(((fp_p[0] - fp_m[0]) / (2 * h), (fp_p[1] - fp_m[1]) / (2 * h)))
        jac = np.array([[cols[0][0] - 1.0, cols[1][0]],
                        [cols[0][1], cols[1][1] - 1.0]])
        du, dv = _solve2(jac, (gx, gy))
        p = (p[0] - du, p[1] - dv)
    else:
        raise RuntimeError(f"no convergence after {max_iter} Newton iterations "
                           f"(residual {residual:.3e})")

    orbit = [p]
    for _ in range(period - 1):
        orbit.append(eval_map(spec, orbit[-1]))
    prod = np.eye(2)
    for pt in orbit:
        prod = jac_map(spec, pt) @ prod
    mults = tuple(np.linalg.eigvals(prod))

    minimal = True
    for d in range(1, period):
        if period % d == 0:
            fd = _compose(spec, p, d)
            if math.hypot(fd[0] - p[0], fd[1] - p[1]) <= 10.0 * tol:
                minimal = False
                break
    fp = _compose(spec, p, period)
    residual = math.hypot(fp[0] - p[0], fp[1] - p[1])
    return PeriodicOrbit(point=p, period=period, orbit=orbit,
                         multipliers=mults, residual=residual, minimal=minimal)


def equivariance_residual(spec, n: int, samples: int = 10_000, radius: float = 10.0,
                          seed: int = DEFAULT_SEED, normalized: bool = False) -> float:
    """Max |f(R p) - R f(p)| over seeded points, probing order-n symmetry.

    With normalized=True each residual is divided by (1 + |p|^3) before
    taking the max.
    """
    pts = seeded_points(samples, radius, seed)
    worst = 0.0
    for px, py in pts:
        rp = rotate((px, py), 1, n)
        f_rp = eval_map(spec, rp)
        r_fp = rotate(eval_map(spec, (px, py)), 1, n)
        res = math.hypot(f_rp[0] - r_fp[0], f_rp[1] - r_fp[1])
        if normalized:
            res /= 1.0 + math.hypot(px, py) ** 3
        worst = max(worst, res)
    return worst


def ray_image_check(spec, directions: int = 64, radii=None,
                    spread_tol: float = 1e-10) -> dict:
    """Check that each ray through the origin maps into a single ray with
    strictly increasing image radius."""
    if radii is None:
        radii = [0.25 * 2 ** i for i in range(7)]  # 0.25 .. 16
    max_spread = 0.0
    monotone = True
    for i in range(directions):
        th = TWO_PI * i / directions
        vx, vy = math.cos(th), math.sin(th)
        angles = []
        rads = []
        for t in radii:
            img = eval_map(spec, (t * vx, t * vy))
            r_im, a_im = to_polar(img)
            angles.append(a_im)
            rads.append(r_im)
        base = angles[0]
        spread = max(abs(math.remainder(a - base, TWO_PI)) for a in angles)
        max_spread = max(max_spread, spread)
        if any(rads[j + 1] <= rads[j] for j in range(len(rads) - 1)):
            monotone = False
    return {
        "max_angle_spread": max_spread,
        "radii_increasing": monotone,
        "passed": monotone and max_spread <= spread_tol,
    }


def sector_map_check(spec, n: int, samples: int = 200, seed: int = DEFAULT_SEED,
                     boundary_tol: float = 1e-10) -> dict:
    """Check that sector j maps into sector j+1 and boundary rays onto
    boundary rays (image angle 2*pi*j/n within boundary_tol)."""
    rng = np.random.default_rng(seed)
    interior_bad = 0
    for j in range(1, n + 1):
        lo = TWO_PI * (j - 1) / n
        for _ in range(samples):
            th = lo + TWO_PI / n * (0.01 + 0.98 * rng.random())
            r = 0.1 + 5.0 * rng.random()
            img = eval_map(spec, from_polar((r, th)))
            a_im = to_polar(img)[1]
            target_lo = TWO_PI * (j % n) / n
            gap = math.remainder(a_im - target_lo, TWO_PI)
            if not (-boundary_tol <= gap <= TWO_PI / n + boundary_tol):
                interior_bad += 1
    boundary_err = 0.0
    for j in range(1, n + 1):
        for r in (0.5, 1.0, 2.0, 5.0):
            p = from_polar((r, TWO_PI * (j - 1) / n))
            a_im = to_polar(eval_map(spec, p))[1]
            gap = abs(math.remainder(a_im - TWO_PI * (j % n) / n, TWO_PI))
            boundary_err = max(boundary_err, gap)
    return {
        "interior_violations": interior_bad,
        "boundary_angle_error": boundary_err,
        "passed": interior_bad == 0 and boundary_err <= boundary_tol,
    }


def _one_sided_jacobian(fun, xi: Point, e_r, e_t, sign: float, h: float,
                        order: int = 1) -> np.ndarray:
    """Jacobian estimate from one side of a boundary ray.

    Directional differences along the ray direction (values there are
    shared by both sector charts) and along +/-e_t into the chosen side;
    order 1 uses plain forward quotients, order 2 the one-sided stencil
    (-3 f0 + 4 f(h) - f(2h)) / (2h).
    """
    def deriv(d):
        f0 = fun(xi)
        f1 = fun((xi[0] + h * d[0], xi[1] + h * d[1]))
        if order == 1:
            return ((f1[0] - f0[0]) / h, (f1[1] - f0[1]) / h)
        f2 = fun((xi[0] + 2.0 * h * d[0], xi[1] + 2.0 * h * d[1]))
        return ((-3.0 * f0[0] + 4.0 * f1[0] - f2[0]) / (2.0 * h),
                (-3.0 * f0[1] + 4.0 * f1[1] - f2[1]) / (2.0 * h))

    col_r = deriv(e_r)
    g_t = deriv((sign * e_t[0], sign * e_t[1]))
    col_t = (sign * g_t[0], sign * g_t[1])
    dirs = np.array([[e_r[0], e_t[0]], [e_r[1], e_t[1]]])
    diffs = np.array([[col_r[0], col_t[0]], [col_r[1], col_t[1]]])
    return diffs @ dirs.T  # dirs is orthonormal


def boundary_smoothness_check(k: float, n: int, r: float,
                              h_sequence=(1e-3, 1e-4, 1e-5, 1e-6)) -> dict:
    """Compare one-sided Jacobians of the order-n map across a sector
    boundary ray, and probe differentiability at the origin.

    The plain one-sided quotients expose the O(h) convergence of the two
    sides to a common matrix (strictly decreasing mismatch across
    h_sequence); their bias constant depends on the one-sided second
    derivatives, so the final discrepancy at the smallest h is measured
    with the unbiased second-order stencil and must end below
    1e-6*(1+r^2).  The origin ratio sup|f(p)|/|p| on circles |p| = h
    vanishes like h^2.
    """
    from .maps import eval_fn

    phi = TWO_PI / n
    xi = from_polar((r, phi))
    e_r = (math.cos(phi), math.sin(phi))
    e_t = (-math.sin(phi), math.cos(phi))
    fun = lambda p: eval_fn(p, k, n)

    def mismatch(h, order):
        j_hi = _one_sided_jacobian(fun, xi, e_r, e_t, +1.0, h, order)
        j_lo = _one_sided_jacobian(fun, xi, e_r, e_t, -1.0, h, order)
        return float(np.abs(j_hi - j_lo).max())

    mismatches = [mismatch(h, order=1) for h in h_sequence]
    final = mismatch(h_sequence[-1], order=2)
    origin_ratios = []
    for h in h_sequence:
        sup = 0.0
        for i in range(64):
            th = TWO_PI * i / 64
            img = eval_fn(from_polar((h, th)), k, n)
            sup = max(sup, math.hypot(*img) / h)
        origin_ratios.append(sup)
    decreasing = all(mismatches[i + 1] < mismatches[i] for i in range(len(mismatches) - 1))
    tol = 1e-6 * (1.0 + r * r)
    return {
        "h_sequence": list(h_sequence),
        "mismatches": mismatches,
        "origin_ratios": origin_ratios,
        "decreasing": decreasing,
        "final_mismatch": final,
        "tolerance": tol,
        "passed": decreasing and final <= tol and origin_ratios[-1] < 1e-3,
    }


def _eig_max_modulus(a, b, c, d):
    """Elementwise max eigenvalue modulus of [[a, b], [c, d]] arrays."""
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4.0 * det
    real = 0.5 * (np.abs(tr) + np.sqrt(np.maximum(disc, 0.0)))
    cplx = np.sqrt(np.maximum(det, 0.0))  # conjugate pair: |mu|^2 = det
    return np.where(disc >= 0.0, real, cplx)


def _jac_f4_parts(x, y, k):
    x2 = x * x
    y2 = y * y
    d2 = (1.0 + x2 + y2) ** 2
    a = 2.0 * k * x * y * y2 / d2
    b = -k * (3.0 * y2 + 3.0 * x2 * y2 + y2 * y2) / d2
    c = k * (3.0 * x2 + x2 * x2 + 3.0 * x2 * y2) / d2
    d = -2.0 * k * x * x2 * y / d2
    return a, b, c, d


def spectral_scan(spec, region: tuple, grid: int | tuple) -> SpectralSample:
    """Max Jacobian eigenvalue modulus over an inclusive rectangular grid.

    Vectorized for f4/g4; other families fall back to per-point Jacobians.
    Deterministic, and the max-reduction is order-independent.
    """
    xmin, xmax, ymin, ymax = region
    nx, ny = (grid, grid) if isinstance(grid, int) else grid
    if nx < 2 or ny < 2:
        raise ValueError("grid must be at least 2x2")
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    if not callable(spec) and spec.family in ("f4", "g4"):
        gx, gy = np.meshgrid(xs, ys)
        a, b, c, d = _jac_f4_parts(gx, gy, spec.k)
        if spec.family == "g4":
            w = spec.beta + spec.delta * (gx * gx + gy * gy)
            a = a + spec.alpha - 2.0 * spec.delta * gx * gy
            b = b - w - 2.0 * spec.delta * gy * gy
            c = c + w + 2.0 * spec.delta * gx * gx
            d = d + spec.alpha + 2.0 * spec.delta * gx * gy
        mods = _eig_max_modulus(a, b, c, d)
        flat = int(np.argmax(mods))
        iy, ix = np.unravel_index(flat, mods.shape)
        return SpectralSample(max_modulus=float(mods[iy, ix]),
                              argmax=(float(gx[iy, ix]), float(gy[iy, ix])),
                              samples=nx * ny, region=tuple(region))
    best = -1.0
    arg = (xs[0], ys[0])
    for yv in ys:
        for xv in xs:
            jac = jac_map(spec, (xv, yv))
            mods = np.abs(np.linalg.eigvals(jac))
            m = float(mods.max())
            if m > best:
                best = m
                arg = (float(xv), float(yv))
    return SpectralSample(max_modulus=best, argmax=arg, samples=nx * ny,
                          region=tuple(region))


def properness_check(k: float, beta: float, radii=(2.0, 10.0, 100.0),
                     theta_samples: int = 360) -> dict:
    """Lower bound |g| >= (k/4)*r on circles r > 1 for the beta deformation."""
    from .maps import eval_g4

    rows = []
    passed = True
    for r in radii:
        if r <= 1.0:
            raise ValueError("radii must exceed 1")
        lo = math.inf
        for i in range(theta_samples):
            th = TWO_PI * i / theta_samples
            img = eval_g4(from_polar((r, th)), k, 0.0, beta, 0.0)
            lo = min(lo, math.hypot(*img))
        bound = 0.25 * k * r
        ok = lo >= bound
        passed = passed and ok
        rows.append({"r": r, "min_image_radius": lo, "bound": bound, "passed": ok})
    return {"rows": rows, "passed": passed}
