"""Map families built around the quartic rational plane map.

Families (all fix the origin):

* ``f4`` -- the quartic rational map
  ``(x, y) -> (-k*y^3, k*x^3) / (1 + x^2 + y^2)`` for ``1 < k < 2/sqrt(3)``;
  order-4 rotation symmetry, the origin is a local attractor, and the point
  ``P = ((k-1)^(-1/2), 0)`` lies on an orbit of period 4.
* ``g4`` -- its three-parameter deformation
  ``f4 + alpha*(x, y) + (beta + delta*(x^2+y^2))*(-y, x)``.
* ``fn`` -- the order-n transplant of ``f4``: conjugate by the
  norm-preserving angular rescale on one sector and extend equivariantly.
* ``h`` / ``hn`` -- radially saturated variants that keep the dynamics near
  the origin and periodic orbit but pull far points inward, so infinity
  repels.

Evaluators take ``(x, y)`` tuples; Jacobians are 2x2 numpy arrays
``[[a, b], [c, d]]``.  ``step_batch`` evaluates one step on coordinate
arrays for raster/scan workloads.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TWO_PI, Point, from_polar, sector_of, to_polar

K_MIN = 1.0
K_MAX = 2.0 / math.sqrt(3.0)

FAMILIES = ("f4", "g4", "fn", "h", "hn")


def validate_k(k: float) -> None:
    if not (K_MIN < k < K_MAX):
        raise ValueError(f"k must lie in (1, 2/sqrt(3)) ~ (1, {K_MAX:.8f}); got {k}")


def _cube(v: float) -> float:
    # explicit product keeps (-v)^3 == -(v^3) bitwise, which the exact
    # quarter-turn dispatch relies on
    return v * v * v


@dataclass(frozen=True)
class RadialProfile:
    """Saturating radial response u: identity up to r0, damped growth beyond.

    u(s) = s                                        for s <= r0
    u(s) = r0 + w/2 + r_half*(1 - exp(-w/r_half))/2  for s = r0 + w, w > 0

    C1 (both one-sided slopes at r0 equal 1), strictly increasing,
    unbounded, and u(s) < s for every s > r0.
    """

    r0: float
    r_half: float

    def __post_init__(self):
        if not (self.r0 > 0.0 and self.r_half > 0.0):
            raise ValueError("profile radii must be positive")


def default_profile(k: float) -> RadialProfile:
    r0 = 2.0 / math.sqrt(k - 1.0)
    return RadialProfile(r0, r0)


def radial_u(s: float, prof: RadialProfile) -> float:
    """Evaluate the saturating radial response at s >= 0."""
    if s < 0.0:
        raise ValueError("radial response undefined for negative radius")
    if s <= prof.r0:
        return s
    w = s - prof.r0
    return prof.r0 + 0.5 * w + 0.5 * prof.r_half * (-math.expm1(-w / prof.r_half))


@dataclass(frozen=True)
class MapSpec:
    """Immutable handle naming one map: family plus its parameters.

    ``n`` is the rotation-symmetry order (fixed at 4 for f4/g4/h).  The
    deformation parameters alpha/beta/delta apply only to g4; the radial
    profile only to h/hn (defaulting to r0 = r_half = 2/sqrt(k-1), which
    keeps the saturated map identical to the base map on a neighbourhood
    of the periodic orbit).
    """

    family: str
    k: float = 1.1
    n: int = 4
    alpha: float = 0.0
    beta: float = 0.0
    delta: float = 0.0
    profile: RadialProfile | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        validate_k(self.k)
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"symmetry order must be an integer >= 2, got {self.n!r}")
        if self.family in ("f4", "g4", "h") and self.n != 4:
            raise ValueError(f"family {self.family!r} has symmetry order 4, got n={self.n}")
        if self.family != "g4" and (self.alpha or self.beta or self.delta):
            raise ValueError("alpha/beta/delta apply to the g4 family only")
        if self.family in ("h", "hn"):
            prof = self.profile if self.profile is not None else default_profile(self.k)
            if prof.r0 <= 1.0 / math.sqrt(self.k - 1.0):
                raise ValueError("profile must keep r0 above the periodic-orbit radius")
            object.__setattr__(self, "profile", prof)
        elif self.profile is not None:
            raise ValueError("radial profile applies to the h/hn families only")


# ---------------------------------------------------------------------------
# scalar evaluation
# ---------------------------------------------------------------------------

def eval_f4(p: Point, k: float) -> Point:
    x, y = p
    d = 1.0 + (x * x + y * y)
    return -k * _cube(y) / d, k * _cube(x) / d


def eval_f4_polar(q: tuple[float, float], k: float) -> tuple[float, float]:
    """Polar form: radius k*r^3/(1+r^2)*sqrt(cos^6 + sin^6), image angle of
    (-sin^3, cos^3).  Agrees with the Cartesian evaluator through the
    polar/Cartesian conversions."""
    r, theta = q
    if r == 0.0:
        return 0.0, 0.0
    c3 = _cube(math.cos(theta))
    s3 = _cube(math.sin(theta))
    psi = k * _cube(r) / (1.0 + r * r) * math.hypot(c3, s3)
    phi = math.atan2(c3, -s3)
    if phi < 0.0:
        phi += TWO_PI
    if phi >= TWO_PI:
        phi = 0.0
    return psi, phi


def jac_f4(p: Point, k: float) -> np.ndarray:
    x, y = p
    x2 = x * x
    y2 = y * y
    d2 = (1.0 + x2 + y2) ** 2
    a = 2.0 * k * x * _cube(y) / d2
    b = -k * (3.0 * y2 + 3.0 * x2 * y2 + y2 * y2) / d2
    c = k * (3.0 * x2 + x2 * x2 + 3.0 * x2 * y2) / d2
    d = -2.0 * k * _cube(x) * y / d2
    return np.array([[a, b], [c, d]])


def jac_f4_polar(q: tuple[float, float], k: float) -> np.ndarray:
    """Derivative in polar charts (source and target): upper triangular,
    with angle derivative 3*sin^2*cos^2/(cos^6+sin^6)."""
    r, theta = q
    if r == 0.0:
        raise ValueError("polar chart singular at origin")
    c = math.cos(theta)
    s = math.sin(theta)
    c3 = _cube(c)
    s3 = _cube(s)
    m = math.hypot(c3, s3)  # sqrt(cos^6 + sin^6) >= 1/2
    r2 = r * r
    a11 = k * r2 * (3.0 + r2) / (1.0 + r2) ** 2 * m
    a12 = k * _cube(r) / (1.0 + r2) * 3.0 * s * c * (s3 * s - c3 * c) / m
    a22 = 3.0 * s * s * c * c / (m * m)
    return np.array([[a11, a12], [0.0, a22]])


def eval_g4(p: Point, k: float, alpha: float, beta: float, delta: float) -> Point:
    x, y = p
    f1, f2 = eval_f4(p, k)
    w = beta + delta * (x * x + y * y)
    return f1 + alpha * x - w * y, f2 + alpha * y + w * x


def jac_g4(p: Point, k: float, alpha: float, beta: float, delta: float) -> np.ndarray:
    x, y = p
    w = beta + delta * (x * x + y * y)
    jac = jac_f4(p, k)
    jac[0, 0] += alpha - 2.0 * delta * x * y
    jac[0, 1] += -w - 2.0 * delta * y * y
    jac[1, 0] += w + 2.0 * delta * x * x
    jac[1, 1] += alpha + 2.0 * delta * x * y
    return jac


def _dispatch_polar(p: Point, n: int, radius_map) -> Point:
    """Shared sector dispatcher for the order-n transplants.

    Composes rotate(-m) -> angular rescale -> base map -> rescale back ->
    rotate(+m) in angle space, so a boundary point whose local angle rounds
    to -ulp is never re-wrapped to 2*pi (which the n/4 rescale would blow
    up into a genuine jump).
    """
    x, y = p
    if x == 0.0 and y == 0.0:
        return 0.0, 0.0
    r, theta = to_polar(p)
    m = sector_of(p, n) - 1
    theta4 = (theta - TWO_PI * m / n) * n / 4.0
    psi, phi = radius_map(r, theta4)
    theta_out = 4.0 * phi / n + TWO_PI * m / n
    return from_polar((psi, theta_out))


def eval_fn(p: Point, k: float, n: int) -> Point:
    """Sector dispatcher transplanting the base map to order-n symmetry.

    For n = 4 the rescales are identities and the quarter-turn rotations
    exact, so the evaluation reduces to eval_f4 (bitwise).
    """
    if n == 4:
        x, y = p
        if x == 0.0 and y == 0.0:
            return 0.0, 0.0
        return eval_f4(p, k)
    return _dispatch_polar(p, n, lambda r, th: eval_f4_polar((r, th), k))


def jac_fn(p: Point, k: float, n: int) -> np.ndarray:
    """Cartesian Jacobian of eval_fn via the polar chain rule.

    The angular rescales contribute the constant diagonal factors
    diag(1, 4/n) and diag(1, n/4) around the polar-chart derivative of the
    base map; the result is conjugated back to Cartesian charts.  At the
    origin the derivative is the zero matrix.
    """
    x, y = p
    if x == 0.0 and y == 0.0:
        return np.zeros((2, 2))
    r, theta = to_polar(p)
    m = sector_of(p, n) - 1
    theta4 = (theta - TWO_PI * m / n) * n / 4.0
    inner = jac_f4_polar((r, theta4), k)
    a_n = np.array([[1.0, 0.0], [0.0, 4.0 / n]])
    b_n = np.array([[1.0, 0.0], [0.0, n / 4.0]])
    d_polar = a_n @ inner @ b_n
    psi, phi = eval_f4_polar((r, theta4), k)
    theta_out = 4.0 * phi / n + TWO_PI * m / n
    ci, si = math.cos(theta), math.sin(theta)
    co, so = math.cos(theta_out), math.sin(theta_out)
    chart_in_inv = np.array([[ci, si], [-si / r, ci / r]])
    chart_out = np.array([[co, -psi * so], [so, psi * co]])
    return chart_out @ d_polar @ chart_in_inv


def eval_h(p: Point, k: float, prof: RadialProfile) -> Point:
    w1, w2 = eval_f4(p, k)
    s = math.hypot(w1, w2)
    if s <= prof.r0:  # identity branch, exact
        return w1, w2
    scale = radial_u(s, prof) / s
    return scale * w1, scale * w2


def eval_hn(p: Point, k: float, n: int, prof: RadialProfile) -> Point:
    if n == 4:
        x, y = p
        if x == 0.0 and y == 0.0:
            return 0.0, 0.0
        return eval_h(p, k, prof)

    def saturated(r, th):
        psi, phi = eval_f4_polar((r, th), k)
        return radial_u(psi, prof), phi

    return _dispatch_polar(p, n, saturated)


def eval_map(spec, p: Point) -> Point:
    """Evaluate one step of the map named by spec (or any callable)."""
    if callable(spec):
        return spec(p)
    if spec.family == "f4":
        return eval_f4(p, spec.k)
    if spec.family == "g4":
        return eval_g4(p, spec.k, spec.alpha, spec.beta, spec.delta)
    if spec.family == "fn":
        return eval_fn(p, spec.k, spec.n)
    if spec.family == "h":
        return eval_h(p, spec.k, spec.profile)
    return eval_hn(p, spec.k, spec.n, spec.profile)


def _jac_fd(fun, p: Point, h: float) -> np.ndarray:
    x, y = p
    fxp = fun((x + h, y))
    fxm = fun((x - h, y))
    fyp = fun((x, y + h))
    fym = fun((x, y - h))
    inv = 0.5 / h
    return np.array([
        [(fxp[0] - fxm[0]) * inv, (fyp[0] - fym[0]) * inv],
        [(fxp[1] - fxm[1]) * inv, (fyp[1] - fym[1]) * inv],
    ])


def jac_map(spec, p: Point) -> np.ndarray:
    """Jacobian of the map named by spec: analytic for f4/g4/fn, central
    finite differences for h/hn and callables."""
    if callable(spec):
        return _jac_fd(spec, p, 1e-7 * (1.0 + math.hypot(*p)))
    if spec.family == "f4":
        return jac_f4(p, spec.k)
    if spec.family == "g4":
        return jac_g4(p, spec.k, spec.alpha, spec.beta, spec.delta)
    if spec.family == "fn":
        return jac_fn(p, spec.k, spec.n)
    fun = lambda q: eval_map(spec, q)
    return _jac_fd(fun, p, 1e-7 * (1.0 + math.hypot(*p)))


# ---------------------------------------------------------------------------
# vectorized stepping (rasters, orbit-batch classification, spectral scans)
# ---------------------------------------------------------------------------

def _radial_u_arr(s: np.ndarray, prof: RadialProfile) -> np.ndarray:
    w = s - prof.r0
    tail = prof.r0 + 0.5 * w + 0.5 * prof.r_half * (-np.expm1(-w / prof.r_half))
    return np.where(s <= prof.r0, s, tail)


def step_batch(spec: MapSpec, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One map step applied elementwise to coordinate arrays.

    Elementwise-deterministic: results do not depend on how the arrays are
    partitioned, so raster work can be split arbitrarily.
    """
    k = spec.k
    if spec.family in ("f4", "g4", "h"):
        d = 1.0 + (x * x + y * y)
        f1 = -k * (y * y * y) / d
        f2 = k * (x * x * x) / d
        if spec.family == "g4":
            w = spec.beta + spec.delta * (x * x + y * y)
            return f1 + spec.alpha * x - w * y, f2 + spec.alpha * y + w * x
        if spec.family == "h":
            s = np.hypot(f1, f2)
            u = _radial_u_arr(s, spec.profile)
            scale = np.divide(u, s, out=np.ones_like(s), where=s > 0.0)
            return scale * f1, scale * f2
        return f1, f2
    # fn / hn: polar dispatch
    n = spec.n
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    theta = np.where(theta < 0.0, theta + TWO_PI, theta)
    theta = np.where(theta >= TWO_PI, 0.0, theta)
    m = np.minimum(np.floor(theta * n / TWO_PI), n - 1)
    theta4 = (theta - TWO_PI * m / n) * n / 4.0
    c3 = np.cos(theta4) ** 3
    s3 = np.sin(theta4) ** 3
    psi = k * r ** 3 / (1.0 + r * r) * np.hypot(c3, s3)
    if spec.family == "hn":
        psi = _radial_u_arr(psi, spec.profile)
    phi = np.arctan2(c3, -s3)
    phi = np.where(phi < 0.0, phi + TWO_PI, phi)
    theta_out = 4.0 * phi / n + TWO_PI * m / n
    return psi * np.cos(theta_out), psi * np.sin(theta_out)


# ---------------------------------------------------------------------------
# inversion (families with the exact ray-to-ray property)
# ---------------------------------------------------------------------------

_INVERTIBLE = ("f4", "fn", "h", "hn")


def _wrap_pm_pi(d: float) -> float:
    w = math.remainder(d, TWO_PI)
    if w == -math.pi:
        w = math.pi
    return w


def invert_map(spec: MapSpec, q: Point, tol: float = 1e-12) -> Point:
    """Invert one of the ray-preserving families at q.

    The image angle depends only on the source angle and is monotone across
    each sector, so the angle is found by bisection on the preimage sector;
    the radius then solves a strictly increasing scalar equation, again by
    bisection.  Raises if the residual cannot be brought below
    tol*(1+|q|).
    """
    if callable(spec) or spec.family not in _INVERTIBLE:
        raise ValueError("inversion supported for the f4/fn/h/hn families only")
    qx, qy = q
    if not (math.isfinite(qx) and math.isfinite(qy)):
        raise ValueError(f"non-finite target {q!r}")
    if qx == 0.0 and qy == 0.0:
        return 0.0, 0.0
    n = spec.n
    rq, theta_q = to_polar(q)
    jq = sector_of(q, n)
    jp = jq - 1 if jq > 1 else n
    lo = TWO_PI * (jp - 1) / n
    hi = TWO_PI * jp / n

    def angle_gap(th: float) -> float:
        img = eval_map(spec, from_polar((1.0, th)))
        return _wrap_pm_pi(to_polar(img)[1] - theta_q)

    g_lo = angle_gap(lo)
    g_hi = angle_gap(hi)
    if abs(g_lo) <= 1e-13:
        th = lo
    elif abs(g_hi) <= 1e-13:
        th = hi
    else:
        if not (g_lo < 0.0 < g_hi):
            raise RuntimeError("did not converge: no angle bracket for target")
        a, b = lo, hi
        for _ in range(90):
            mid = 0.5 * (a + b)
            if angle_gap(mid) < 0.0:
                a = mid
            else:
                b = mid
        th = 0.5 * (a + b)

    direction = from_polar((1.0, th))

    def radius_of(t: float) -> float:
        return math.hypot(*eval_map(spec, (t * direction[0], t * direction[1])))

    t_hi = 1.0
    grew = 0
    while radius_of(t_hi) < rq:
        t_hi *= 2.0
        grew += 1
        if grew > 500:
            raise RuntimeError("no preimage: target radius not attained")
    t_lo = 0.0
    for _ in range(200):
        mid = 0.5 * (t_lo + t_hi)
        if radius_of(mid) < rq:
            t_lo = mid
        else:
            t_hi = mid
        if t_hi - t_lo <= 1e-16 * (1.0 + t_hi):
            break
    t = 0.5 * (t_lo + t_hi)
    p = (t * direction[0], t * direction[1])
    img = eval_map(spec, p)
    if math.hypot(img[0] - qx, img[1] - qy) > tol * (1.0 + rq):
        raise RuntimeError("did not converge: inverse residual above tolerance")
    return p
