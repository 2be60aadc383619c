"""Dynamical analysis: fixed points, stability, Lyapunov checks, limit sets.

Everything here is pure given (tensor, parameters, seed).  Stability is
always judged on the tangent space of the simplex: the hyperplane of
zero-sum increment vectors.  The complementary direction carries the trivial
eigenvalue 2 (every Jacobian column of the raw quadratic map sums to twice
the coordinate sum), which is reported separately and never enters the
classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    InapplicableFunction,
    InapplicableSet,
    InsufficientTail,
    NeverEntersRegion,
    NotAFixedPoint,
)
from .simplex import Permutation, SimplexPoint
from .tensor import (
    CoefficientTensor,
    Trajectory,
    _apply_arr,
    jacobian,
    run,
    run_collect,
)

ATTRACTING = "ATTRACTING"
REPELLING = "REPELLING"
SADDLE = "SADDLE"
NON_HYPERBOLIC = "NON_HYPERBOLIC"

# Moduli within this band of 1 make a fixed point non-hyperbolic.
DEFAULT_BAND = 1e-6
# Converged fixed points closer than this are considered the same solution.
DEDUP_RADIUS = 1e-8
# Residual required of a point for classification to accept it as fixed.
FIXED_POINT_RESIDUAL = 1e-8
# Greedy linkage radius for limit-set clustering.
DEFAULT_CLUSTER_TOL = 1e-6
# Tolerance for period detection on trajectory tails.
DEFAULT_PERIOD_TOL = 1e-9
# Monotonicity slack absorbing renormalization round-off.
LYAPUNOV_SLACK = 1e-12


def sample_interior(rng: np.random.Generator, m: int, n: int = 1) -> np.ndarray:
    """n interior points drawn by normalizing exponential coordinates."""
    e = rng.exponential(size=(n, m))
    return e / e.sum(axis=1, keepdims=True)


@lru_cache(maxsize=None)
def tangent_basis(m: int) -> np.ndarray:
    """Orthonormal (m, m-1) basis of the zero-sum hyperplane (Helmert)."""
    b = np.zeros((m, m - 1))
    for k in range(1, m):
        b[:k, k - 1] = 1.0
        b[k, k - 1] = -float(k)
        b[:, k - 1] /= math.sqrt(k * (k + 1))
    b.setflags(write=False)
    return b


def tangent_eigenvalues(t: CoefficientTensor, x) -> tuple[np.ndarray, float]:
    """Eigenvalues of the Jacobian restricted to the tangent space.

    Returns ``(m-1 complex eigenvalues, transversal eigenvalue)`` where the
    transversal value is the common Jacobian column sum (2 for unit-sum x).
    """
    j = jacobian(t, x)
    b = tangent_basis(t.m)
    eigs = np.linalg.eigvals(b.T @ j @ b)
    transversal = float(j.sum(axis=0).mean())
    return eigs, transversal


@dataclass(frozen=True)
class FixedPointReport:
    point: SimplexPoint
    residual: float
    tangent_eigenvalues: tuple[complex, ...]
    classification: str
    transversal_eigenvalue: float
    on_boundary: bool

    def moduli(self) -> list[float]:
        return [abs(v) for v in self.tangent_eigenvalues]


def classify_fixed_point(t: CoefficientTensor, x: SimplexPoint,
                         band: float = DEFAULT_BAND) -> FixedPointReport:
    """Spectral classification of a fixed point on the tangent space."""
    residual = float(np.max(np.abs(_apply_arr(t, x.array) - x.array)))
    if residual >= FIXED_POINT_RESIDUAL:
        raise NotAFixedPoint(f"residual {residual!r} >= {FIXED_POINT_RESIDUAL}")
    eigs, transversal = tangent_eigenvalues(t, x)
    moduli = np.abs(eigs)
    if np.any(np.abs(moduli - 1.0) <= band):
        cls = NON_HYPERBOLIC
    elif np.all(moduli < 1.0 - band):
        cls = ATTRACTING
    elif np.all(moduli > 1.0 + band):
        cls = REPELLING
    else:
        cls = SADDLE
    order = np.lexsort((eigs.imag, eigs.real))
    return FixedPointReport(
        point=x,
        residual=residual,
        tangent_eigenvalues=tuple(complex(v) for v in eigs[order]),
        classification=cls,
        transversal_eigenvalue=transversal,
        on_boundary=bool(np.min(x.array) <= 1e-9),
    )


# --- multistart Newton solving ------------------------------------------------


def _compose(t: CoefficientTensor, x: np.ndarray, n: int) -> np.ndarray:
    return run(t, x, n)


def _compose_jacobian(t: CoefficientTensor, x: np.ndarray, n: int) -> np.ndarray:
    """Chain-rule Jacobian of the n-fold map along the orbit of x."""
    j = np.eye(t.m)
    y = x.copy()
    for _ in range(n):
        j = jacobian(t, y) @ j
        y = _apply_arr(t, y)
    return j


def _project(x: np.ndarray) -> np.ndarray:
    """Clamp negatives to zero and renormalize back onto the simplex."""
    y = np.clip(x, 0.0, None)
    s = y.sum()
    if s <= 0.0:
        y = np.full_like(x, 1.0 / x.size)
        s = 1.0
    return y / s


def _newton_periodic(t: CoefficientTensor, x0: np.ndarray, n_compose: int,
                     tol: float, max_iter: int = 80):
    """Newton for V^n(x) = x on the affine hull, projected to the simplex.

    The unit-sum constraint eliminates one unknown: steps are solved in the
    first m-1 coordinates with dx_m = -sum(dy).  Singular systems fall back
    to least squares, and persistent non-convergence to a damped picard
    sweep.  Returns ``(x, residual, converged)``.
    """
    m = t.m
    x = _project(np.asarray(x0, dtype=float).copy())

    def resid(pt: np.ndarray) -> np.ndarray:
        return _compose(t, pt, n_compose) - pt

    for _ in range(max_iter):
        r = resid(x)
        rmax = float(np.max(np.abs(r)))
        if rmax < tol:
            break
        jn = _compose_jacobian(t, x, n_compose)
        # reduced system: rows/cols 0..m-2, last coordinate eliminated
        mred = jn[: m - 1, : m - 1] - np.eye(m - 1) - jn[: m - 1, m - 1:m]
        rhs = -r[: m - 1]
        try:
            dy = np.linalg.solve(mred, rhs)
        except np.linalg.LinAlgError:
            dy = np.linalg.lstsq(mred, rhs, rcond=None)[0]
        if not np.all(np.isfinite(dy)):
            break
        step = np.max(np.abs(dy))
        if step > 0.5:  # trust region: quadratic maps can throw Newton far out
            dy *= 0.5 / step
        dx = np.append(dy, -dy.sum())
        x = _project(x + dx)
    else:
        # damped picard fallback reaches attracting solutions Newton missed
        for _ in range(500):
            x = _project(0.5 * x + 0.5 * _compose(t, x, n_compose))
        for _ in range(6):
            r = resid(x)
            if np.max(np.abs(r)) < tol:
                break
            jn = _compose_jacobian(t, x, n_compose)
            mred = jn[: m - 1, : m - 1] - np.eye(m - 1) - jn[: m - 1, m - 1:m]
            dy = np.linalg.lstsq(mred, -r[: m - 1], rcond=None)[0]
            if not np.all(np.isfinite(dy)):
                break
            x = _project(x + np.append(dy, -dy.sum()))

    # polish with two plain Newton steps from the converged point
    for _ in range(2):
        r = resid(x)
        if np.max(np.abs(r)) == 0.0:
            break
        jn = _compose_jacobian(t, x, n_compose)
        mred = jn[: m - 1, : m - 1] - np.eye(m - 1) - jn[: m - 1, m - 1:m]
        try:
            dy = np.linalg.solve(mred, -r[: m - 1])
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(dy)) or np.max(np.abs(dy)) > 1e-3:
            break
        x = _project(x + np.append(dy, -dy.sum()))

    rmax = float(np.max(np.abs(resid(x))))
    return x, rmax, rmax < max(tol * 100.0, 1e-10)


def _default_starts(t: CoefficientTensor, extra: int, seed) -> list[np.ndarray]:
    m = t.m
    starts = [np.eye(m)[i] for i in range(m)]
    starts.append(np.full(m, 1.0 / m))
    for i in range(m):
        for j in range(i + 1, m):
            mid = np.zeros(m)
            mid[i] = mid[j] = 0.5
            starts.append(mid)
    rng = np.random.default_rng(seed)
    starts.extend(sample_interior(rng, m, extra))
    return starts


def find_fixed_points(t: CoefficientTensor, starts: int = 24, tol: float = 1e-12,
                      seed: int = 0, band: float = DEFAULT_BAND) -> list[FixedPointReport]:
    """Multistart Newton on V(x) = x, deduplicated and classified.

    Starts are the vertices, the center, the edge midpoints, and ``starts``
    seeded interior points.  Converged solutions within ``DEDUP_RADIUS`` of
    each other collapse to the representative with the smallest residual.
    Non-converged starts are dropped silently (never fatal).
    """
    found: list[tuple[np.ndarray, float]] = []
    for x0 in _default_starts(t, starts, seed):
        x, resid, ok = _newton_periodic(t, x0, 1, tol)
        if not ok:
            continue
        for idx, (y, r) in enumerate(found):
            if np.max(np.abs(y - x)) < DEDUP_RADIUS:
                if resid < r:
                    found[idx] = (x, resid)
                break
        else:
            found.append((x, resid))
    found.sort(key=lambda pair: tuple(pair[0].tolist()))
    return [
        classify_fixed_point(t, SimplexPoint(tuple(_project(x).tolist())), band)
        for x, _ in found
    ]


@dataclass(frozen=True)
class PeriodicSearchReport:
    n: int
    s: int
    solutions: tuple[tuple[SimplexPoint, float, str], ...]
    counterexamples: tuple[SimplexPoint, ...]


def periodic_absence_search(m: int, perm: Permutation, n: int, starts: int = 40,
                            tol: float = 1e-12, seed: int = 0) -> PeriodicSearchReport:
    """Multistart Newton on V^n(x) = x for the permutation-driven operator.

    Every converged solution must be (within 1e-8) either a fixed point or a
    point with last coordinate 1/2 whose period divides s, the permutation
    order.  Anything else lands in ``counterexamples`` (expected empty).
    """
    from .families import make_quasi_strict

    t = make_quasi_strict(m, perm)
    s = perm.order
    solutions: list[tuple[SimplexPoint, float, str]] = []
    kept: list[np.ndarray] = []
    for x0 in _default_starts(t, starts, seed):
        x, resid, ok = _newton_periodic(t, x0, n, tol)
        if not ok:
            continue
        if any(np.max(np.abs(x - y)) < DEDUP_RADIUS for y in kept):
            continue
        kept.append(x)
        category = _categorize_solution(t, x, s)
        solutions.append((SimplexPoint(tuple(_project(x).tolist())), resid, category))
    solutions.sort(key=lambda rec: rec[0].coords)
    counter = tuple(pt for pt, _, cat in solutions if cat == "other")
    return PeriodicSearchReport(n=n, s=s, solutions=tuple(solutions), counterexamples=counter)


def _categorize_solution(t: CoefficientTensor, x: np.ndarray, s: int) -> str:
    if np.max(np.abs(_apply_arr(t, x) - x)) < 1e-8:
        return "fixed_point"
    if abs(x[-1] - 0.5) < 1e-8:
        for d in range(1, s + 1):
            if s % d == 0 and np.max(np.abs(_compose(t, x, d) - x)) < 1e-8:
                return "periodic_s"
    return "other"


# --- Lyapunov functions -------------------------------------------------------


@dataclass(frozen=True)
class LyapunovFn:
    """A scalar function monotone along trajectories of a matching operator.

    ``n0`` is the first iterate from which monotonicity is asserted: some of
    the catalog functions become monotone only after the orbit enters the
    region where their defining estimate holds.
    """

    id: str
    direction: str  # NON_INCREASING or NON_DECREASING
    n0: int
    families: tuple[str, ...]  # registry names this applies to, () = any
    fn: callable = field(repr=False)

    def __call__(self, x: np.ndarray) -> float:
        return float(self.fn(np.asarray(x, dtype=float)))


def cyclic_product() -> LyapunovFn:
    """|x1-x2||x2-x3|...|xm-x1|: non-increasing under the mixing operator."""
    def fn(x):
        return np.prod(np.abs(x - np.roll(x, -1)))
    return LyapunovFn("CYCLIC_PRODUCT", "NON_INCREASING", 0, ("REGULAR",), fn)


def cycle_product(perm: Permutation, cycle_index: int) -> LyapunovFn:
    """Product of the coordinates in one cycle of the permutation.

    Non-decreasing from iterate 1 on, once the last coordinate has reached
    its floor of 1/2.
    """
    cyc = _cycle_of(perm, cycle_index)
    idx = np.array(cyc) - 1
    def fn(x):
        return np.prod(x[idx])
    return LyapunovFn(f"CYCLE_PRODUCT({cycle_index})", "NON_DECREASING", 1,
                      ("QUASI_STRICT",), fn)


def cycle_sum(perm: Permutation, cycle_index: int) -> LyapunovFn:
    """Sum of the coordinates in one cycle of the permutation (from iterate 1)."""
    cyc = _cycle_of(perm, cycle_index)
    idx = np.array(cyc) - 1
    def fn(x):
        return np.sum(x[idx])
    return LyapunovFn(f"CYCLE_SUM({cycle_index})", "NON_DECREASING", 1,
                      ("QUASI_STRICT",), fn)


def _cycle_of(perm: Permutation, cycle_index: int):
    if not 1 <= cycle_index <= len(perm.cycles):
        raise InapplicableFunction(
            f"cycle index {cycle_index} outside 1..{len(perm.cycles)}"
        )
    return perm.cycles[cycle_index - 1]


def last_coord(n0: int = 8) -> LyapunovFn:
    """The last coordinate, non-increasing along blended-operator orbits.

    The decrease estimate holds on the region where the last coordinate has
    already reached its limiting band; orbits from lopsided starts need a few
    steps to get there, hence the default burn-in ``n0``.
    """
    def fn(x):
        return x[-1]
    return LyapunovFn("LAST_COORD", "NON_INCREASING", n0, ("ALPHA_COMBINATION",), fn)


def abs_diff_product() -> LyapunovFn:
    """|x1-x2||x2-x3||x3-x1| on the 2-simplex (balanced planar blends)."""
    def fn(x):
        return abs(x[0] - x[1]) * abs(x[1] - x[2]) * abs(x[2] - x[0])
    return LyapunovFn("ABS_DIFF_PRODUCT", "NON_INCREASING", 0,
                      ("GSN_ALPHA", "GSN_BETA", "JJPH_THETA"), fn)


def coord_product() -> LyapunovFn:
    """x1 x2 x3 on the 2-simplex (spiral blends away from the identity)."""
    def fn(x):
        return x[0] * x[1] * x[2]
    return LyapunovFn("COORD_PRODUCT", "NON_INCREASING", 0, ("VALLANDER_SPIRAL",), fn)


def combine_lyapunov(fns: list[LyapunovFn], coeffs: list[float]) -> LyapunovFn:
    """prod(c_i f_i) + sum(c_i f_i) for nonnegative coefficients.

    Restricted to same-direction nonnegative components, where monotonicity
    is inherited; sign-mixed combinations are rejected.
    """
    if len(fns) != len(coeffs) or not fns:
        raise InapplicableFunction("need one coefficient per function")
    if any(c < 0 for c in coeffs):
        raise InapplicableFunction("composite Lyapunov functions need nonnegative coefficients")
    direction = fns[0].direction
    if any(g.direction != direction for g in fns):
        raise InapplicableFunction("cannot mix directions in a composite")
    n0 = max(g.n0 for g in fns)
    fams = tuple(sorted(set.intersection(*(set(g.families) for g in fns))))
    def fn(x):
        vals = [c * g(x) for c, g in zip(coeffs, fns)]
        return float(np.prod(vals) + np.sum(vals))
    ident = "COMPOSITE(" + "+".join(g.id for g in fns) + ")"
    return LyapunovFn(ident, direction, n0, fams, fn)


@dataclass(frozen=True)
class LyapunovReport:
    fn_id: str
    direction: str
    n0: int
    slack: float
    samples: int
    horizon: int
    violations: int
    worst_violation: float
    worst_location: tuple[int, int] | None  # (sample index, step n of the earlier point)


def check_lyapunov(t: CoefficientTensor, fn: LyapunovFn, samples: int,
                   horizon: int, seed: int, slack: float = LYAPUNOV_SLACK) -> LyapunovReport:
    """Count monotonicity violations along seeded random trajectories.

    A violation is a step, at index >= fn.n0, where the function moves
    against its declared direction by more than ``slack``.
    """
    if fn.families and t.name and not any(t.name.startswith(f) for f in fn.families):
        raise InapplicableFunction(
            f"{fn.id} applies to {fn.families}, tensor is {t.name!r}"
        )
    if fn.n0 >= horizon:
        raise InapplicableFunction(
            f"horizon {horizon} must exceed the burn-in n0={fn.n0}"
        )
    rng = np.random.default_rng(seed)
    starts = sample_interior(rng, t.m, samples)
    sign = -1.0 if fn.direction == "NON_INCREASING" else 1.0
    violations = 0
    worst = 0.0
    worst_at: tuple[int, int] | None = None
    for si in range(samples):
        orbit = run_collect(t, starts[si], horizon)
        vals = np.array([fn(orbit[n]) for n in range(horizon + 1)])
        deltas = sign * np.diff(vals)  # >= -slack required
        for n in range(fn.n0, horizon):
            bad = -deltas[n]
            if bad > slack:
                violations += 1
                if bad > worst:
                    worst = float(bad)
                    worst_at = (si, n)
    return LyapunovReport(
        fn_id=fn.id, direction=fn.direction, n0=fn.n0, slack=slack,
        samples=samples, horizon=horizon, violations=violations,
        worst_violation=worst, worst_location=worst_at,
    )


# --- periods and limit sets ---------------------------------------------------


def detect_period_tail(tail: np.ndarray, s_max: int, tol: float = DEFAULT_PERIOD_TOL):
    """Smallest s <= s_max with a sustained s-shift match over the tail array."""
    npts = tail.shape[0]
    if npts < 2 * s_max:
        raise InsufficientTail(f"need a stride-1 tail of >= {2 * s_max} points, got {npts}")
    window = tail[-2 * s_max:]
    for s in range(1, s_max + 1):
        if np.max(np.abs(window[s:] - window[:-s])) < tol:
            return s
    return None


def detect_period(traj: Trajectory, s_max: int, tol: float = DEFAULT_PERIOD_TOL):
    """Prime period of the trajectory tail, or None.

    The trajectory must end in a stride-1 run of at least ``2 * s_max``
    recorded points.  Returning s means every proper divisor failed at the
    same tolerance, since candidates are scanned in increasing order.
    """
    return detect_period_tail(traj.tail_array(), s_max, tol)


@dataclass(frozen=True)
class OmegaSet:
    cluster_points: tuple[SimplexPoint, ...]
    detected_period: int | None
    diagnostics: dict


def omega_estimate(t: CoefficientTensor, x0: SimplexPoint, burn_in: int,
                   window: int, cluster_tol: float = DEFAULT_CLUSTER_TOL,
                   s_max: int | None = None,
                   period_tol: float = DEFAULT_PERIOD_TOL) -> OmegaSet:
    """Estimate the limit set: burn in, then cluster a stride-1 window.

    Clustering is greedy sup-norm linkage at ``cluster_tol``; the detected
    period of the window tail is attached when the window is long enough.
    """
    if burn_in < 1 or window < 1:
        raise DimensionMismatch("burn_in and window must be >= 1")
    x = run(t, x0.array, burn_in)
    tail = run_collect(t, x, window - 1) if window > 1 else x[None, :]
    reps: list[np.ndarray] = []
    counts: list[int] = []
    for row in tail:
        for idx, rep in enumerate(reps):
            if np.max(np.abs(rep - row)) <= cluster_tol:
                # running mean keeps the representative centered
                counts[idx] += 1
                reps[idx] = rep + (row - rep) / counts[idx]
                break
        else:
            reps.append(row.copy())
            counts.append(1)
    # running means can drift two representatives together; merge until the
    # pairwise separation invariant holds
    merged = True
    while merged and len(reps) > 1:
        merged = False
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                if np.max(np.abs(reps[a] - reps[b])) <= cluster_tol:
                    total = counts[a] + counts[b]
                    reps[a] = (counts[a] * reps[a] + counts[b] * reps[b]) / total
                    counts[a] = total
                    del reps[b], counts[b]
                    merged = True
                    break
            if merged:
                break
    reps.sort(key=lambda r: tuple(r.tolist()))
    smax = s_max if s_max is not None else max(1, window // 2)
    try:
        period = detect_period_tail(tail, smax, period_tol)
    except InsufficientTail:
        period = None
    return OmegaSet(
        cluster_points=tuple(SimplexPoint(tuple(r.tolist())) for r in reps),
        detected_period=period,
        diagnostics={
            "burn_in": burn_in,
            "window": window,
            "cluster_tol": cluster_tol,
            "s_max": smax,
            "boundary_start": bool(np.min(x0.array) <= 1e-9),
        },
    )


# --- invariant sets -----------------------------------------------------------


@dataclass(frozen=True)
class InvariantSetSpec:
    """Membership defect + member sampler for one candidate invariant set."""

    id: str
    families: tuple[str, ...]
    defect: callable = field(repr=False)
    sample: callable = field(repr=False)


def m0_set(m: int) -> InvariantSetSpec:
    """Product of the first m-1 coordinates vanishes."""
    def defect(x):
        return float(np.prod(x[: m - 1]))
    def sample(rng):
        x = sample_interior(rng, m, 1)[0]
        x[rng.integers(0, m - 1)] = 0.0
        return x / x.sum()
    return InvariantSetSpec(f"M0(m={m})", ("QUASI_STRICT",), defect, sample)


def m_omega_set(m: int, perm: Permutation, i: int, j: int, omega: float) -> InvariantSetSpec:
    """Cycle-product proportionality: prod over tau_i = omega * prod over tau_j.

    Membership uses the union with the 1/omega branch.  Samples are produced
    by alternately rescaling the tau_i block and renormalizing; for cycles of
    equal length one pass is exact, otherwise the projection iterates.
    """
    if i == j:
        raise InapplicableSet("cycle indices must name two distinct cycles")
    ci = np.array(_cycle_of(perm, i)) - 1
    cj = np.array(_cycle_of(perm, j)) - 1
    if omega <= 0:
        raise InapplicableSet(f"omega {omega!r} must be positive")

    def defect(x):
        pi, pj = float(np.prod(x[ci])), float(np.prod(x[cj]))
        return min(abs(pi - omega * pj), abs(pi - pj / omega))

    def sample(rng):
        x = sample_interior(rng, m, 1)[0]
        for _ in range(400):
            pi, pj = np.prod(x[ci]), np.prod(x[cj])
            scale = (omega * pj / pi) ** (1.0 / len(ci))
            x[ci] *= scale
            x /= x.sum()
            if defect(x) < 1e-14:
                break
        return x

    return InvariantSetSpec(
        f"M_OMEGA(i={i}, j={j}, omega={omega!r})", ("QUASI_STRICT",), defect, sample
    )


def vallander_diag() -> InvariantSetSpec:
    """The planar diagonal x1 = x3."""
    def defect(x):
        return abs(float(x[0] - x[2]))
    def sample(rng):
        a = rng.uniform(0.05, 0.45)
        return np.array([a, 1.0 - 2 * a, a])
    return InvariantSetSpec("VALLANDER_DIAG", ("VALLANDER_THETA", "V0", "V1"), defect, sample)


def khukr_m_tau(tau: float) -> InvariantSetSpec:
    """x2 = tau x3 or x2 = x3 / tau on the 2-simplex."""
    if tau <= 0:
        raise InapplicableSet(f"tau {tau!r} must be positive")
    def defect(x):
        return min(abs(float(x[1] - tau * x[2])), abs(float(x[1] - x[2] / tau)))
    def sample(rng):
        x3 = rng.uniform(0.05, 0.9 / (1.0 + tau))
        x2 = tau * x3 if rng.random() < 0.5 else x3 / tau
        if x2 + x3 >= 0.95:
            x2, x3 = x2 / 2, x3 / 2
        return np.array([1.0 - x2 - x3, x2, x3])
    return InvariantSetSpec(f"KHUKR_M_TAU(tau={tau!r})", ("KHUKR",), defect, sample)


@dataclass(frozen=True)
class InvariantSetReport:
    set_id: str
    samples: int
    horizon: int
    max_initial_defect: float
    max_defect: float


def check_invariant_set(t: CoefficientTensor, spec: InvariantSetSpec, samples: int,
                        horizon: int, seed: int) -> InvariantSetReport:
    """Sample members, iterate, and report the worst membership defect seen."""
    if spec.families and t.name and not any(t.name.startswith(f) for f in spec.families):
        raise InapplicableSet(f"{spec.id} applies to {spec.families}, tensor is {t.name!r}")
    rng = np.random.default_rng(seed)
    max_initial = 0.0
    max_defect = 0.0
    for _ in range(samples):
        x = spec.sample(rng)
        if x.shape != (t.m,):
            raise InapplicableSet(f"{spec.id} samples dimension {x.shape[0]}, tensor m={t.m}")
        d0 = spec.defect(x)
        if d0 > 1e-12:
            raise InapplicableSet(f"sampler produced defect {d0!r} > 1e-12")
        max_initial = max(max_initial, d0)
        for _ in range(horizon):
            x = _apply_arr(t, x)
            max_defect = max(max_defect, spec.defect(x))
    return InvariantSetReport(spec.id, samples, horizon, max_initial, max_defect)


# --- contraction of the blended operator ---------------------------------------


@dataclass(frozen=True)
class ContractionReport:
    alpha: float
    s: int
    bound: float
    vacuous: bool
    entered_at: int
    blocks_measured: int
    worst_factor: float | None
    worst_single_pair_factor: float | None
    diff_floor: float


def contraction_report(m: int, perm: Permutation, alpha: float, x0: SimplexPoint,
                       tol: float = 1e-9, blocks: int = 64,
                       diff_floor: float = 1e-6,
                       max_entry_steps: int = 200_000) -> ContractionReport:
    """Measure per-s-block contraction of the pairwise coordinate differences.

    After the orbit enters the half-space where the last coordinate is below
    1/2, each block of s steps must shrink the difference vector over all
    pairs u != v among the first m-1 coordinates, measured in sup norm, by
    at least the factor ``1 - alpha + alpha^s``.  That sup-norm factor is
    ``worst_factor``.  One step sends the (u, v) difference to a mix of the
    old (perm(u), perm(v)) difference, so the ratio of a single pair's own
    difference across a block can transiently exceed the bound whenever the
    permutation shuffles a small difference onto a larger one; the worst
    such single-pair ratio is reported as a diagnostic, not checked.

    Blocks whose starting sup difference is below ``diff_floor`` are
    skipped: at that scale round-off dominates the ratio.  For s = 1 the
    bound equals 1 and the report is flagged vacuous.
    """
    from .families import make_alpha_combination

    t = make_alpha_combination(m, perm, alpha)
    s = perm.order
    bound = 1.0 - alpha + alpha ** s
    x = x0.array.copy()
    entered = -1
    for n in range(max_entry_steps + 1):
        if x[-1] < 0.5:
            entered = n
            break
        x = _apply_arr(t, x)
    if entered < 0:
        raise NeverEntersRegion(
            f"last coordinate stayed >= 1/2 for {max_entry_steps} steps"
        )
    pairs = [(u, v) for u in range(m - 1) for v in range(u + 1, m - 1)]
    worst = None
    worst_pair = None
    measured = 0
    for _ in range(blocks):
        block = run_collect(t, x, s)
        x = block[-1]
        if np.any(block[:, -1] >= 0.5):
            continue
        start, end = block[0], block[-1]
        d0 = np.array([abs(start[u] - start[v]) for u, v in pairs])
        d1 = np.array([abs(end[u] - end[v]) for u, v in pairs])
        if d0.max() <= diff_floor:
            continue
        measured += 1
        factor = float(d1.max() / d0.max())
        if worst is None or factor > worst:
            worst = factor
        for k in range(len(pairs)):
            if d0[k] > diff_floor:
                pf = float(d1[k] / d0[k])
                if worst_pair is None or pf > worst_pair:
                    worst_pair = pf
    return ContractionReport(
        alpha=alpha, s=s, bound=bound, vacuous=(s == 1), entered_at=entered,
        blocks_measured=measured, worst_factor=worst,
        worst_single_pair_factor=worst_pair, diff_floor=diff_floor,
    )


# --- time averages -------------------------------------------------------------


@dataclass(frozen=True)
class ErgodicityReport:
    checkpoints: tuple[int, ...]
    cesaro: tuple[SimplexPoint, ...]
    min_coordinate: tuple[float, ...]
    fluctuation: float
    boundary_start: bool


def ergodicity_probe(t: CoefficientTensor, x0: SimplexPoint, checkpoints) -> ErgodicityReport:
    """Cesaro means at the checkpoints plus their worst pairwise deviation.

    Divergent time averages show up as a fluctuation that stays large as the
    checkpoints grow; a regular operator drives it to zero at rate 1/n.
    """
    cps = [int(n) for n in checkpoints]
    if not cps or cps[0] < 1 or any(b <= a for a, b in zip(cps, cps[1:])) \
            or cps[-1] > 10_000_000:
        raise DimensionMismatch("checkpoints must be positive, increasing, <= 1e7")
    x = x0.array.copy()
    acc = np.zeros(t.m)
    flat = t._flat
    means = []
    min_coords = []
    steps = 0
    for target in cps:
        while steps < target:
            acc += x
            y = np.outer(x, x).ravel() @ flat
            x = y / y.sum()
            steps += 1
        mean = acc / target
        means.append(mean / mean.sum())  # running sum accumulates round-off
        min_coords.append(float(np.min(x)))
    fluct = 0.0
    for a in range(len(means)):
        for b in range(a + 1, len(means)):
            fluct = max(fluct, float(np.max(np.abs(means[a] - means[b]))))
    return ErgodicityReport(
        checkpoints=tuple(cps),
        cesaro=tuple(SimplexPoint(tuple(mu.tolist())) for mu in means),
        min_coordinate=tuple(min_coords),
        fluctuation=fluct,
        boundary_start=bool(np.min(x0.array) <= 1e-9),
    )


# --- decay estimates specific to the mixing operator ----------------------------


def psi_decay_values(xs: np.ndarray) -> np.ndarray:
    """The per-step shrink factor of the cyclic difference product.

    For each row x: (1/(m-2)^m) * prod over cyclically consecutive pairs of
    (2 + (m-4)(x_i + x_{i+1})).  Its maximum over the simplex is (4/m)^m,
    attained exactly at the center.
    """
    m = xs.shape[1]
    pair_sums = xs + np.roll(xs, -1, axis=1)
    return np.prod((2.0 + (m - 4) * pair_sums) / (m - 2), axis=1)


@dataclass(frozen=True)
class PsiBoundReport:
    m: int
    samples: int
    bound: float
    max_value: float
    value_at_center: float
    max_violation: float


def psi_bound_check(m: int, samples: int, seed: int) -> PsiBoundReport:
    """Check the shrink factor stays at or below (4/m)^m on random points."""
    if m < 5:
        raise DimensionMismatch("the strict-decay bound applies to m >= 5")
    rng = np.random.default_rng(seed)
    xs = sample_interior(rng, m, samples)
    vals = psi_decay_values(xs)
    bound = (4.0 / m) ** m
    at_center = float(psi_decay_values(np.full((1, m), 1.0 / m))[0])
    return PsiBoundReport(
        m=m, samples=samples, bound=bound,
        max_value=float(np.max(vals)),
        value_at_center=at_center,
        max_violation=float(np.max(vals) - bound),
    )


@dataclass(frozen=True)
class MaxNormReport:
    samples: int
    checked: int
    excluded: int
    min_margin: float
    violations: int


def max_norm_check(samples: int, seed: int, exclusion_radius: float = 1e-9) -> MaxNormReport:
    """Strict decrease of the max coordinate under the m=4 mixing operator.

    Holds everywhere except at the five fixed points (vertices and center),
    which are excluded by a small radius.
    """
    from .families import make_regular

    t = make_regular(4)
    rng = np.random.default_rng(seed)
    xs = sample_interior(rng, 4, samples)
    fixed = np.vstack([np.eye(4), np.full((1, 4), 0.25)])
    dist = np.min(np.max(np.abs(xs[:, None, :] - fixed[None, :, :]), axis=2), axis=1)
    keep = dist > exclusion_radius
    ys = np.einsum("ni,nj,ijk->nk", xs[keep], xs[keep], t.p, optimize=True)
    ys /= ys.sum(axis=1, keepdims=True)
    margins = np.max(xs[keep], axis=1) - np.max(ys, axis=1)
    return MaxNormReport(
        samples=samples,
        checked=int(keep.sum()),
        excluded=int((~keep).sum()),
        min_margin=float(np.min(margins)),
        violations=int(np.sum(margins <= 0.0)),
    )
