"""Coefficient tensors and the generic quadratic stochastic operator.

An operator on the (m-1)-simplex is stored as the dense array ``p`` of
heredity coefficients, symmetric in its first two indices, nonnegative, and
with every pair row summing to one::

    x'_k = sum_{i,j} p[i, j, k] * x_i * x_j

Entries are addressed 1-based through the public builders and the text
exchange format; the underlying numpy array is 0-based.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AsymmetricInput,
    DimensionMismatch,
    MalformedSyntax,
    NegativeCoefficient,
    RowSumNotOne,
    WeightOutOfRange,
)
from .simplex import SimplexPoint

# Pair rows must be stochastic to this absolute tolerance.
ROW_SUM_TOL = 1e-12
# Entries off the Volterra pattern at or below this count as exact zeros.
VOLTERRA_TOL = 1e-15


@dataclass(frozen=True)
class CoefficientTensor:
    """Validated heredity coefficients of a quadratic stochastic operator."""

    m: int
    p: np.ndarray
    name: str = ""

    def __post_init__(self):
        if not (isinstance(self.m, int) and self.m >= 2):
            raise DimensionMismatch(f"tensor dimension {self.m} must be an integer >= 2")
        if self.p.shape != (self.m, self.m, self.m):
            raise DimensionMismatch(f"coefficient array shape {self.p.shape} != {(self.m,) * 3}")
        self.p.setflags(write=False)

    def validate(self) -> None:
        """Check finiteness, symmetry, nonnegativity, and row stochasticity."""
        if not np.all(np.isfinite(self.p)):
            raise NegativeCoefficient("non-finite coefficient in tensor")
        if not np.array_equal(self.p, np.swapaxes(self.p, 0, 1)):
            raise AsymmetricInput("p[i,j,k] != p[j,i,k] somewhere")
        if np.min(self.p) < 0.0:
            i, j, k = np.unravel_index(int(np.argmin(self.p)), self.p.shape)
            raise NegativeCoefficient(
                f"p[{i + 1},{j + 1},{k + 1}] = {self.p[i, j, k]!r} is negative"
            )
        sums = self.p.sum(axis=2)
        bad = np.argwhere(np.abs(sums - 1.0) > ROW_SUM_TOL)
        if bad.size:
            i, j = bad[0]
            raise RowSumNotOne(
                f"row (i={i + 1}, j={j + 1}) sums to {sums[i, j]!r}, expected 1"
            )

    def entry(self, i: int, j: int, k: int) -> float:
        """1-based coefficient access."""
        return float(self.p[i - 1, j - 1, k - 1])

    def with_name(self, name: str) -> "CoefficientTensor":
        return CoefficientTensor(self.m, self.p, name)

    # Flattened (m*m, m) view used by the hot iteration loop.
    @property
    def _flat(self) -> np.ndarray:
        return self.p.reshape(self.m * self.m, self.m)


@dataclass(frozen=True)
class Trajectory:
    """Recorded iterates ``(step, point)`` of one operator run."""

    operator: str
    stride: int
    points: tuple[tuple[int, SimplexPoint], ...] = field(repr=False)

    @property
    def final(self) -> SimplexPoint:
        return self.points[-1][1]

    def steps(self) -> list[int]:
        return [n for n, _ in self.points]

    def tail_array(self) -> np.ndarray:
        """Coordinates of the longest suffix recorded at consecutive steps."""
        steps = self.steps()
        cut = len(steps) - 1
        while cut > 0 and steps[cut] - steps[cut - 1] == 1:
            cut -= 1
        return np.array([pt.coords for _, pt in self.points[cut:]], dtype=float)


def build_tensor(m: int, entries, name: str = "") -> CoefficientTensor:
    """Build a tensor from sparse 1-based entries given for i <= j.

    ``entries`` maps ``(i, j, k)`` to a value, or is an iterable of
    ``(i, j, k, value)`` rows.  Omitted entries are zero; the (j, i, k)
    mirror of each entry is filled in automatically.
    """
    if isinstance(entries, dict):
        items = [(i, j, k, v) for (i, j, k), v in entries.items()]
    else:
        items = [tuple(row) for row in entries]
    p = np.zeros((m, m, m))
    for i, j, k, v in items:
        for idx in (i, j, k):
            if not 1 <= idx <= m:
                raise DimensionMismatch(f"index {idx} outside 1..{m} in entry {(i, j, k)}")
        if i > j:
            raise AsymmetricInput(f"entry ({i},{j},{k}) has i > j; supply i <= j only")
        if v < 0.0:
            raise NegativeCoefficient(f"p[{i},{j},{k}] = {v!r} is negative")
        p[i - 1, j - 1, k - 1] = v
        p[j - 1, i - 1, k - 1] = v
    t = CoefficientTensor(m, p, name)
    t.validate()
    return t


def is_volterra(t: CoefficientTensor) -> bool:
    """True iff every coefficient with k outside {i, j} is numerically zero."""
    m = t.m
    idx = np.arange(m)
    k_not_i = idx[None, None, :] != idx[:, None, None]
    k_not_j = idx[None, None, :] != idx[None, :, None]
    off_pattern = t.p[k_not_i & k_not_j]
    return bool(np.all(off_pattern <= VOLTERRA_TOL))


def convex_combine(t1: CoefficientTensor, t2: CoefficientTensor, w: float,
                   name: str = "") -> CoefficientTensor:
    """Entrywise ``w * t1 + (1 - w) * t2``."""
    if t1.m != t2.m:
        raise DimensionMismatch(f"cannot combine tensors of dimension {t1.m} and {t2.m}")
    if not 0.0 <= w <= 1.0:
        raise WeightOutOfRange(f"weight {w!r} outside [0, 1]")
    t = CoefficientTensor(t1.m, w * t1.p + (1.0 - w) * t2.p, name)
    t.validate()
    return t


# --- application, derivatives, iteration ------------------------------------


def _apply_arr(t: CoefficientTensor, x: np.ndarray) -> np.ndarray:
    """One renormalized application on a raw coordinate array."""
    y = np.outer(x, x).ravel() @ t._flat
    return y / y.sum()


def apply_raw(t: CoefficientTensor, x) -> np.ndarray:
    """The quadratic form itself, without renormalization.

    Defined for any real vector (used by derivative checks); does not
    require or return a simplex point.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (t.m,):
        raise DimensionMismatch(f"point has {x.shape[0]} coordinates, tensor has m={t.m}")
    return np.outer(x, x).ravel() @ t._flat


def apply(t: CoefficientTensor, x: SimplexPoint) -> SimplexPoint:
    """Apply the operator to a simplex point (renormalized)."""
    if x.m != t.m:
        raise DimensionMismatch(f"point has {x.m} coordinates, tensor has m={t.m}")
    return SimplexPoint(tuple(_apply_arr(t, x.array).tolist()))


def apply_batch(t: CoefficientTensor, xs: np.ndarray) -> np.ndarray:
    """Renormalized application to each row of an (n, m) array."""
    ys = np.einsum("ni,nj,ijk->nk", xs, xs, t.p, optimize=True)
    return ys / ys.sum(axis=1, keepdims=True)


def jacobian(t: CoefficientTensor, x) -> np.ndarray:
    """Jacobian of the raw (unrenormalized) map at ``x``.

    Entry ``[k, j]`` is the partial derivative of coordinate k with respect
    to x_j: 2 * sum_i p[i, j, k] x_i.  Every column sums to 2 * sum(x).
    """
    arr = x.array if isinstance(x, SimplexPoint) else np.asarray(x, dtype=float)
    if arr.shape != (t.m,):
        raise DimensionMismatch(f"point has {arr.shape[0]} coordinates, tensor has m={t.m}")
    return 2.0 * np.einsum("ijk,i->kj", t.p, arr)


def run(t: CoefficientTensor, x0: np.ndarray, n_steps: int) -> np.ndarray:
    """Final raw coordinate array after ``n_steps`` renormalized steps."""
    x = np.asarray(x0, dtype=float).copy()
    flat = t._flat
    for _ in range(n_steps):
        y = np.outer(x, x).ravel() @ flat
        x = y / y.sum()
    return x


def run_collect(t: CoefficientTensor, x0: np.ndarray, n_steps: int) -> np.ndarray:
    """All iterates x^(0..n_steps) as an (n_steps + 1, m) array."""
    out = np.empty((n_steps + 1, t.m))
    out[0] = np.asarray(x0, dtype=float)
    x = out[0].copy()
    flat = t._flat
    for n in range(1, n_steps + 1):
        y = np.outer(x, x).ravel() @ flat
        x = y / y.sum()
        out[n] = x
    return out


def run_batch(t: CoefficientTensor, xs: np.ndarray, n_steps: int) -> np.ndarray:
    """Advance every row of an (n, m) array by ``n_steps`` steps."""
    x = np.asarray(xs, dtype=float).copy()
    for _ in range(n_steps):
        x = apply_batch(t, x)
    return x


def iterate(t: CoefficientTensor, x0: SimplexPoint, n_steps: int, stride: int = 1) -> Trajectory:
    """Iterate from ``x0``, recording step 0, every stride-th step, and the last.

    Renormalization divides by the coordinate sum after every application so
    that million-step runs cannot drift off the simplex.
    """
    if x0.m != t.m:
        raise DimensionMismatch(f"point has {x0.m} coordinates, tensor has m={t.m}")
    if n_steps < 0 or stride < 1:
        raise DimensionMismatch("need n_steps >= 0 and stride >= 1")
    points = [(0, x0)]
    x = x0.array
    flat = t._flat
    for n in range(1, n_steps + 1):
        y = np.outer(x, x).ravel() @ flat
        x = y / y.sum()
        if n % stride == 0 or n == n_steps:
            points.append((n, SimplexPoint(tuple(x.tolist()))))
    return Trajectory(operator=t.name or "tensor", stride=stride, points=tuple(points))


def cesaro_means(t: CoefficientTensor, x0: SimplexPoint, checkpoints) -> list[SimplexPoint]:
    """Running averages (1/n) sum_{k<n} x^(k) at each checkpoint.

    Single pass with an O(m) running sum, so checkpoints up to 10^7 are fine.
    """
    cps = [int(n) for n in checkpoints]
    if any(b <= a for a, b in zip(cps, cps[1:])) or (cps and cps[0] < 1):
        raise DimensionMismatch("checkpoints must be strictly increasing positive integers")
    out = []
    x = x0.array
    acc = np.zeros(t.m)
    flat = t._flat
    steps = 0
    for n_target in cps:
        while steps < n_target:
            acc += x
            y = np.outer(x, x).ravel() @ flat
            x = y / y.sum()
            steps += 1
        mean = acc / n_target
        # the running sum accumulates round-off linearly in n; renormalize
        out.append(SimplexPoint(tuple((mean / mean.sum()).tolist())))
    return out


# --- text exchange format ----------------------------------------------------


def save_tensor(t: CoefficientTensor, f) -> None:
    """Write the ``m <int>`` header plus one ``i j k value`` line per entry.

    Entries are written 1-based for i <= j, in lexicographic order, with 17
    significant digits.  ``f`` is a path or a text stream.
    """
    if isinstance(f, (str, bytes)):
        with open(f, "w") as fh:
            save_tensor(t, fh)
            return
    f.write(f"m {t.m}\n")
    for i in range(t.m):
        for j in range(i, t.m):
            for k in range(t.m):
                v = t.p[i, j, k]
                if v != 0.0:
                    f.write(f"{i + 1} {j + 1} {k + 1} {format(v, '.17g')}\n")


def load_tensor(f, name: str = "") -> CoefficientTensor:
    """Parse the text format written by :func:`save_tensor`.

    Lines starting with ``#`` are comments; blank lines are ignored.
    """
    if isinstance(f, (str, bytes)):
        with open(f) as fh:
            return load_tensor(fh, name)
    if isinstance(f, str):  # pragma: no cover
        f = io.StringIO(f)
    m = None
    rows = []
    for lineno, line in enumerate(f, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if m is None:
            if len(parts) != 2 or parts[0] != "m":
                raise MalformedSyntax(f"line {lineno}: expected 'm <int>' header, got {text!r}")
            m = int(parts[1])
            continue
        if len(parts) != 4:
            raise MalformedSyntax(f"line {lineno}: expected 'i j k value', got {text!r}")
        i, j, k = (int(v) for v in parts[:3])
        rows.append((i, j, k, float(parts[3])))
    if m is None:
        raise MalformedSyntax("missing 'm <int>' header")
    return build_tensor(m, rows, name=name)


def random_tensor(rng: np.random.Generator, m: int, name: str = "") -> CoefficientTensor:
    """A random valid tensor: each pair row is an independent Dirichlet draw."""
    p = np.zeros((m, m, m))
    for i in range(m):
        for j in range(i, m):
            row = rng.exponential(size=m)
            row /= row.sum()
            # round-trip through fsum-style normalization to keep the row sum
            # within ROW_SUM_TOL exactly as validate() measures it
            row /= math.fsum(row.tolist())
            p[i, j] = row
            p[j, i] = row
    t = CoefficientTensor(m, p, name)
    t.validate()
    return t
