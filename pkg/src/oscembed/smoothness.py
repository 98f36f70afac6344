"""Ball-average smoothness, gradient seminorms, and two-sided K-bounds.

The local roughness of f at scale r is the ball average

    grad_[r,a] f(x) = ( mean_{y in B(x,r)} |f(x) - f(y)|^a )^(1/a),

and the modulus at scale r is the chosen quasi-norm of its rearrangement.
On a finite space the modulus is piecewise constant in r (balls only change
at pairwise distances), is identically 0 for r <= the smallest positive
distance (balls are singletons), and is constant once r exceeds the diameter
(every ball is the whole space).  The scale integral defining the Besov
seminorm is therefore evaluated on a geometric radius grid with an exact
closed-form tail; the grid ratio is the only quadrature knob.

Gradient seminorms come from the pairwise relaxation

    |f(x) - f(y)| <= d(x, y) (g(x) + g(y)),   g >= 0,

whose feasible fields form a polytope.  The weighted-L1 infimum over that
polytope, and the split-infimum K(f, t) against the L1 error term, are plain
linear programs solved exactly (up to solver tolerance) with HiGHS; failed
solves dump the instance to a text file for inspection.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .errors import DomainError, SolverError
from .rearrange import StepDecreasing, rearrangement, rearrangement_from_weights
from .rispace import RISpaceSpec, convexify, quasi_norm
from .space import Space

DEFAULT_GRID_RATIO = 2.0 ** 0.25
_LP_GAP_TOL = 1e-9
_FEAS_TOL = 1e-7


# -- ball averages ------------------------------------------------------------------


def _ball_average(space: Space, values_sq: np.ndarray, r: float, alpha: float) -> np.ndarray:
    """Per-point ball average of values_sq[x, y] to the power 1/alpha."""
    mask = space.dist < r
    den = mask @ space.weight
    num = (mask * values_sq) @ space.weight
    return (num / den) ** (1.0 / alpha)


def nabla(space: Space, f, r: float, alpha: float) -> np.ndarray:
    """Ball average of |f(x) - f(y)|^alpha over y in B(x, r), to the 1/alpha."""
    if not r > 0.0:
        raise DomainError("radius must be positive")
    if not 0.0 < alpha <= 1.0:
        raise DomainError("alpha must lie in (0, 1]")
    f = np.asarray(f, dtype=float)
    diffs = np.abs(f[:, None] - f[None, :]) ** alpha
    return _ball_average(space, diffs, r, alpha)


def t_r_operator(space: Space, f, r: float, alpha: float) -> np.ndarray:
    """Ball average of |f(y)|^alpha over y in B(x, r), to the 1/alpha."""
    if not r > 0.0:
        raise DomainError("radius must be positive")
    if not 0.0 < alpha <= 1.0:
        raise DomainError("alpha must lie in (0, 1]")
    f = np.abs(np.asarray(f, dtype=float)) ** alpha
    vals = np.broadcast_to(f[None, :], (space.n, space.n))
    return _ball_average(space, vals, r, alpha)


def modulus(space: Space, f, r: float, spec: RISpaceSpec, alpha: float) -> float:
    """Quasi-norm (in the alpha-convexified spec) of the scale-r ball roughness."""
    grad = nabla(space, f, r, alpha)
    return quasi_norm(convexify(spec, alpha), rearrangement(space, grad))


# -- modulus profiles and the scale integral -------------------------------------------


@dataclass(frozen=True)
class ModulusProfile:
    """Modulus sampled on a geometric radius grid, plus its large-r constant."""

    radii: np.ndarray
    values: np.ndarray
    tail_value: float

    def __post_init__(self):
        r = np.ascontiguousarray(np.asarray(self.radii, dtype=float))
        v = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if r.size != v.size or r.size == 0:
            raise DomainError("radii and values must be nonempty and aligned")
        if np.any(np.diff(r) <= 0.0) or r[0] <= 0.0:
            raise DomainError("radii must be strictly increasing and positive")
        if np.any(v < 0.0) or self.tail_value < 0.0:
            raise DomainError("modulus values must be nonnegative")
        r.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    def to_json(self) -> dict:
        return {"radii": self.radii.tolist(), "values": self.values.tolist(),
                "tail_value": self.tail_value}


def radius_grid(space: Space, ratio: float = DEFAULT_GRID_RATIO) -> np.ndarray:
    """Geometric grid from the smallest positive distance to past 2 * diameter."""
    if not ratio > 1.0:
        raise DomainError("grid ratio must exceed 1")
    r0, top = space.r_min, 2.0 * space.diameter
    if not math.isfinite(r0) or top <= 0.0:
        return np.array([1.0])
    n_steps = max(1, math.ceil(math.log(top / r0) / math.log(ratio)))
    return r0 * ratio ** np.arange(n_steps + 1)


def modulus_profile(space: Space, f, spec: RISpaceSpec, alpha: float,
                    ratio: float = DEFAULT_GRID_RATIO) -> ModulusProfile:
    radii = radius_grid(space, ratio)
    conv = convexify(spec, alpha)
    f = np.asarray(f, dtype=float)
    diffs = np.abs(f[:, None] - f[None, :]) ** alpha
    vals = []
    for r in radii:
        grad = _ball_average(space, diffs, float(r), alpha)
        vals.append(quasi_norm(conv, rearrangement(space, grad)))
    full = _ball_average(space, diffs, 2.0 * space.diameter + 1.0, alpha)
    tail = quasi_norm(conv, rearrangement(space, full))
    return ModulusProfile(radii, np.asarray(vals), tail)


def besov_from_profile(profile: ModulusProfile, s: float, q: float) -> float:
    """Scale integral (int (r^-s E(r))^q dr/r)^(1/q) of a sampled profile.

    The profile value at a grid point is taken as constant on the cell to its
    right; the region below the first radius contributes nothing (singleton
    balls) and the region past the last radius uses the exact power-law tail.
    """
    if not 0.0 < s < 1.0:
        raise DomainError("smoothness s must lie in (0, 1)")
    r, v = profile.radii, profile.values
    if math.isinf(q):
        best = float(np.max(v * r ** (-s))) if v.size else 0.0
        return max(best, profile.tail_value * r[-1] ** (-s))
    sq = s * q
    inner = float(np.sum(v[:-1] ** q * (r[:-1] ** (-sq) - r[1:] ** (-sq)))) / sq
    tail = profile.tail_value ** q * r[-1] ** (-sq) / sq
    return (inner + tail) ** (1.0 / q)


def besov_seminorm(space: Space, f, s: float, q: float, spec: RISpaceSpec, alpha: float,
                   ratio: float = DEFAULT_GRID_RATIO) -> float:
    """Hajlasz-style smoothness seminorm: scale integral of the modulus."""
    if not 0.0 < q:
        raise DomainError("q must be positive")
    return besov_from_profile(modulus_profile(space, f, spec, alpha, ratio), s, q)


# -- gradient fields --------------------------------------------------------------------


@dataclass(frozen=True)
class GradientField:
    """Nonnegative field certifying |f(x)-f(y)| <= d(x,y)(g(x)+g(y)) for all pairs."""

    g: np.ndarray
    max_violation: float

    @staticmethod
    def certify(space: Space, f, g, tol: float = _FEAS_TOL) -> "GradientField":
        g = np.asarray(g, dtype=float)
        f = np.asarray(f, dtype=float)
        if np.any(g < -tol):
            raise DomainError("gradient field must be nonnegative")
        g = np.maximum(g, 0.0)
        gap = np.abs(f[:, None] - f[None, :]) - space.dist * (g[:, None] + g[None, :])
        np.fill_diagonal(gap, -np.inf)
        violation = float(gap.max())
        scale = max(1.0, float(np.abs(f).max()))
        if violation > tol * scale:
            i, j = np.unravel_index(int(gap.argmax()), gap.shape)
            raise DomainError(f"gradient constraint violated at pair ({i}, {j}) by {violation:g}")
        arr = np.ascontiguousarray(g)
        arr.setflags(write=False)
        return GradientField(arr, max(violation, 0.0))


def canonical_gradient(space: Space, f) -> GradientField:
    """g(x) = max_y |f(x)-f(y)| / d(x,y): always feasible, usually not optimal."""
    f = np.asarray(f, dtype=float)
    if space.n < 2:
        return GradientField.certify(space, f, np.zeros(space.n))
    ratio = np.abs(f[:, None] - f[None, :]) / np.where(space.dist > 0.0, space.dist, np.inf)
    return GradientField.certify(space, f, ratio.max(axis=1))


# -- linear programs ----------------------------------------------------------------------


def _dump_lp(c, a_ub, b_ub, note: str) -> str:
    path = tempfile.mktemp(prefix="oscembed_lp_", suffix=".txt")
    with open(path, "w") as fh:
        fh.write(f"# {note}\nminimize {list(map(float, c))}\n")
        dense = a_ub.toarray() if hasattr(a_ub, "toarray") else np.asarray(a_ub)
        for row, rhs in zip(dense, b_ub):
            fh.write(f"{list(map(float, row))} <= {float(rhs)}\n")
    return path


def _solve_lp(c, a_ub, b_ub, bounds, note: str):
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        path = _dump_lp(c, a_ub, b_ub, note)
        raise SolverError(f"LP solve failed ({res.message.strip()}); instance dumped to {path}")
    return res

def _pair_constraints(space: Space, rhs_scale: np.ndarray):
    """Rows of g(x)+g(y) >= rhs for all pairs x < y, as -g(x)-g(y) <= -rhs."""
    n = space.n
    ii, jj = np.triu_indices(n, k=1)
    rhs = rhs_scale[ii, jj] / space.dist[ii, jj]
    keep = rhs > 0.0
    ii, jj, rhs = ii[keep], jj[keep], rhs[keep]
    m = ii.size
    rows = np.repeat(np.arange(m), 2)
    cols = np.concatenate([ii[:, None], jj[:, None]], axis=1).ravel()
    data = -np.ones(2 * m)
    return coo_matrix((data, (rows, cols)), shape=(m, n)), -rhs, ii, jj


def hajlasz_seminorm_l1(space: Space, f) -> tuple[float, GradientField]:
    """Weighted-L1 infimum over feasible gradient fields, by exact LP.

    Optimality is certified by the HiGHS dual: the duality gap must close to
    1e-9 relative or the solve is rejected.
    """
    f = np.asarray(f, dtype=float)
    diff = np.abs(f[:, None] - f[None, :])
    if space.n < 2 or float(diff.max()) == 0.0:
        return 0.0, GradientField.certify(space, f, np.zeros(space.n))
    a_ub, b_ub, _, _ = _pair_constraints(space, diff)
    res = _solve_lp(space.weight, a_ub, b_ub, [(0.0, None)] * space.n, "gradient-seminorm")
    dual = float(b_ub @ res.ineqlin.marginals)
    gap = abs(res.fun - dual)
    if gap > _LP_GAP_TOL * max(1.0, abs(res.fun)):
        path = _dump_lp(space.weight, a_ub, b_ub, "gradient-seminorm duality gap")
        raise SolverError(f"duality gap {gap:g} too large; instance dumped to {path}")
    return float(res.fun), GradientField.certify(space, f, res.x)


def k_functional_l1(space: Space, f, t: float) -> float:
    """Exact split infimum: min over h of ||f - h||_L1 + t * (L1 gradient seminorm of h).

    Joint LP in (h, g, e): e absolute-value slacks for f - h, g the gradient
    field of h, pairwise constraints linearized two-sided.
    """
    if not t > 0.0:
        raise DomainError("K-functional parameter t must be positive")
    f = np.asarray(f, dtype=float)
    n = space.n
    if n < 2 or float(np.abs(f - f[0]).max()) == 0.0:
        return 0.0
    ii, jj = np.triu_indices(n, k=1)
    d = space.dist[ii, jj]
    m = ii.size
    # variables: h (n), g (n), e (n)
    rows, cols, data, rhs = [], [], [], []

    def add_row(idx, entries, b):
        for col, val in entries:
            rows.append(idx)
            cols.append(col)
            data.append(val)
        rhs.append(b)

    row = 0
    for k in range(m):  # (h_i - h_j)/d - g_i - g_j <= 0, both signs
        i, j = int(ii[k]), int(jj[k])
        add_row(row, [(i, 1.0 / d[k]), (j, -1.0 / d[k]), (n + i, -1.0), (n + j, -1.0)], 0.0)
        row += 1
        add_row(row, [(i, -1.0 / d[k]), (j, 1.0 / d[k]), (n + i, -1.0), (n + j, -1.0)], 0.0)
        row += 1
    for x in range(n):  # |f - h| slacks: -e - h <= -f, -e + h <= f
        add_row(row, [(2 * n + x, -1.0), (x, -1.0)], -float(f[x]))
        row += 1
        add_row(row, [(2 * n + x, -1.0), (x, 1.0)], float(f[x]))
        row += 1
    a_ub = coo_matrix((data, (rows, cols)), shape=(row, 3 * n))
    c = np.concatenate([np.zeros(n), t * space.weight, space.weight])
    bounds = [(None, None)] * n + [(0.0, None)] * n + [(0.0, None)] * n
    res = _solve_lp(c, a_ub, np.asarray(rhs), bounds, f"k-functional t={t}")
    return float(res.fun)


def k_functional_l1_nonhomogeneous(space: Space, f, t: float) -> float:
    """Split infimum against the inhomogeneous gradient norm ||h||_L1 + seminorm."""
    if not t > 0.0:
        raise DomainError("K-functional parameter t must be positive")
    f = np.asarray(f, dtype=float)
    n = space.n
    ii, jj = np.triu_indices(n, k=1)
    d = space.dist[ii, jj]
    m = ii.size
    rows, cols, data, rhs = [], [], [], []

    def add_row(idx, entries, b):
        for col, val in entries:
            rows.append(idx)
            cols.append(col)
            data.append(val)
        rhs.append(b)

    row = 0
    for k in range(m):
        i, j = int(ii[k]), int(jj[k])
        add_row(row, [(i, 1.0 / d[k]), (j, -1.0 / d[k]), (n + i, -1.0), (n + j, -1.0)], 0.0)
        row += 1
        add_row(row, [(i, -1.0 / d[k]), (j, 1.0 / d[k]), (n + i, -1.0), (n + j, -1.0)], 0.0)
        row += 1
    for x in range(n):  # e >= |f - h|, a >= |h|
        add_row(row, [(2 * n + x, -1.0), (x, -1.0)], -float(f[x]))
        row += 1
        add_row(row, [(2 * n + x, -1.0), (x, 1.0)], float(f[x]))
        row += 1
        add_row(row, [(3 * n + x, -1.0), (x, 1.0)], 0.0)
        row += 1
        add_row(row, [(3 * n + x, -1.0), (x, -1.0)], 0.0)
        row += 1
    a_ub = coo_matrix((data, (rows, cols)), shape=(row, 4 * n))
    c = np.concatenate([np.zeros(n), t * space.weight, space.weight, t * space.weight])
    bounds = ([(None, None)] * n + [(0.0, None)] * n + [(0.0, None)] * n + [(0.0, None)] * n)
    res = _solve_lp(c, a_ub, np.asarray(rhs), bounds, f"k-functional-inhomogeneous t={t}")
    return float(res.fun)


# -- upper bounds for general quasi-norm gradient seminorms ---------------------------------


def _coordinate_descent(space: Space, f, g0: np.ndarray, sweeps: int = 3) -> np.ndarray:
    """Lower each g(x) to its minimal feasible value given the others, cyclically.

    Every update preserves feasibility and is pointwise monotone, so any
    lattice quasi-norm of the field can only decrease.
    """
    f = np.asarray(f, dtype=float)
    ratio = np.abs(f[:, None] - f[None, :]) / np.where(space.dist > 0.0, space.dist, np.inf)
    g = g0.copy()
    for _ in range(sweeps):
        for x in range(space.n):
            need = ratio[x] - g
            need[x] = 0.0
            g[x] = max(0.0, float(need.max()))
    return g


def hajlasz_seminorm_upper(space: Space, f, spec: RISpaceSpec, alpha: float
                           ) -> tuple[float, GradientField]:
    """Best feasible-field upper bound for the gradient seminorm in spec^(alpha).

    Candidates: the canonical field, the L1-optimal field, and their
    coordinate-descent improvements.  Always an upper bound for the true
    infimum; exact when the L1-optimal field is optimal for the target norm.
    """
    conv = convexify(spec, alpha)
    cands = [canonical_gradient(space, f).g]
    try:
        _, opt = hajlasz_seminorm_l1(space, f)
        cands.append(opt.g)
    except SolverError:
        pass
    cands.extend(_coordinate_descent(space, f, g) for g in list(cands))
    best_val, best_g = math.inf, None
    for g in cands:
        val = quasi_norm(conv, rearrangement(space, g))
        if val < best_val:
            best_val, best_g = val, g
    return best_val, GradientField.certify(space, f, best_g)


# -- two-sided K bounds -------------------------------------------------------------------


@dataclass(frozen=True)
class KBounds:
    t: float
    lower: float
    upper: float
    exact: float | None = None

    def to_json(self) -> dict:
        return {"t": self.t, "lower": self.lower, "upper": self.upper, "exact": self.exact}


def k_bounds(space: Space, f, t: float, spec: RISpaceSpec, alpha: float) -> KBounds:
    """Modulus lower bound and truncated dyadic-sum upper bound at parameter t.

    The dyadic sum over scales 2^j t is truncated once the scale covers the
    space (2^J t >= 2 * diameter); beyond that the modulus is constant and the
    remaining geometric tail is folded in exactly.  For the weighted-L1 spec
    at alpha = 1 the exact split infimum is attached for calibration.
    """
    if not t > 0.0:
        raise DomainError("t must be positive")
    lower = modulus(space, f, t, spec, alpha)
    top = 2.0 * space.diameter
    j_cut = max(0, math.ceil(math.log2(top / t))) if t < top else 0
    total = 0.0
    for j in range(j_cut):
        total += 2.0 ** (-j * alpha) * modulus(space, f, (2.0**j) * t, spec, alpha) ** alpha
    tail_e = modulus(space, f, max(top, t) + 1.0, spec, alpha)
    total += 2.0 ** (-j_cut * alpha) * tail_e**alpha / (1.0 - 2.0 ** (-alpha))
    upper = total ** (1.0 / alpha)
    exact = None
    if spec.family == "lp" and spec.p == 1.0 and spec.convexify_power == 1.0 and alpha == 1.0:
        exact = k_functional_l1(space, f, t)
    return KBounds(t=t, lower=lower, upper=upper, exact=exact)
