"""Independent brute-force oracles used to freeze expected test values.

Nothing here may call the evaluation paths it is used to check: rearrangement
values come from the inf-formula on a grid, norms from dense-grid sups or
generic quadrature, LP optima from exhaustive vertex enumeration, derivatives
from central differences.
"""

import itertools

import numpy as np
from scipy.integrate import quad


def distribution_mass(f, weights, level):
    """mu{|f| > level} directly from the definition."""
    f = np.abs(np.asarray(f, dtype=float))
    return float(np.asarray(weights)[f > level].sum())


def rearrangement_inf_formula(f, weights, t):
    """f*(t) = inf{s >= 0 : mu{|f| > s} <= t}, evaluated by scanning levels."""
    f = np.abs(np.asarray(f, dtype=float))
    levels = np.unique(np.concatenate([[0.0], f]))
    for s in levels:
        if distribution_mass(f, weights, s) <= t:
            return float(s)
    return float(levels[-1])


def step_eval(breakpoints, values, t):
    idx = np.searchsorted(breakpoints, t, side="right")
    return 0.0 if idx >= len(values) else float(values[idx])


def quad_average(fn, t, pieces):
    """(1/t) int_0^t fn by piecewise quadrature with given internal nodes."""
    nodes = [0.0] + sorted(x for x in pieces if 0.0 < x < t) + [t]
    total = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        val, _ = quad(fn, a, b, limit=200)
        total += val
    return total / t


def product_step_integral(bp1, v1, bp2, v2):
    """int of the product of two step functions over [0, min mass]."""
    edges = np.unique(np.concatenate([[0.0], bp1, bp2]))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = (a + b) / 2.0
        total += step_eval(bp1, v1, mid) * step_eval(bp2, v2, mid) * (b - a)
    return total


def dense_grid_doubling(space, n_grid=10_000):
    """Doubling-constant lower bound from a dense radius grid."""
    top = space.diameter * 1.05 + 1e-9
    best = 1.0
    for r in np.linspace(top / n_grid, top, n_grid):
        m1 = space.ball_masses(float(r))
        m2 = space.ball_masses(2.0 * float(r))
        best = max(best, float((m2 / m1).max()))
    return best


def lp_vertex_minimum(c, a_ub, b_ub, n_nonneg):
    """Exhaustive vertex enumeration for min c.x s.t. a_ub x >= b_ub, x >= 0.

    All variables nonnegative; constraint rows are 'greater-equal'.  Returns
    the optimal value (objective is bounded below by 0 for c >= 0).
    """
    c = np.asarray(c, dtype=float)
    a_ub = np.asarray(a_ub, dtype=float)
    b_ub = np.asarray(b_ub, dtype=float)
    n = c.size
    rows = [(a_ub[k], b_ub[k]) for k in range(a_ub.shape[0])]
    rows += [(np.eye(n)[j], 0.0) for j in range(n_nonneg)]
    best = np.inf
    for combo in itertools.combinations(range(len(rows)), n):
        mat = np.stack([rows[k][0] for k in combo])
        rhs = np.array([rows[k][1] for k in combo])
        if abs(np.linalg.det(mat)) < 1e-12:
            continue
        x = np.linalg.solve(mat, rhs)
        if np.any(x < -1e-9):
            continue
        if np.all(a_ub @ x >= b_ub - 1e-9):
            best = min(best, float(c @ x))
    return best


def hajlasz_vertex_oracle(space, f):
    """Gradient-seminorm optimum by vertex enumeration (n <= 4 instances)."""
    f = np.asarray(f, dtype=float)
    n = space.n
    rows, rhs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            target = abs(f[i] - f[j]) / space.dist[i, j]
            if target > 0.0:
                row = np.zeros(n)
                row[i] = row[j] = 1.0
                rows.append(row)
                rhs.append(target)
    if not rows:
        return 0.0
    return lp_vertex_minimum(space.weight, np.stack(rows), np.array(rhs), n)


def numeric_derivative(fn, t, h_rel=1e-5):
    h = t * h_rel
    return (fn(t + h) - fn(t - h)) / (2.0 * h)


def dense_sup(fn, lo, hi, n=200_000):
    ts = np.geomspace(lo, hi, n)
    return float(max(fn(t) for t in ts))
