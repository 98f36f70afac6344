"""Rearrangement-invariant quasi-norm families and fundamental functions.

Supported families (all evaluated exactly on step functions, with 1-D
quadrature only where a log weight appears):

  lp(p)                      (int (f*)^p dt)^(1/p); p = inf gives the sup
  lorentz(p, q)              (int (t^(1/p) f*)^q dt/t)^(1/q); q = inf sup form
  lorentz_zygmund(p, r, b)   adds the (1 + ln+ 1/t)^b factor
  lambda_w(q, w)             (int (f*)^q w(t) dt)^(1/q), w a power-log preset
  marcinkiewicz(phi)         sup (phi(t)/t) int_0^t f*
  marcinkiewicz_tilde(phi)   sup phi(t) f*(t)
  orlicz(Phi)                inf {lam : int Phi(|f|/lam) dmu <= 1}

A spec may carry a convexification power r, denoting the space of f with
|f|^r in the base family, quasi-normed by the base norm of |f|^r to the 1/r.
Families with exact power algebra (lp, lorentz, lorentz_zygmund, lambda_w,
marcinkiewicz_tilde) normalize the power into their parameters; the others
keep it symbolic and apply it at evaluation time.

Suprema of infinite-exponent norms live on step breakpoints plus interior
critical points of the weight; each evaluator enumerates exactly those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, EvaluationError, SymbolicAnalysisError
from .rearrange import StepDecreasing, rearrangement
from .space import Space
from .weights import OrliczFunction, PowerLog, bounded_max_search

_NORMALIZABLE = {"lp", "lorentz", "lorentz_zygmund", "lambda_w", "marcinkiewicz_tilde"}


@dataclass(frozen=True)
class RISpaceSpec:
    family: str
    p: float | None = None
    q: float | None = None
    beta: float | None = None
    weight: PowerLog | None = None
    orlicz_fn: OrliczFunction | None = None
    convexify_power: float = 1.0

    def __post_init__(self):
        if not self.convexify_power > 0.0:
            raise DomainError("convexification power must be positive")

    def label(self) -> str:
        base = {
            "lp": lambda: f"L^{_fmt(self.p)}",
            "lorentz": lambda: f"L^{{{_fmt(self.p)},{_fmt(self.q)}}}",
            "lorentz_zygmund": lambda: f"L^{{{_fmt(self.p)},{_fmt(self.q)}}}(log)^{_fmt(self.beta)}",
            "lambda_w": lambda: f"Lambda^{_fmt(self.q)}(w)",
            "marcinkiewicz": lambda: "M_phi",
            "marcinkiewicz_tilde": lambda: "Mt_phi",
            "orlicz": lambda: f"Orlicz[{self.orlicz_fn.kind},{_fmt(self.orlicz_fn.p)}]",
        }[self.family]()
        if self.convexify_power != 1.0:
            base += f"^({_fmt(self.convexify_power)})"
        return base

    def to_json(self) -> dict:
        out: dict = {"family": self.family}
        if self.family in ("lp", "lorentz", "lorentz_zygmund"):
            out["p"] = _num_out(self.p)
        if self.family == "lorentz":
            out["q"] = _num_out(self.q)
        if self.family == "lorentz_zygmund":
            out["r"] = _num_out(self.q)
            out["beta"] = self.beta
        if self.family == "lambda_w":
            out["q"] = _num_out(self.q)
            out["w"] = self.weight.to_json()
        if self.family in ("marcinkiewicz", "marcinkiewicz_tilde"):
            out["phi"] = self.weight.to_json()
        if self.family == "orlicz":
            out["Phi"] = self.orlicz_fn.to_json()
        if self.convexify_power != 1.0:
            out["convexify"] = self.convexify_power
        return out


def _fmt(x) -> str:
    if x is None:
        return "?"
    if math.isinf(x):
        return "inf"
    return f"{x:g}"


def _num_out(x):
    return "inf" if (x is not None and math.isinf(x)) else x


def _num_in(x) -> float:
    return math.inf if x in ("inf", None) else float(x)


def spec_from_json(obj: dict) -> RISpaceSpec:
    fam = obj["family"]
    conv = float(obj.get("convexify", 1.0))
    if fam == "lp":
        spec = lp(_num_in(obj["p"]))
    elif fam == "lorentz":
        spec = lorentz(float(obj["p"]), _num_in(obj["q"]))
    elif fam == "lorentz_zygmund":
        spec = lorentz_zygmund(float(obj["p"]), _num_in(obj["r"]), float(obj["beta"]))
    elif fam == "lambda_w":
        spec = lambda_w(float(obj["q"]), PowerLog.from_json(obj["w"]))
    elif fam == "marcinkiewicz":
        spec = marcinkiewicz(PowerLog.from_json(obj["phi"]))
    elif fam == "marcinkiewicz_tilde":
        spec = marcinkiewicz_tilde(PowerLog.from_json(obj["phi"]))
    elif fam == "orlicz":
        spec = orlicz(OrliczFunction.from_json(obj["Phi"]))
    else:
        raise DomainError(f"unknown family {fam!r}")
    return spec if conv == 1.0 else convexify(spec, conv)


# -- constructors ----------------------------------------------------------------


def lp(p: float) -> RISpaceSpec:
    if not p > 0.0:
        raise DomainError("lp exponent must be positive")
    return RISpaceSpec("lp", p=p)


def lorentz(p: float, q: float) -> RISpaceSpec:
    if not (p > 0.0 and q > 0.0):
        raise DomainError("lorentz exponents must be positive")
    return RISpaceSpec("lorentz", p=p, q=q)


def lorentz_zygmund(p: float, r: float, beta: float) -> RISpaceSpec:
    if not (p > 0.0 and r > 0.0):
        raise DomainError("lorentz_zygmund exponents must be positive")
    return RISpaceSpec("lorentz_zygmund", p=p, q=r, beta=float(beta))


def lambda_w(q: float, w: PowerLog) -> RISpaceSpec:
    if not (q > 0.0 and math.isfinite(q)):
        raise DomainError("lambda_w exponent must be positive finite")
    return RISpaceSpec("lambda_w", q=q, weight=w)


def _check_phi(phi: PowerLog) -> PowerLog:
    # phi must vanish at 0+, increase, and have phi(t)/t decreasing
    if not phi.bounded_at_zero() or phi.limit_at_zero() != 0.0:
        raise DomainError("Marcinkiewicz phi must vanish at 0+")
    ts = np.geomspace(1e-10, 1e4, 120)
    vals = np.asarray(phi(ts))
    if np.any(np.diff(vals) < -1e-13 * vals[:-1]):
        raise DomainError("Marcinkiewicz phi must be nondecreasing")
    ratio = vals / ts
    if np.any(np.diff(ratio) > 1e-13 * ratio[:-1]):
        raise DomainError("Marcinkiewicz phi/t must be nonincreasing (quasi-concavity)")
    return phi


def marcinkiewicz(phi: PowerLog) -> RISpaceSpec:
    return RISpaceSpec("marcinkiewicz", weight=_check_phi(phi))


def marcinkiewicz_tilde(phi: PowerLog) -> RISpaceSpec:
    return RISpaceSpec("marcinkiewicz_tilde", weight=_check_phi(phi))


def orlicz(phi_fn: OrliczFunction) -> RISpaceSpec:
    return RISpaceSpec("orlicz", orlicz_fn=phi_fn)


# -- convexification ---------------------------------------------------------------


def convexify(spec: RISpaceSpec, r: float) -> RISpaceSpec:
    """The r-convexification: |f|^r measured in the base space, to the 1/r.

    Exact exponent algebra folds r into the parameters of the lp / lorentz /
    lorentz_zygmund / lambda_w / marcinkiewicz_tilde families; the remaining
    families compose the power multiplicatively.
    """
    if not r > 0.0:
        raise DomainError("convexification power must be positive")
    if r == 1.0:
        return spec
    fam = spec.family
    if fam == "lp":
        return lp(spec.p * r) if math.isfinite(spec.p) else spec
    if fam == "lorentz":
        return lorentz(spec.p * r, spec.q * r if math.isfinite(spec.q) else math.inf)
    if fam == "lorentz_zygmund":
        return lorentz_zygmund(spec.p * r,
                               spec.q * r if math.isfinite(spec.q) else math.inf,
                               spec.beta / r)
    if fam == "lambda_w":
        return lambda_w(spec.q * r, spec.weight)
    if fam == "marcinkiewicz_tilde":
        return marcinkiewicz_tilde(spec.weight ** (1.0 / r))
    return replace(spec, convexify_power=spec.convexify_power * r)


# -- norm evaluation ---------------------------------------------------------------


def _norm_lp(p: float, fstar: StepDecreasing) -> float:
    if math.isinf(p):
        return float(fstar.values[0])
    return fstar.power(p).integral(fstar.mass) ** (1.0 / p)


def _norm_lorentz(p: float, q: float, fstar: StepDecreasing) -> float:
    bp = np.concatenate([[0.0], fstar.breakpoints])
    if math.isinf(q):
        return float(np.max(fstar.values * fstar.breakpoints ** (1.0 / p)))
    terms = fstar.values**q * np.diff(bp ** (q / p))
    return float((terms.sum() * p / q) ** (1.0 / q))


def _panel_edges(fstar: StepDecreasing):
    return np.concatenate([[0.0], fstar.breakpoints])


def _norm_lorentz_zygmund(p: float, r: float, beta: float, fstar: StepDecreasing) -> float:
    edges = _panel_edges(fstar)
    base = PowerLog(1.0 / p, beta)
    if math.isinf(r):
        best = 0.0
        for i, v in enumerate(fstar.values):
            if v > 0.0:
                best = max(best, v * base.sup_on(edges[i], edges[i + 1]))
        return best
    powered = base**r
    total = 0.0
    for i, v in enumerate(fstar.values):
        if v > 0.0:
            total += v**r * powered.integral_dt_over_t(edges[i], edges[i + 1])
    return total ** (1.0 / r)


def _norm_lambda_w(q: float, w: PowerLog, fstar: StepDecreasing) -> float:
    edges = _panel_edges(fstar)
    total = 0.0
    for i, v in enumerate(fstar.values):
        if v > 0.0:
            total += v**q * w.integral_dt(edges[i], edges[i + 1])
    return total ** (1.0 / q)


def _norm_marcinkiewicz(phi, fstar: StepDecreasing) -> float:
    """sup over (0, mass] of (phi(t)/t) int_0^t f*; interior maxima per panel."""
    edges = _panel_edges(fstar)
    prefix = np.concatenate([[0.0], np.cumsum(fstar.values * np.diff(edges))])
    best = 0.0
    pure_power = isinstance(phi, PowerLog) and phi.is_pure_power()
    for i, v in enumerate(fstar.values):
        lo, hi = edges[i], edges[i + 1]
        intercept = prefix[i] - v * lo  # int_0^t f* = intercept + v t on the panel
        fn = lambda t: float(phi(t)) / t * (intercept + v * t)
        best = max(best, fn(hi))
        if pure_power:
            gamma = phi.a
            if 0.0 < gamma < 1.0 and v > 0.0 and intercept > 0.0:
                t_star = (1.0 - gamma) * intercept / (gamma * v)
                if lo < t_star < hi:
                    best = max(best, fn(t_star))
        else:
            best = max(best, bounded_max_search(fn, max(lo, hi * 1e-12), hi, n_grid=48))
    return best


def _norm_marcinkiewicz_tilde(phi, fstar: StepDecreasing) -> float:
    return float(max(v * float(phi(t)) for v, t in zip(fstar.values, fstar.breakpoints)))


def _norm_orlicz(fn: OrliczFunction, fstar: StepDecreasing) -> float:
    widths = np.diff(_panel_edges(fstar))

    def budget(lam: float) -> float:
        return float(np.sum(fn(fstar.values / lam) * widths))

    hi = float(fstar.values[0])
    for _ in range(400):
        if budget(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise EvaluationError("Orlicz norm: bracket expansion failed (upper)")
    lo = hi
    for _ in range(400):
        if budget(lo) >= 1.0:
            break
        lo *= 0.5
    else:
        raise EvaluationError("Orlicz norm: bracket expansion failed (lower)")
    if lo == hi:
        return lo
    return brentq(lambda lam: budget(lam) - 1.0, lo, hi, rtol=1e-12, maxiter=300)


def quasi_norm(spec: RISpaceSpec, fstar: StepDecreasing) -> float:
    """Evaluate the spec's quasi-norm on a rearranged step function."""
    if float(fstar.values.max()) == 0.0:
        return 0.0
    r = spec.convexify_power
    base = fstar if r == 1.0 else fstar.power(r)
    fam = spec.family
    if fam == "lp":
        val = _norm_lp(spec.p, base)
    elif fam == "lorentz":
        val = _norm_lorentz(spec.p, spec.q, base)
    elif fam == "lorentz_zygmund":
        val = _norm_lorentz_zygmund(spec.p, spec.q, spec.beta, base)
    elif fam == "lambda_w":
        val = _norm_lambda_w(spec.q, spec.weight, base)
    elif fam == "marcinkiewicz":
        val = _norm_marcinkiewicz(spec.weight, base)
    elif fam == "marcinkiewicz_tilde":
        val = _norm_marcinkiewicz_tilde(spec.weight, base)
    elif fam == "orlicz":
        val = _norm_orlicz(spec.orlicz_fn, base)
    else:
        raise DomainError(f"unknown family {fam!r}")
    return val ** (1.0 / r) if r != 1.0 else val


def quasi_norm_of(spec: RISpaceSpec, space: Space, f) -> float:
    return quasi_norm(spec, rearrangement(space, f))


def indicator_step(mass: float) -> StepDecreasing:
    if not mass > 0.0:
        raise DomainError("indicator mass must be positive")
    return StepDecreasing(np.array([mass]), np.array([1.0]))


# -- fundamental functions -----------------------------------------------------------


def fundamental_function(spec: RISpaceSpec, t: float) -> float:
    """Quasi-norm of an indicator of mass t (closed forms where they exist)."""
    if not t > 0.0:
        raise DomainError(f"fundamental function needs t > 0, got {t}")
    r = spec.convexify_power
    fam = spec.family
    if fam == "lp":
        val = 1.0 if math.isinf(spec.p) else t ** (1.0 / spec.p)
    elif fam == "lorentz":
        if math.isinf(spec.q):
            val = t ** (1.0 / spec.p)
        else:
            val = (spec.p / spec.q) ** (1.0 / spec.q) * t ** (1.0 / spec.p)
    elif fam in ("marcinkiewicz", "marcinkiewicz_tilde"):
        val = float(spec.weight(t))
    elif fam == "lambda_w":
        val = spec.weight.integral_dt(0.0, t) ** (1.0 / spec.q)
    elif fam == "orlicz":
        val = 1.0 / spec.orlicz_fn.inverse(1.0 / t)
    else:
        val = quasi_norm(replace(spec, convexify_power=1.0), indicator_step(t))
    return val ** (1.0 / r) if r != 1.0 else val


def fundamental_dual(spec: RISpaceSpec, t: float) -> float:
    """t / phi(t): the fundamental function of the associate space."""
    return t / fundamental_function(spec, t)


def fundamental_powerlog(spec: RISpaceSpec) -> PowerLog:
    """Symbolic power-log form of the fundamental function.

    Exact for lp / lorentz / marcinkiewicz / lambda_w(power) / orlicz(power);
    the equivalent closed form (constants dropped) for lorentz_zygmund and
    log-weighted lambda_w.  Raises SymbolicAnalysisError for shapes with no
    supported form.
    """
    fam = spec.family
    if fam == "lp":
        base = PowerLog(0.0) if math.isinf(spec.p) else PowerLog(1.0 / spec.p)
    elif fam == "lorentz":
        const = 1.0 if math.isinf(spec.q) else (spec.p / spec.q) ** (1.0 / spec.q)
        base = PowerLog(1.0 / spec.p, const=const)
    elif fam == "lorentz_zygmund":
        base = PowerLog(1.0 / spec.p, spec.beta)
    elif fam in ("marcinkiewicz", "marcinkiewicz_tilde"):
        base = spec.weight
    elif fam == "lambda_w":
        w = spec.weight
        if w.a + 1.0 > 0.0:
            base = PowerLog((w.a + 1.0) / spec.q, w.b / spec.q, w.g / spec.q,
                            (w.const / (w.a + 1.0)) ** (1.0 / spec.q))
        elif w.a + 1.0 == 0.0 and w.b < -1.0 and w.g == 0.0:
            base = PowerLog(0.0, (w.b + 1.0) / spec.q, 0.0,
                            (w.const / (-w.b - 1.0)) ** (1.0 / spec.q))
        else:
            raise SymbolicAnalysisError("lambda_w weight has no power-log fundamental form")
    elif fam == "orlicz":
        if spec.orlicz_fn.kind == "power" and spec.orlicz_fn.b == 0.0:
            base = PowerLog(1.0 / spec.orlicz_fn.p)
        else:
            raise SymbolicAnalysisError("Orlicz preset has no power-log fundamental form")
    else:
        raise DomainError(f"unknown family {fam!r}")
    return base ** (1.0 / spec.convexify_power)


# -- derived Lorentz / Marcinkiewicz endpoints of a space --------------------------------


def lambda_endpoint_norm(spec: RISpaceSpec, fstar: StepDecreasing) -> float:
    """int f* d(phi_X): the Lorentz endpoint built from the fundamental function."""
    edges = _panel_edges(fstar)
    phis = np.array([0.0] + [fundamental_function(spec, t) for t in edges[1:]])
    return float(np.sum(fstar.values * np.diff(phis)))


def marcinkiewicz_endpoint_norm(spec: RISpaceSpec, fstar: StepDecreasing) -> float:
    """sup (phi_X(t)/t) int_0^t f*: the Marcinkiewicz endpoint of the space."""
    if float(fstar.values.max()) == 0.0:
        return 0.0
    return _norm_marcinkiewicz(lambda t: fundamental_function(spec, float(t)), fstar)


# -- convexity diagnostics ----------------------------------------------------------


def alpha_convexity_defect(spec: RISpaceSpec, alpha: float, samples, space: Space) -> float:
    """Empirical lower bound for the alpha-convexity constant.

    samples is a sequence of tuples of function vectors; for each tuple the
    ratio || (sum |f_j|^alpha)^(1/alpha) || / (sum ||f_j||^alpha)^(1/alpha)
    is computed and the max is returned.  Values above 1 witness failure of
    the triangle-type inequality at this alpha.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError("alpha must lie in (0, 1]")
    if not samples:
        raise DomainError("need at least one sample tuple")
    worst = 0.0
    for tup in samples:
        stack = np.stack([np.abs(np.asarray(f, dtype=float)) for f in tup])
        combined = (np.sum(stack**alpha, axis=0)) ** (1.0 / alpha)
        num = quasi_norm(spec, rearrangement(space, combined))
        den = sum(quasi_norm(spec, rearrangement(space, f)) ** alpha for f in tup) ** (1.0 / alpha)
        if den > 0.0:
            worst = max(worst, num / den)
    return worst
