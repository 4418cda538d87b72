"""Candidate approximators: random-feature least squares and exact 1-d interpolation.

The fitter draws hidden features deterministically from a seed, one child
seed stream per feature, so the features for width w are a prefix of the
features for any larger width.  Readouts solve a ridge-regularized weighted
least-squares problem on the support of the measure.  Nothing here optimizes
a gauge norm directly; gauge errors are evaluated after the fact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import FitSolverError, ValidationError
from .measure import DiscreteMeasure
from .net import Layer, Network, _apply_activation
from .orlicz import FunctionTable, gauge_norm, l1_norm

_FIT_ACTS = ("relu", "sigmoid", "tanh")
_DEFAULT_RIDGE = 1e-10


@dataclass(frozen=True, eq=False)
class TargetFunction:
    """A named vector field with an optional declared sup-norm bound."""

    name: str
    dim: int
    out_dim: int
    fn: object
    bound: float | None = None

    def __post_init__(self):
        if self.dim < 1 or self.out_dim < 1:
            raise ValidationError("target dimensions must be positive")
        if self.bound is not None and not (self.bound > 0.0 and math.isfinite(self.bound)):
            raise ValidationError("a declared bound must be finite and positive")

    def evaluate(self, X) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if pts.shape[1] != self.dim:
            raise ValidationError("target input dimension mismatch")
        out = np.asarray(self.fn(pts), dtype=np.float64)
        if out.ndim == 1:
            out = out.reshape(-1, 1)
        if out.shape != (pts.shape[0], self.out_dim):
            raise ValidationError("target output shape mismatch")
        if not np.all(np.isfinite(out)):
            raise ValidationError("target produced non-finite values")
        return out


def sin_product(dim: int = 1, frequency: float = 1.0) -> TargetFunction:
    """prod_i sin(2 pi frequency x_i); bounded by 1."""
    def fn(X):
        return np.prod(np.sin(2.0 * np.pi * frequency * X), axis=1)
    return TargetFunction("sin_product", dim, 1, fn, bound=1.0)


def gaussian_blob(dim: int = 1, center=None, sigma: float = 0.25) -> TargetFunction:
    if not (sigma > 0.0):
        raise ValidationError("blob width must be positive")
    c = np.full(dim, 0.5) if center is None else np.asarray(center, dtype=np.float64)
    if c.shape != (dim,):
        raise ValidationError("blob center dimension mismatch")
    def fn(X):
        d2 = np.sum((X - c) ** 2, axis=1)
        return np.exp(-d2 / (2.0 * sigma * sigma))
    return TargetFunction("gaussian_blob", dim, 1, fn, bound=1.0)


def smooth_step(dim: int = 1, rate: float = 8.0, threshold: float = 0.5) -> TargetFunction:
    """Logistic ramp in the first coordinate; bounded by 1."""
    if not (rate > 0.0):
        raise ValidationError("step rate must be positive")
    def fn(X):
        return 1.0 / (1.0 + np.exp(-rate * (X[:, 0] - threshold)))
    return TargetFunction("smooth_step", dim, 1, fn, bound=1.0)


def constant(dim: int = 1, value: float = 1.0) -> TargetFunction:
    def fn(X):
        return np.full(X.shape[0], float(value))
    bound = abs(float(value)) if value != 0.0 else None
    return TargetFunction("constant", dim, 1, fn, bound=bound)


def from_table(mu: DiscreteMeasure, values, bound: float | None = None) -> TargetFunction:
    """Lookup target defined only on the support of mu."""
    table = FunctionTable.from_values(values)
    if table.length != mu.support_size:
        raise ValidationError("table length disagrees with the support size")
    index = mu.point_index()
    vals = table.values

    def fn(X):
        rows = []
        for row in np.atleast_2d(np.asarray(X, dtype=np.float64)):
            key = np.ascontiguousarray(row).tobytes()
            if key not in index:
                raise ValidationError("table target evaluated off the support")
            rows.append(vals[index[key]])
        return np.vstack(rows)

    return TargetFunction("table", mu.dimension, table.output_dim, fn, bound=bound)


_TARGET_BUILDERS = {
    "sin_product": sin_product,
    "gaussian_blob": gaussian_blob,
    "smooth_step": smooth_step,
    "constant": constant,
}


def make_target(spec: dict) -> TargetFunction:
    if not isinstance(spec, dict) or "name" not in spec:
        raise ValidationError("target spec needs a name")
    params = dict(spec)
    name = params.pop("name")
    if name not in _TARGET_BUILDERS:
        raise ValidationError(f"unknown target {name!r}")
    try:
        return _TARGET_BUILDERS[name](**params)
    except TypeError as exc:
        raise ValidationError(f"bad parameters for target {name!r}: {exc}") from None


def _support_box(mu: DiscreteMeasure):
    return np.min(mu.points, axis=0), np.max(mu.points, axis=0)


def draw_features(dim: int, width: int, seed: int, lo, hi):
    """Standard normal weights; each kink anchored uniformly inside [lo, hi].

    Feature k is drawn from child stream k of the seed, so widening the
    draw extends it without disturbing earlier features.
    """
    W = np.empty((width, dim))
    b = np.empty(width)
    children = np.random.SeedSequence(seed).spawn(width)
    for k in range(width):
        rng = np.random.default_rng(children[k])
        W[k] = rng.standard_normal(dim)
        anchor = rng.uniform(lo, hi)
        b[k] = -float(W[k] @ anchor)
    return W, b


def fit_random_features(f: TargetFunction, mu: DiscreteMeasure, width: int,
                        activation: str = "relu", seed: int = 0,
                        ridge: float = _DEFAULT_RIDGE) -> Network:
    """Weighted ridge least squares of f on random features over support(mu).

    The intercept column is always included and lands in the readout bias.
    """
    if width < 1:
        raise ValidationError("width must be at least 1")
    if activation not in _FIT_ACTS:
        raise ValidationError(f"activation must be one of {_FIT_ACTS}")
    if not (ridge >= 0.0):
        raise ValidationError("ridge must be nonnegative")
    if f.dim != mu.dimension:
        raise ValidationError("target and measure dimensions disagree")
    lo, hi = _support_box(mu)
    W, b = draw_features(mu.dimension, width, seed, lo, hi)
    X = mu.points
    Phi = _apply_activation(activation, X @ W.T + b)
    Phi = np.hstack([Phi, np.ones((X.shape[0], 1))])
    Y = f.evaluate(X)
    wts = mu.weights
    G = Phi.T @ (Phi * wts[:, None])
    G[np.diag_indices_from(G)] += ridge
    rhs = Phi.T @ (Y * wts[:, None])
    try:
        cf = scipy.linalg.cho_factor(G)
        coef = scipy.linalg.cho_solve(cf, rhs)
    except np.linalg.LinAlgError as exc:
        raise FitSolverError(f"singular normal equations; set ridge > 0 ({exc})") from None
    except scipy.linalg.LinAlgError as exc:
        raise FitSolverError(f"singular normal equations; set ridge > 0 ({exc})") from None
    readout = coef[:width].T
    bias = coef[width]
    return Network((Layer(W, b, activation), Layer(readout, bias, "none")))


def residual_table(f: TargetFunction, eta, mu: DiscreteMeasure) -> FunctionTable:
    return FunctionTable.from_values(f.evaluate(mu.points) - eta.evaluate_batch(mu.points))


def l2_residual(f: TargetFunction, eta, mu: DiscreteMeasure) -> float:
    r = residual_table(f, eta, mu).values
    return float(np.sqrt(np.sum(np.sum(r * r, axis=1) * mu.weights)))


def fit_grid_relu_1d(f: TargetFunction, a: float, b: float, knots: int) -> Network:
    """Piecewise-linear interpolant of f at equally spaced knots, as a ReLU net.

    Below the first knot the interpolant continues with the constant f(a);
    above the last knot it continues with the final segment's slope.
    """
    if f.dim != 1:
        raise ValidationError("grid interpolation needs a one-dimensional target")
    if knots < 2:
        raise ValidationError("need at least two knots")
    if not (a < b):
        raise ValidationError("need a < b")
    t = np.linspace(a, b, knots)
    v = f.evaluate(t.reshape(-1, 1))
    slopes = np.diff(v, axis=0) / np.diff(t)[:, None]
    coeffs = np.vstack([slopes[:1], np.diff(slopes, axis=0)])
    hidden = Layer(np.ones((knots - 1, 1)), -t[:-1], "relu")
    out = Layer(coeffs.T, v[0], "none")
    return Network((hidden, out))


@dataclass(frozen=True)
class CurveRow:
    width: int
    seed: int
    gauge_error: float
    l1_error: float


def approximation_curve(f: TargetFunction, mu: DiscreteMeasure, phi,
                        widths, activation: str = "relu", seeds=(0, 1, 2),
                        ridge: float = _DEFAULT_RIDGE,
                        norm_choice: str = "euclidean") -> list:
    """One row per (width, seed): gauge and L1 errors of the fitted residual."""
    rows = []
    for width in widths:
        for seed in seeds:
            eta = fit_random_features(f, mu, int(width), activation, int(seed), ridge)
            resid = residual_table(f, eta, mu)
            g = gauge_norm(phi, mu, resid, norm_choice=norm_choice).value
            l1 = l1_norm(mu, resid, norm_choice=norm_choice)
            rows.append(CurveRow(int(width), int(seed), g, l1))
    return rows


def curve_csv_rows(rows) -> tuple:
    """CSV form of a curve; the reserved fit_millis column is pinned to 0.

    A wall-clock column would make otherwise identical runs produce
    different bytes, so reproducibility wins and the column stays constant.
    """
    header = ("width", "seed", "gauge_error", "l1_error", "fit_millis")
    body = [(r.width, r.seed, r.gauge_error, r.l1_error, 0) for r in rows]
    return header, body
