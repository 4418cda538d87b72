"""Finitely supported measures, measure families, and integrability certificates.

A DiscreteMeasure is a finite set of support points in R^d with nonnegative
weights.  A MeasureFamily bundles several measures with one dominating
measure (the uniform average of the members over the union support) together
with the pointwise densities of each member.  The de la Vallee Poussin style
certificate records, for one candidate Young function psi, the gauge norms of
all member densities and their supremum; a finite supremum witnesses uniform
integrability of the family relative to psi.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .box import Box
from .errors import AbsoluteContinuityError, ValidationError
from .young import YoungFunction, entropy, is_structural_n_function, power

_DENSITY_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        w = np.asarray(self.weights, dtype=np.float64).ravel()
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValidationError("a measure needs a nonempty 2-d point array")
        if pts.shape[0] != w.shape[0]:
            raise ValidationError("points and weights must have equal length")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("support points must be finite")
        if not np.all(np.isfinite(w)) or np.any(w < 0.0):
            raise ValidationError("weights must be finite and nonnegative")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def support_size(self) -> int:
        return self.points.shape[0]

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def point_index(self) -> dict:
        return {self.points[i].tobytes(): i for i in range(self.support_size)}

    def to_json_dict(self) -> dict:
        return {"dim": self.dimension, "points": self.points.tolist(),
                "weights": self.weights.tolist()}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "DiscreteMeasure":
        if not isinstance(obj, dict) or set(obj) != {"dim", "points", "weights"}:
            raise ValidationError("measure object needs exactly dim, points, weights")
        pts = np.asarray(obj["points"], dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != int(obj["dim"]):
            raise ValidationError("measure points do not match the declared dim")
        return make_discrete(pts, np.asarray(obj["weights"], dtype=np.float64))


def make_discrete(points, weights) -> DiscreteMeasure:
    """Canonical measure: duplicates merged, zero weights dropped, points sorted."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    w = np.asarray(weights, dtype=np.float64).ravel()
    if pts.ndim != 2:
        raise ValidationError("points must form a 1-d or 2-d array")
    if pts.shape[0] != w.shape[0]:
        raise ValidationError("points and weights must have equal length")
    if np.any(~np.isfinite(w)) or np.any(w < 0.0):
        raise ValidationError("weights must be finite and nonnegative")
    keep = w > 0.0
    pts, w = pts[keep], w[keep]
    if pts.shape[0] == 0:
        raise ValidationError("measure has empty support after dropping zero weights")
    uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
    merged = np.zeros(uniq.shape[0])
    np.add.at(merged, inverse, w)
    return DiscreteMeasure(uniq, merged)


_SAMPLER_NAMES = ("uniform", "gaussian", "mixture")
_REJECTION_ROUNDS = 1000


def _draw_gaussian(rng: np.random.Generator, n: int, mean, std, box: Box) -> np.ndarray:
    mean = np.broadcast_to(np.asarray(mean, dtype=np.float64), (box.dim,))
    std = np.broadcast_to(np.asarray(std, dtype=np.float64), (box.dim,))
    if np.any(std <= 0.0):
        raise ValidationError("gaussian std must be positive")
    out = np.empty((0, box.dim))
    for _ in range(_REJECTION_ROUNDS):
        cand = mean + std * rng.standard_normal((n, box.dim))
        cand = cand[box.contains(cand)]
        out = np.concatenate([out, cand])
        if out.shape[0] >= n:
            return out[:n]
    raise ValidationError("gaussian sampler kept missing the clip box")


def sample_empirical(density_spec, n: int, seed: int, clip_box: Box) -> DiscreteMeasure:
    """n equally weighted points drawn inside clip_box from a named sampler.

    density_spec is either a sampler name or a dict with a name key plus
    sampler parameters: gaussian takes mean and std, mixture takes a
    components list of {weight, mean, std} dicts.
    """
    if n < 1:
        raise ValidationError("sample size must be positive")
    spec = {"name": density_spec} if isinstance(density_spec, str) else dict(density_spec)
    name = spec.pop("name", None)
    if name not in _SAMPLER_NAMES:
        raise ValidationError(f"unknown sampler {name!r}; choose from {_SAMPLER_NAMES}")
    rng = np.random.default_rng(seed)
    d = clip_box.dim
    if name == "uniform":
        if spec:
            raise ValidationError(f"uniform sampler takes no parameters, got {sorted(spec)}")
        pts = clip_box.sample(rng, n)
    elif name == "gaussian":
        mean = spec.pop("mean", 0.5 * (clip_box.lo + clip_box.hi))
        std = spec.pop("std", 0.25 * (clip_box.hi - clip_box.lo))
        if spec:
            raise ValidationError(f"unknown gaussian parameters {sorted(spec)}")
        pts = _draw_gaussian(rng, n, mean, std, clip_box)
    else:
        comps = spec.pop("components", None)
        if spec or not comps:
            raise ValidationError("mixture sampler needs a nonempty components list")
        probs = np.array([float(c["weight"]) for c in comps])
        if np.any(probs <= 0.0):
            raise ValidationError("mixture component weights must be positive")
        probs = probs / probs.sum()
        means = [np.broadcast_to(np.asarray(c["mean"], dtype=np.float64), (d,)) for c in comps]
        stds = [np.broadcast_to(np.asarray(c["std"], dtype=np.float64), (d,)) for c in comps]
        pts = np.empty((0, d))
        for _ in range(_REJECTION_ROUNDS):
            idx = rng.choice(len(comps), size=n, p=probs)
            cand = np.empty((n, d))
            for k in range(len(comps)):
                sel = idx == k
                cand[sel] = means[k] + stds[k] * rng.standard_normal((int(sel.sum()), d))
            cand = cand[clip_box.contains(cand)]
            pts = np.concatenate([pts, cand])
            if pts.shape[0] >= n:
                pts = pts[:n]
                break
        else:
            raise ValidationError("mixture sampler kept missing the clip box")
    return make_discrete(pts, np.full(n, 1.0 / n))


def dominating_measure(members) -> DiscreteMeasure:
    """Uniform average of the members over the union of their supports."""
    members = list(members)
    if not members:
        raise ValidationError("need at least one member measure")
    dims = {m.dimension for m in members}
    if len(dims) != 1:
        raise ValidationError("member measures must share one dimension")
    pts = np.concatenate([m.points for m in members])
    w = np.concatenate([m.weights / len(members) for m in members])
    return make_discrete(pts, w)


def radon_nikodym(nu: DiscreteMeasure, mu: DiscreteMeasure) -> np.ndarray:
    """Density d(nu)/d(mu) aligned with mu.points; zero off the support of nu."""
    if nu.dimension != mu.dimension:
        raise ValidationError("measures must share one dimension")
    index = mu.point_index()
    density = np.zeros(mu.support_size)
    for i in range(nu.support_size):
        j = index.get(nu.points[i].tobytes())
        if j is None:
            raise AbsoluteContinuityError(
                f"point {nu.points[i].tolist()} carries nu-mass but no mu-mass")
        density[j] = nu.weights[i] / mu.weights[j]
    return density


@dataclass(frozen=True, eq=False)
class MeasureFamily:
    members: tuple
    dominating: DiscreteMeasure
    densities: tuple

    def __post_init__(self):
        members = tuple(self.members)
        densities = tuple(np.asarray(d, dtype=np.float64) for d in self.densities)
        if len(members) == 0 or len(members) != len(densities):
            raise ValidationError("family needs matching members and densities")
        mu = self.dominating
        index = mu.point_index()
        for nu, dens in zip(members, densities):
            if dens.shape != (mu.support_size,):
                raise ValidationError("density must align with the dominating support")
            if np.any(dens < 0.0) or np.any(~np.isfinite(dens)):
                raise ValidationError("densities must be finite and nonnegative")
            for i in range(nu.support_size):
                j = index.get(nu.points[i].tobytes())
                if j is None:
                    raise AbsoluteContinuityError(
                        "member support escapes the dominating measure")
                lhs = nu.weights[i]
                rhs = dens[j] * mu.weights[j]
                if abs(lhs - rhs) > _DENSITY_RTOL * max(abs(lhs), 1e-300):
                    raise ValidationError("density does not reproduce the member mass")
        for d in densities:
            d.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "densities", densities)

    @classmethod
    def from_members(cls, members) -> "MeasureFamily":
        members = tuple(members)
        mu = dominating_measure(members)
        densities = tuple(radon_nikodym(nu, mu) for nu in members)
        return cls(members, mu, densities)

    @property
    def size(self) -> int:
        return len(self.members)

    def to_json_dict(self) -> dict:
        return {"dominating": self.dominating.to_json_dict(),
                "members": [m.to_json_dict() for m in self.members],
                "densities": [d.tolist() for d in self.densities]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "MeasureFamily":
        if not isinstance(obj, dict) or "members" not in obj:
            raise ValidationError("family object needs a members list")
        extra = set(obj) - {"members", "dominating", "densities"}
        if extra:
            raise ValidationError(f"unknown keys in family object: {sorted(extra)}")
        members = [DiscreteMeasure.from_json_dict(m) for m in obj["members"]]
        if "dominating" in obj and "densities" in obj:
            return cls(tuple(members),
                       DiscreteMeasure.from_json_dict(obj["dominating"]),
                       tuple(np.asarray(d, dtype=np.float64) for d in obj["densities"]))
        return cls.from_members(members)


@dataclass(frozen=True)
class DlvpCertificate:
    psi: YoungFunction
    per_member_norms: np.ndarray = field(repr=False)
    sup_norm: float = 0.0


def default_psi_candidates() -> list[YoungFunction]:
    return [power(2.0, 0.5), power(1.5, 1.0 / 1.5), power(3.0, 1.0 / 3.0), entropy()]


def dlvp_certificate(family: MeasureFamily, psi_candidates=None) -> DlvpCertificate:
    """First candidate psi whose density gauge norms have a finite supremum.

    Candidates must be N-functions; cataloged kinds are checked structurally
    and power with p = 1 is refused.
    """
    from .orlicz import FunctionTable, gauge_norm

    candidates = list(psi_candidates) if psi_candidates is not None else default_psi_candidates()
    if not candidates:
        raise ValidationError("need at least one candidate psi")
    for psi in candidates:
        verdict = is_structural_n_function(psi)
        if verdict is False:
            raise ValidationError(f"candidate {psi.kind} with p={psi.p} is not an N-function")
    for psi in candidates:
        norms = np.array([
            gauge_norm(psi, family.dominating, FunctionTable.from_values(d)).value
            for d in family.densities
        ])
        sup = float(np.max(norms))
        if np.isfinite(sup):
            return DlvpCertificate(psi, norms, sup)
    raise ValidationError("no candidate psi produced a finite supremum")
