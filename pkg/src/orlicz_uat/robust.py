"""Worst-case approximation over a finite family of measures.

The pipeline: pick a Young pair (phi_M, psi_M) so that every member density
has a finite psi_M gauge norm against the dominating measure, fit candidate
networks on a width/seed schedule, measure the supremum of per-member L1
errors, and certify the chain

    sup_nu ||f - eta||_{L1(nu)} <= 2 N_{phi_M}(f - eta) sup_nu N_{psi_M}(dnu/dmu_M)

which every produced report asserts unconditionally.  Success of a run means
the measured sup_l1 dropped below the configured epsilon; the certificate is
reported, not used as the stopping rule.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import serialize
from .box import Box
from .errors import HypothesisViolation, OrliczError, ValidationError
from .fit import TargetFunction, fit_random_features, make_target
from .measure import (DiscreteMeasure, MeasureFamily, dlvp_certificate,
                      sample_empirical)
from .net import (AffineFamily, AffineMap, FnnSpec, Network, RegisterNetwork,
                  _apply_activation, build_fnn, check_additive_family,
                  check_weight_compatibility, clip_and_localize,
                  fnn_to_network, quadratic_weight, quadratic_weight_scalar,
                  to_register_form, zero_network)
from .orlicz import FunctionTable, _point_norms, gauge_norm, l1_norm
from .young import YoungFunction, complementary, young_from_json

_CASES = ("i", "ii", "iii", "iv")
_DEFAULT_WIDTHS = (8, 16, 32, 64, 128)
_DEFAULT_SEEDS = (0, 1, 2)
_CHANGE_OF_MEASURE_RTOL = 1e-12
_HOLDER_SLACK = 1e-8


@dataclass(frozen=True)
class RobustReport:
    per_measure_l1: tuple
    sup_l1: float
    gauge_error: float
    density_norm_sup: float
    holder_rhs: float
    bound_holds: bool
    epsilon: float


def associated_young_pair(family: MeasureFamily, psi_candidates=None):
    """(phi_M, psi_M, certificate) with phi_M complementary to the chosen psi_M."""
    cert = dlvp_certificate(family, psi_candidates)
    return complementary(cert.psi), cert.psi, cert


def _residual_table(f: TargetFunction, eta, points) -> FunctionTable:
    return FunctionTable.from_values(f.evaluate(points) - eta.evaluate_batch(points))


def robust_error(family: MeasureFamily, f: TargetFunction, eta,
                 norm_choice: str = "euclidean"):
    """Per-member L1 errors of f - eta and their supremum."""
    per = np.array([
        l1_norm(nu, _residual_table(f, eta, nu.points), norm_choice)
        for nu in family.members
    ])
    return per, float(np.max(per))


def verify_robust_bound(family: MeasureFamily, phi_M: YoungFunction,
                        psi_M: YoungFunction, f: TargetFunction, eta,
                        epsilon: float = math.nan,
                        norm_choice: str = "euclidean",
                        gauge_tol: float = 1e-10) -> RobustReport:
    """Populate a report and hard-assert the generalized Holder chain.

    Also checks, per member, that the direct L1 error equals the
    density-weighted integral against the dominating measure.
    """
    mu = family.dominating
    resid = _residual_table(f, eta, mu.points)
    per, sup_l1 = robust_error(family, f, eta, norm_choice)
    norms = _point_norms(resid, norm_choice)
    for i, dens in enumerate(family.densities):
        via_density = float(np.sum(norms * dens * mu.weights))
        if abs(via_density - per[i]) > _CHANGE_OF_MEASURE_RTOL * max(per[i], 1e-300):
            raise OrliczError("change-of-measure identity failed for a member")
    gauge_error = gauge_norm(phi_M, mu, resid, tol=gauge_tol,
                             norm_choice=norm_choice).value
    density_norm_sup = max(
        gauge_norm(psi_M, mu, FunctionTable.from_values(d), tol=gauge_tol).value
        for d in family.densities
    )
    holder_rhs = 2.0 * gauge_error * density_norm_sup
    bound_holds = sup_l1 <= holder_rhs * (1.0 + _HOLDER_SLACK)
    if not bound_holds:
        raise OrliczError(
            f"generalized Holder chain violated: sup_l1={sup_l1} > rhs={holder_rhs}")
    return RobustReport(tuple(float(v) for v in per), sup_l1, gauge_error,
                        density_norm_sup, holder_rhs, bound_holds, epsilon)


def report_json_dict(report: RobustReport, network_file: str, case: str) -> dict:
    return {"sup_l1": report.sup_l1,
            "holder_rhs": report.holder_rhs,
            "gauge_error": report.gauge_error,
            "density_norm_sup": report.density_norm_sup,
            "per_measure_l1": list(report.per_measure_l1),
            "bound_holds": report.bound_holds,
            "network_file": network_file,
            "case": case}


_FAMILY_KINDS = {
    "samplers": {"kind", "samplers", "points", "seed", "box"},
    "members": {"kind", "members"},
    "mixtures": {"kind", "count", "points", "seed", "box"},
}


def _hull_box(members) -> Box:
    pts = np.concatenate([m.points for m in members])
    return Box(np.min(pts, axis=0), np.max(pts, axis=0))


def _mixture_spec(rng: np.random.Generator, box: Box) -> dict:
    extent = box.hi - box.lo
    comps = []
    for _ in range(2):
        comps.append({"weight": float(rng.uniform(0.3, 0.7)),
                      "mean": (box.lo + extent * rng.uniform(0.1, 0.9, size=box.dim)).tolist(),
                      "std": (extent * rng.uniform(0.05, 0.2, size=box.dim)).tolist()})
    return {"name": "mixture", "components": comps}


def build_family(spec: dict):
    """MeasureFamily plus its declared box (hull of supports for members-kind)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValidationError("family spec needs a kind")
    kind = spec["kind"]
    if kind not in _FAMILY_KINDS:
        raise ValidationError(f"unknown family kind {kind!r}")
    extra = set(spec) - _FAMILY_KINDS[kind]
    if extra:
        raise ValidationError(f"unknown family keys: {sorted(extra)}")
    if kind == "members":
        members = [DiscreteMeasure.from_json_dict(m) for m in spec["members"]]
        return MeasureFamily.from_members(members), _hull_box(members)
    missing = _FAMILY_KINDS[kind] - set(spec)
    if missing:
        raise ValidationError(f"family spec is missing {sorted(missing)}")
    box = Box.from_json_dict(spec["box"])
    n = int(spec["points"])
    master = np.random.SeedSequence(int(spec["seed"]))
    if kind == "samplers":
        samplers = list(spec["samplers"])
        if not samplers:
            raise ValidationError("need at least one sampler")
        children = master.spawn(len(samplers))
        members = [sample_empirical(s, n, int(children[i].generate_state(1)[0]), box)
                   for i, s in enumerate(samplers)]
    else:
        count = int(spec["count"])
        if count < 1:
            raise ValidationError("mixture family count must be positive")
        children = master.spawn(count)
        members = []
        for child in children:
            spec_seed, sample_seed = child.generate_state(2)
            mix = _mixture_spec(np.random.default_rng(int(spec_seed)), box)
            members.append(sample_empirical(mix, n, int(sample_seed), box))
    return MeasureFamily.from_members(members), box


def _network_to_fnn(net: Network) -> FnnSpec:
    """One-hidden-layer network as an explicit feature sum.

    A nonzero readout bias becomes one extra constant feature: the map
    x -> activation(1) is constant and activation(1) is nonzero for every
    supported activation.
    """
    hid, out = net.layers
    maps = [AffineMap(hid.A[k], hid.b[k]) for k in range(hid.out_dim)]
    readouts = out.A.T
    if np.any(out.b != 0.0):
        act1 = float(_apply_activation(hid.act, np.array([1.0]))[0])
        maps.append(AffineMap(np.zeros(net.input_dim), 1.0))
        readouts = np.vstack([readouts, out.b / act1])
    return FnnSpec(tuple(maps), readouts, hid.act)


_CONFIG_KEYS = {"case", "family", "target", "epsilon", "widths", "seeds",
                "activation", "delta", "clip_range", "ridge",
                "psi_candidates", "compact_box", "out_dir"}
_REQUIRED_KEYS = {"case", "family", "target", "epsilon"}
_DEFAULT_ACTIVATION = {"i": "sigmoid", "ii": "relu", "iii": "sigmoid", "iv": "sigmoid"}


def _validate_config(config: dict) -> dict:
    if not isinstance(config, dict):
        raise ValidationError("config must be an object")
    extra = set(config) - _CONFIG_KEYS
    if extra:
        raise ValidationError(f"unknown config keys: {sorted(extra)}")
    missing = _REQUIRED_KEYS - set(config)
    if missing:
        raise ValidationError(f"config is missing {sorted(missing)}")
    cfg = dict(config)
    if cfg["case"] not in _CASES:
        raise ValidationError(f"case must be one of {_CASES}")
    if not (float(cfg["epsilon"]) > 0.0):
        raise ValidationError("epsilon must be positive")
    widths = [int(w) for w in cfg.get("widths", _DEFAULT_WIDTHS)]
    if any(w < 0 for w in widths) or not widths:
        raise ValidationError("widths must be a nonempty list of counts")
    seeds = cfg.get("seeds", list(_DEFAULT_SEEDS))
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValidationError("need at least one seed")
    cfg["widths"] = widths
    cfg["seeds"] = seeds
    cfg["epsilon"] = float(cfg["epsilon"])
    cfg.setdefault("activation", _DEFAULT_ACTIVATION[cfg["case"]])
    cfg.setdefault("delta", 0.05)
    cfg.setdefault("ridge", 1e-10)
    return cfg


def _max_workers() -> int:
    raw = os.environ.get("ORLICZ_UAT_THREADS", "0").strip() or "0"
    try:
        val = int(raw)
    except ValueError:
        raise ValidationError("ORLICZ_UAT_THREADS must be an integer") from None
    if val < 0:
        raise ValidationError("ORLICZ_UAT_THREADS must be nonnegative")
    return val if val > 0 else min(32, os.cpu_count() or 1)


@dataclass(frozen=True)
class RobustRunResult:
    report: RobustReport
    success: bool
    chosen_width: int
    chosen_seed: int
    rows: tuple
    paths: dict


def _check_hypotheses(case: str, cfg: dict, family: MeasureFamily,
                      f: TargetFunction, phi_M: YoungFunction, box: Box):
    if case == "i" and cfg["activation"] not in ("sigmoid", "tanh"):
        raise HypothesisViolation("bounded activation",
                                  f"{cfg['activation']} is unbounded")
    if case == "ii":
        if cfg["activation"] != "relu":
            raise ValidationError("the narrow construction needs relu features")
        if f.bound is None and "clip_range" not in cfg:
            raise HypothesisViolation("bounded target",
                                      "no declared bound and no clip_range")
    if case == "iii":
        declared = Box.from_json_dict(cfg["compact_box"]) if "compact_box" in cfg else box
        for i, nu in enumerate(family.members):
            if not np.all(declared.contains(nu.points)):
                raise HypothesisViolation(
                    "compact support", f"member {i} has mass outside the declared box")
    if case == "iv":
        fam = AffineFamily(f.dim)
        probes = box.grid(4) if f.dim <= 3 else box.sample(np.random.default_rng(0), 64)
        axioms = check_additive_family(fam, probes)
        if not (axioms.closed_under_addition and axioms.point_separating
                and axioms.contains_constants):
            raise HypothesisViolation("additive family axioms",
                                      f"verdicts {axioms}")
        rng = np.random.default_rng(1)
        members = [fam.sample_member(rng) for _ in range(8)]
        compat = check_weight_compatibility(members, quadratic_weight,
                                            quadratic_weight_scalar, probes)
        if not (math.isfinite(compat.sup_ratio) and compat.admissible_weight):
            raise HypothesisViolation("weight compatibility", f"report {compat}")
        mu = family.dominating
        w_table = FunctionTable.from_values(quadratic_weight(mu.points))
        w_norm = gauge_norm(phi_M, mu, w_table).value
        if not math.isfinite(w_norm):
            raise HypothesisViolation("finite weight gauge norm",
                                      "gauge norm of the weight diverged")


def _trial(case: str, cfg: dict, f: TargetFunction, mu_dom: DiscreteMeasure,
           box: Box, width: int, seed: int):
    """Candidate network for one schedule entry.

    Returns (evaluator, artifact network).  Width 0 is the zero network.
    """
    if width == 0:
        net = zero_network(f.dim, f.out_dim)
        return net, net
    g0 = fit_random_features(f, mu_dom, width, cfg["activation"], seed, cfg["ridge"])
    if case == "ii":
        delta = float(cfg["delta"])
        if "clip_range" in cfg:
            c_lo, c_hi = (float(v) for v in cfg["clip_range"])
        else:
            c_lo, c_hi = -f.bound, f.bound
        K = box.enlarged(delta)
        reg = to_register_form(g0, K)
        expected = f.dim + f.out_dim + 1
        if any(w != expected for w in reg.network.hidden_widths):
            raise OrliczError("register rewrite produced a wrong width")
        eta = clip_and_localize(reg, box, delta, c_lo, c_hi)
        return eta, eta.network
    if case == "iv":
        spec = _network_to_fnn(g0)
        return build_fnn(spec), fnn_to_network(spec)
    return g0, g0


def run_robust_experiment(config: dict, out_dir=None) -> RobustRunResult:
    """Run a schedule until sup_l1 < epsilon, then write the artifacts.

    Artifacts: report.json (the certified report for the selected network),
    curve.csv with one row per evaluated (width, seed), and network.json.
    The selected network is the first schedule entry beating epsilon, or the
    best one seen if the schedule is exhausted.
    """
    cfg = _validate_config(config)
    case = cfg["case"]
    out = Path(out_dir if out_dir is not None else cfg.get("out_dir", "."))
    family, box = build_family(cfg["family"])
    f = make_target(cfg["target"])
    if f.dim != family.dominating.dimension:
        raise ValidationError("target and family dimensions disagree")
    candidates = None
    if "psi_candidates" in cfg:
        candidates = [young_from_json(c) for c in cfg["psi_candidates"]]
    phi_M, psi_M, _ = associated_young_pair(family, candidates)
    _check_hypotheses(case, cfg, family, f, phi_M, box)
    mu_dom = family.dominating

    def run_one(width: int, seed: int):
        eta, artifact = _trial(case, cfg, f, mu_dom, box, width, seed)
        per, sup = robust_error(family, f, eta)
        resid = _residual_table(f, eta, mu_dom.points)
        gauge = gauge_norm(phi_M, mu_dom, resid).value
        return eta, artifact, sup, gauge

    epsilon = cfg["epsilon"]
    rows = []
    chosen = None
    best = None
    workers = _max_workers()
    for width in cfg["widths"]:
        if workers > 1 and len(cfg["seeds"]) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [(seed, pool.submit(run_one, width, seed))
                           for seed in cfg["seeds"]]
                batch = [(seed, fut.result()) for seed, fut in futures]
        else:
            batch = [(seed, run_one(width, seed)) for seed in cfg["seeds"]]
        for seed, (eta, artifact, sup, gauge) in batch:
            rows.append((width, seed, sup, gauge))
            if best is None or sup < best[0]:
                best = (sup, width, seed, eta, artifact)
            if chosen is None and sup < epsilon:
                chosen = (sup, width, seed, eta, artifact)
        if chosen is not None:
            break
    success = chosen is not None
    sup, width, seed, eta, artifact = chosen if success else best
    report = verify_robust_bound(family, phi_M, psi_M, f, eta, epsilon=epsilon)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"report": out / "report.json", "curve": out / "curve.csv",
             "network": out / "network.json"}
    serialize.write_bytes(paths["network"], serialize.json_text(artifact.to_json_dict()))
    serialize.write_bytes(paths["report"], serialize.json_text(
        report_json_dict(report, "network.json", case)))
    serialize.write_bytes(paths["curve"], serialize.csv_text(
        ("width", "seed", "sup_l1", "gauge_error"), rows))
    return RobustRunResult(report, success, width, seed, tuple(rows),
                           {k: str(v) for k, v in paths.items()})
