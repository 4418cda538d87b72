"""Batch entry point: norm | conjugate | construct | fit | robust | selftest.

Every subcommand is deterministic: fixed seeds and inputs produce identical
bytes.  Exit codes: 0 success, 2 malformed input or validation failure,
3 a mathematical hypothesis the run relies on does not hold (the message
names the hypothesis).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import fit as fitmod
from . import net as netmod
from . import robust as robustmod
from . import serialize
from .box import Box
from .errors import HypothesisViolation, OrliczError, ValidationError
from .measure import DiscreteMeasure, MeasureFamily, make_discrete
from .orlicz import FunctionTable, gauge_norm, holder_check
from .young import (check_young_inequality, complementary, entropy,
                    exp_minus_linear, power, young_from_json, young_to_json)


def parse_young_spec(spec: str):
    parts = spec.split(":")
    name = parts[0]
    if name == "power":
        if len(parts) == 2:
            return power(float(parts[1]))
        if len(parts) == 3:
            return power(float(parts[1]), float(parts[2]))
        raise ValidationError("power spec is power:P or power:P:SCALE")
    if name == "exp_minus_linear" and len(parts) == 1:
        return exp_minus_linear()
    if name == "entropy" and len(parts) == 1:
        return entropy()
    if name == "tabulated" and len(parts) == 2:
        return young_from_json(_load_json(parts[1]))
    raise ValidationError(f"cannot parse Young function spec {spec!r}")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def _parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValidationError("grid spec is LO:HI:COUNT")
    return (float(parts[0]), float(parts[1]), int(parts[2]))


def _parse_int_list(spec: str):
    try:
        return [int(tok) for tok in spec.split(",") if tok != ""]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {spec!r}") from None


def emit(report, format: str, path=None) -> None:
    """Write a JSON object or a (header, rows) CSV pair deterministically."""
    if format == "json":
        text = serialize.json_text(report)
    elif format == "csv":
        header, rows = report
        text = serialize.csv_text(header, rows)
    else:
        raise ValidationError("format must be json or csv")
    if path is None:
        sys.stdout.write(text)
    else:
        serialize.write_bytes(path, text)


def _cmd_norm(args) -> int:
    phi = parse_young_spec(args.phi)
    mu = DiscreteMeasure.from_json_dict(_load_json(args.measure))
    table = FunctionTable.from_json_dict(_load_json(args.f))
    result = gauge_norm(phi, mu, table, tol=args.tol, norm_choice=args.norm_choice)
    emit((("phi_kind", "measure_id", "norm_value", "modular_at_value", "iterations"),
          [(args.phi, args.measure, result.value, result.modular_at_value,
            result.iterations)]), "csv", args.out)
    return 0


def _cmd_conjugate(args) -> int:
    phi = parse_young_spec(args.phi)
    grid = _parse_grid(args.grid) if args.grid else (1e-2, 1e2, 1201)
    psi = complementary(phi, grid_spec=grid, numeric=True)
    emit(young_to_json(psi), "json", args.out)
    return 0


def _structural_report(net) -> dict:
    return {"network": net.to_json_dict(),
            "hidden_widths": list(net.hidden_widths),
            "layer_count": len(net.layers),
            "input_dim": net.input_dim,
            "output_dim": net.output_dim}


def _cmd_construct(args) -> int:
    what = args.what
    if what == "identity":
        net = netmod.identity_gadget(args.offset)
    elif what == "max":
        net = netmod.max_gadget()
    elif what == "min":
        net = netmod.min_gadget()
    elif what == "bump":
        if args.a is None or args.b is None:
            raise ValidationError("bump needs --a and --b")
        net = netmod.bump_1d(args.a, args.b, args.delta)
    elif what == "box":
        if args.box is None:
            raise ValidationError("box indicator needs --box")
        net = netmod.box_indicator(Box.from_json_dict(_load_json(args.box)), args.delta)
    elif what in ("register", "clip"):
        if args.net is None or args.box is None:
            raise ValidationError(f"{what} needs --net and --box")
        shallow = netmod.Network.from_json_dict(_load_json(args.net))
        box = Box.from_json_dict(_load_json(args.box))
        reg = netmod.to_register_form(shallow, box)
        if what == "clip":
            if args.inner_box is None:
                raise ValidationError("clip needs --inner-box")
            if not isinstance(reg, netmod.RegisterNetwork):
                raise ValidationError("clip needs a network with a hidden layer")
            J = Box.from_json_dict(_load_json(args.inner_box))
            reg = netmod.clip_and_localize(reg, J, args.delta,
                                           args.clip_low, args.clip_high)
        net = reg.network if isinstance(reg, netmod.RegisterNetwork) else reg
    else:
        raise ValidationError(f"unknown construction {what!r}")
    emit(_structural_report(net), "json", args.out)
    return 0


def _cmd_fit(args) -> int:
    target = fitmod.make_target({"name": args.target, "dim": args.dim})
    mu = DiscreteMeasure.from_json_dict(_load_json(args.measure))
    phi = parse_young_spec(args.phi)
    rows = fitmod.approximation_curve(
        target, mu, phi, _parse_int_list(args.widths),
        activation=args.activation, seeds=_parse_int_list(args.seeds),
        ridge=args.ridge)
    emit(fitmod.curve_csv_rows(rows), "csv", args.out)
    return 0


def _cmd_robust(args) -> int:
    config = _load_json(args.config)
    result = robustmod.run_robust_experiment(config, out_dir=args.out_dir)
    status = "success" if result.success else "schedule exhausted"
    sys.stdout.write(
        f"{status}: sup_l1={serialize.format_float(result.report.sup_l1)} "
        f"(width {result.chosen_width}, seed {result.chosen_seed}); "
        f"report at {result.paths['report']}\n")
    return 0


def _selftest_checks():
    rng = np.random.default_rng(12345)

    def lebesgue_consistency():
        for p in (1.0, 1.5, 2.0, 3.0):
            pts = rng.uniform(-2.0, 2.0, size=(40, 2))
            w = rng.uniform(0.1, 1.0, size=40)
            mu = make_discrete(pts, w)
            vals = rng.standard_normal((mu.support_size, 1))
            table = FunctionTable.from_values(vals)
            got = gauge_norm(power(p), mu, table).value
            want = float(np.sum(np.abs(vals[:, 0]) ** p * mu.weights) ** (1.0 / p))
            assert abs(got - want) <= 1e-8 * max(1.0, want)

    def young_inequality():
        for phi in (power(2.0, 0.5), power(3.0), exp_minus_linear()):
            psi = complementary(phi)
            rep = check_young_inequality(phi, psi, sample_count=2000, seed=7)
            assert rep.max_violation <= 1e-10

    def conjugate_spot():
        val = entropy()(np.e - 1.0)
        assert abs(val - 1.0) <= 1e-12
        grid = np.linspace(0.1, 10.0, 64)
        psi = complementary(power(2.0, 0.5), grid_spec=grid, numeric=True)
        want = 0.5 * grid * grid
        got = np.array([psi(y) for y in grid])
        assert np.max(np.abs(got - want) / np.maximum(want, 1e-12)) <= 1e-6

    def gadget_exactness():
        pairs = rng.uniform(-50.0, 50.0, size=(10000, 2))
        mx = netmod.max_gadget().evaluate_batch(pairs)[:, 0]
        mn = netmod.min_gadget().evaluate_batch(pairs)[:, 0]
        assert np.max(np.abs(mx - np.max(pairs, axis=1))) <= 1e-12
        assert np.max(np.abs(mn - np.min(pairs, axis=1))) <= 1e-12
        xs = rng.uniform(-9.5, 50.0, size=(2000, 1))
        ident = netmod.identity_gadget(10.0).evaluate_batch(xs)[:, 0]
        assert np.max(np.abs(ident - xs[:, 0])) <= 1e-12

    def register_agreement():
        shallow = netmod.Network((
            netmod.Layer(rng.standard_normal((6, 2)), rng.standard_normal(6), "relu"),
            netmod.Layer(rng.standard_normal((1, 6)), rng.standard_normal(1), "none")))
        box = Box([-1.0, -1.0], [1.0, 1.0])
        reg = netmod.to_register_form(shallow, box)
        pts = box.sample(rng, 200)
        diff = reg.evaluate_batch(pts) - shallow.evaluate_batch(pts)
        assert np.max(np.abs(diff)) <= 1e-9
        assert set(reg.network.hidden_widths) == {4}

    def holder_sweep():
        phi = power(2.0, 0.5)
        psi = complementary(phi)
        for _ in range(100):
            pts = rng.uniform(0.0, 1.0, size=(20, 1))
            w = rng.uniform(0.1, 1.0, size=20)
            mu = make_discrete(pts, w)
            n = mu.support_size
            f = FunctionTable.from_values(rng.standard_normal((n, 1)))
            g = FunctionTable.from_values(rng.standard_normal((n, 1)))
            assert holder_check(phi, psi, mu, f, g).holds

    def equality_witness():
        pts = np.linspace(0.0, 1.0, 16).reshape(-1, 1)
        mu = make_discrete(pts, np.full(16, 1.0 / 16))
        family = MeasureFamily.from_members([mu])
        phi = power(2.0, 0.5)
        target = fitmod.constant(1, 1.0)
        eta = netmod.zero_network(1, 1)
        rep = robustmod.verify_robust_bound(family, phi, phi, target, eta,
                                            gauge_tol=1e-12)
        assert abs(rep.sup_l1 - 1.0) <= 1e-10
        assert abs(rep.holder_rhs - 1.0) <= 1e-10

    return [("lebesgue consistency", lebesgue_consistency),
            ("young inequality", young_inequality),
            ("conjugate spot values", conjugate_spot),
            ("gadget exactness", gadget_exactness),
            ("register agreement", register_agreement),
            ("holder sweep", holder_sweep),
            ("equality witness", equality_witness)]


def _cmd_selftest(_args) -> int:
    failures = 0
    for name, check in _selftest_checks():
        try:
            check()
        except AssertionError:
            failures += 1
            sys.stdout.write(f"FAIL {name}\n")
        else:
            sys.stdout.write(f"ok   {name}\n")
    total = len(_selftest_checks())
    sys.stdout.write(f"{total - failures}/{total} suites passed\n")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orlicz-uat",
        description="gauge norms, Young conjugates, ReLU constructions, "
                    "and robust approximation runs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="gauge norm of a tabulated function")
    p.add_argument("--phi", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--norm-choice", default="euclidean", choices=("euclidean", "max"))
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.set_defaults(run=_cmd_norm)

    p = sub.add_parser("conjugate", help="numeric complementary Young function")
    p.add_argument("--phi", required=True)
    p.add_argument("--grid", default=None, help="LO:HI:COUNT")
    p.add_argument("--out", default=None)
    p.set_defaults(run=_cmd_conjugate)

    p = sub.add_parser("construct", help="exact ReLU constructions")
    p.add_argument("--what", required=True,
                   choices=("identity", "max", "min", "bump", "box", "register", "clip"))
    p.add_argument("--offset", type=float, default=1.0)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--box", default=None)
    p.add_argument("--net", default=None)
    p.add_argument("--inner-box", default=None)
    p.add_argument("--clip-low", type=float, default=-1.0)
    p.add_argument("--clip-high", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.set_defaults(run=_cmd_construct)

    p = sub.add_parser("fit", help="error-vs-width curve for a named target")
    p.add_argument("--target", required=True)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--measure", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--widths", default="8,16,32,64")
    p.add_argument("--seeds", default="0,1,2")
    p.add_argument("--activation", default="relu", choices=("relu", "sigmoid", "tanh"))
    p.add_argument("--ridge", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.set_defaults(run=_cmd_fit)

    p = sub.add_parser("robust", help="run a robust approximation experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(run=_cmd_robust)

    p = sub.add_parser("selftest", help="run the built-in invariant suites")
    p.set_defaults(run=_cmd_selftest)
    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except HypothesisViolation as exc:
        sys.stderr.write(f"{exc}\n")
        return 3
    except (OrliczError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
