"""Command-line front end: ``lissphere <subcommand> ...``.

Tabular outputs go to stdout (or ``--out``) as CSV or JSON.  Node-value files
are CSV with a header ``i1,i2,value`` (or JSON ``[{"i1", "i2", "re", "im"}]``)
covering either all of ``I`` or exactly ``I_S``.  Exit codes: 0 on success,
2 on bad arguments or malformed input, 1 when the rotation fit does not
converge (unless ``--allow-nonconverged``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import analysis, curve, nodes, quadrature, rotation, spectral, transform

FUNCTIONS = ("const1", "gauss", "xyz", "random")


class UsageError(Exception):
    """Invalid input detected after argument parsing (exit code 2)."""


@dataclass
class RunConfig:
    subcommand: str
    m1: int | None = None
    m2: int | None = None
    fmt: str = "csv"
    flavor: str = transform.COMPLEX
    variant: str = spectral.EXCLUDE_U
    out: str | None = None
    seed: int = 0

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            args.command,
            getattr(args, "m1", None),
            getattr(args, "m2", None),
            getattr(args, "format", "csv"),
            getattr(args, "flavor", transform.COMPLEX),
            getattr(args, "variant", spectral.EXCLUDE_U),
            getattr(args, "out", None),
            getattr(args, "seed", 0),
        )

    def pair(self, even: bool = True) -> curve.FrequencyPair:
        if self.m1 is None or self.m2 is None:
            raise UsageError("--m1 and --m2 are required")
        try:
            return curve.as_pair((self.m1, self.m2), even=even)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


# ------------------------------------------------------------------ helpers

def _cartesian_function(name: str, seed: int = 0):
    if name == "const1":
        return lambda x: np.ones(np.shape(x)[:-1])
    if name == "gauss":
        return rotation.gaussian_pair
    if name == "xyz":
        return lambda x: x[..., 0] * x[..., 1] * x[..., 2]
    if name == "random":
        rng = np.random.default_rng(seed)
        # a random smooth function: a few Gaussian bumps with random centres
        centres = rng.normal(size=(4, 3))
        centres /= np.linalg.norm(centres, axis=1, keepdims=True)
        widths = rng.uniform(1.0, 5.0, size=4)
        return lambda x: sum(np.exp(-w * np.sum((x - c) ** 2, axis=-1)) for c, w in zip(centres, widths))
    raise UsageError(f"unknown function {name!r}; choose from {FUNCTIONS}")


def _parse_value(text: str):
    try:
        return float(text)
    except ValueError:
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            raise UsageError(f"cannot parse value {text!r}") from None


def read_node_values(path: str, m: curve.FrequencyPair) -> transform.NodeData:
    """Read a node-value file (CSV or JSON) covering ``I`` or ``I_S``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    entries = {}
    try:
        if path.endswith(".json"):
            for e in json.loads(text):
                entries[(int(e["i1"]), int(e["i2"]))] = complex(float(e["re"]), float(e.get("im", 0.0)))
        else:
            reader = csv.DictReader(io.StringIO(text))
            if reader.fieldnames is None or not {"i1", "i2", "value"} <= set(reader.fieldnames):
                raise UsageError(f"{path}: expected a CSV header with columns i1,i2,value")
            for row in reader:
                entries[(int(row["i1"]), int(row["i2"]))] = _parse_value(row["value"])
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed node file ({exc})") from None
    idx = nodes.build_index_set(m)
    full = [(int(a), int(b)) for a, b in zip(idx.i1, idx.i2)]
    reduced = [k for k, s in zip(full, idx.in_IS) if s]
    unknown = [k for k in entries if k not in idx]
    if unknown:
        raise UsageError(f"{path}: indices not in I for m = {tuple(m)}: {unknown[:5]}")
    dtype = complex if any(isinstance(v, complex) and v.imag for v in entries.values()) else float
    if set(entries) == set(full):
        vals = np.array([entries[k] for k in full])
        return transform.NodeData(m, vals.astype(dtype) if dtype is float else vals)
    if set(entries) == set(reduced):
        vals = np.array([entries[k] for k in reduced])
        return transform.NodeData.from_reduced(m, vals.real if dtype is float else vals)
    missing = [k for k in reduced if k not in entries]
    raise UsageError(f"{path}: {len(missing)} node indices missing, e.g. {missing[:5]}")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from None


def _number(v):
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def emit(payload, cfg: RunConfig, stream=None) -> None:
    """Write rows (list of dicts) as CSV/JSON, or any other payload as JSON."""
    rows = payload if isinstance(payload, list) else None
    if rows is not None and cfg.fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: _number(v) for k, v in r.items()})
        text = buf.getvalue()
    else:
        if rows is not None:
            payload = [{k: _number(v) for k, v in r.items()} for r in rows]
        text = json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def _node_data(args, cfg: RunConfig, m) -> transform.NodeData:
    if getattr(args, "values", None):
        return read_node_values(args.values, m)
    return transform.NodeData.from_cartesian(m, _cartesian_function(args.function, cfg.seed))


# --------------------------------------------------------------- subcommands

def cmd_curve(args, cfg):
    m = cfg.pair(even=False)
    if args.classify:
        s = curve.intersection_summary(m)
        rows = [{"l": l, "t": t, "multiplicity": curve.classify_time(m, t)}
                for l, t in enumerate(curve.sample_times(m, shifted=args.shifted))]
        if cfg.fmt == "json":
            return {"m": list(m), "summary": vars(s), "samples": rows}
        return rows
    if m.m2 % 2:
        raise UsageError("curve sampling needs an even m2 (use --classify for odd m2)")
    if args.samples:
        t = np.linspace(0.0, 2 * np.pi, args.samples, endpoint=False)
    else:
        t = curve.sample_times(m, shifted=args.shifted)
    x = curve.eval_curve(curve.CurveParams(m, args.alpha), t)
    return [{"t": float(ti), "x": float(a), "y": float(b), "z": float(c)} for ti, (a, b, c) in zip(t, x)]


def cmd_nodes(args, cfg):
    m = cfg.pair()
    idx = nodes.build_index_set(m)
    keep = np.ones(len(idx), bool) if args.all else idx.in_IS
    rows = []
    for k in np.flatnonzero(keep):
        x = idx.points[k]
        rows.append({"i1": int(idx.i1[k]), "i2": int(idx.i2[k]), "theta": float(idx.theta[k]),
                     "phi": float(idx.phi[k]), "x": float(x[0]), "y": float(x[1]), "z": float(x[2])})
    return rows


def cmd_spectrum(args, cfg):
    s = spectral.build_spectral_set(cfg.pair(), cfg.variant)
    norms = spectral.chi_norm_sq_array(s.m, s.g1)
    return [{"g1": int(a), "g2": int(b), "class": str(c), "selected": int(sel), "norm_sq": float(n)}
            for a, b, c, sel, n in zip(s.g1, s.g2, s.cls, s.selected, norms)]


def cmd_coeffs(args, cfg):
    m = cfg.pair()
    data = _node_data(args, cfg, m)
    try:
        p = transform.forward(data, cfg.flavor, cfg.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cfg.fmt == "json":
        return p.to_dict()
    return [{"g1": e["g1"], "g2": e["g2"], "re": e["re"], "im": e["im"]} for e in p.to_dict()["entries"]]


def cmd_eval(args, cfg):
    try:
        p = transform.Interpolant.from_dict(_read_json(args.coeffs))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.coeffs}: malformed coefficient file ({exc})") from None
    if args.points:
        try:
            pts = np.loadtxt(args.points, delimiter=",", ndmin=2, skiprows=1)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read points from {args.points}: {exc}") from None
        if pts.shape[1] != 2:
            raise UsageError(f"{args.points}: expected two columns theta,phi")
        theta, phi = pts[:, 0], pts[:, 1]
    else:
        idx = nodes.build_index_set(p.m)
        theta, phi = idx.theta, idx.phi
    vals = np.asarray(p.evaluate(theta, phi))
    return [{"theta": float(t), "phi": float(f), "re": float(np.real(v)), "im": float(np.imag(v))}
            for t, f, v in zip(theta, phi, vals)]


def cmd_quad(args, cfg):
    m = cfg.pair()
    if args.weights:
        rule = quadrature.extract_weights(m)
        return [{"i1": i.i1, "i2": i.i2, "weight": float(w)} for i, w in zip(rule.indices, rule.weights)]
    data = _node_data(args, cfg, m)
    value = quadrature.integrate_samples(data, flavor=cfg.flavor)
    if args.unnormalized:
        value = value * 4 * math.pi
    value = complex(value)
    out = {"m1": m.m1, "m2": m.m2, "integral": value.real if value.imag == 0 else repr(value),
           "normalized": not args.unnormalized}
    return out if cfg.fmt == "json" else [out]


def _grid(args, m=None):
    if args.n_theta or args.n_phi:
        base = analysis.GridSpec() if m is None else analysis.GridSpec.for_degree(m)
        try:
            return analysis.GridSpec(args.n_theta or base.n_theta, args.n_phi or base.n_phi)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return None if m is None else analysis.GridSpec.for_degree(m)


def cmd_lebesgue(args, cfg):
    m = cfg.pair()
    value = analysis.lebesgue_estimate(m, _grid(args, m), cfg.variant)
    scale = math.log(m.m1 + 1) * math.log(m.m2 + 1)
    return [{"m1": m.m1, "m2": m.m2, "estimate": value, "ratio_to_log_product": value / scale}]


def _pair_list(text: str):
    out = []
    for chunk in text.split(";"):
        try:
            a, b = (int(v) for v in chunk.split(","))
        except ValueError:
            raise UsageError(f"cannot parse frequency pair {chunk!r}; use 'm1,m2;m1,m2;...'") from None
        try:
            out.append(curve.as_pair((a, b), even=True))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def cmd_converge(args, cfg):
    if args.reference_table:
        m_list = analysis.REFERENCE_SEQUENCE
    elif args.pairs:
        m_list = _pair_list(args.pairs)
    elif cfg.m1 is not None:
        m_list = [cfg.pair()]
    else:
        raise UsageError("give --reference-table, --pairs or --m1/--m2")
    sampler = analysis.cartesian_sampler(_cartesian_function(args.function, cfg.seed))
    grid = _grid(args) or analysis.GridSpec()
    rows = analysis.convergence_table(sampler, m_list, grid, cfg.flavor)
    out = []
    for r in rows:
        d = r.as_dict()
        if args.reference_table:
            d["reference"] = analysis.REFERENCE_ERRORS[tuple(r.m)]
        out.append(d)
    return out


def cmd_rotate(args, cfg):
    m = cfg.pair()
    scale = math.pi / 180 if args.degrees else 1.0
    beta0 = [b * scale for b in args.beta0]
    try:
        if args.synthesize:
            if args.beta_true is None:
                raise UsageError("--synthesize needs --beta-true")
            fn = _cartesian_function(args.function, cfg.seed)
            problem = rotation.RotationProblem.synthesize(
                m, fn, [b * scale for b in args.beta_true], beta0, cfg.flavor, args.axes)
        else:
            if not (args.f and args.f_rot):
                raise UsageError("give --f and --f-rot node files, or --synthesize")
            problem = rotation.RotationProblem(
                m, read_node_values(args.f, m), read_node_values(args.f_rot, m),
                rotation.EulerAngles(*beta0), cfg.flavor, args.axes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    start = rotation.grid_search(problem, args.lattice) if args.lattice else problem.beta0
    opts = rotation.GaussNewtonOptions(max_iter=args.max_iter, tol_step=args.tol_step)
    report = rotation.estimate(problem, opts, beta0=start)
    payload = report.to_dict()
    payload["axes"] = problem.axes
    payload["start"] = list(start)
    if not args.trace:
        payload.pop("trace")
    if args.degrees:
        payload["beta_hat_degrees"] = [b / scale for b in report.beta_hat]
    return payload, report.converged


# ------------------------------------------------------------------- parser

def _add_common(p, m_required=True, fmt=True):
    p.add_argument("--m1", type=int, required=m_required)
    p.add_argument("--m2", type=int, required=m_required)
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="write output to this file instead of stdout")


def _add_data(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--values", help="node-value file (CSV i1,i2,value or JSON)")
    src.add_argument("--function", choices=FUNCTIONS, default="gauss",
                     help="sample a built-in function instead of reading a file")
    p.add_argument("--seed", type=int, default=0, help="seed for --function random")


def _add_flavor(p, variant=True):
    p.add_argument("--flavor", choices=transform.FLAVORS, default=transform.COMPLEX)
    if variant:
        p.add_argument("--variant", choices=spectral.VARIANTS, default=spectral.EXCLUDE_U)


def _add_grid(p):
    p.add_argument("--n-theta", type=int, default=None, help="theta rows (poles included)")
    p.add_argument("--n-phi", type=int, default=None, help="phi columns over [0, 2pi)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lissphere", description="Interpolation and quadrature at spherical Lissajous nodes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="sample the Lissajous curve or classify its sample times")
    _add_common(p)
    p.add_argument("--alpha", type=float, default=0.0, help="rotation parameter (units of pi)")
    p.add_argument("--samples", type=int, default=0, help="uniform samples over [0, 2pi) instead of the node times")
    p.add_argument("--shifted", action="store_true", help="use the half-step shifted sample times")
    p.add_argument("--classify", action="store_true", help="multiplicity of each sample time (odd m2 allowed)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("nodes", help="list node points (I_S by default)")
    _add_common(p)
    p.add_argument("--all", action="store_true", help="list the full index set I, poles repeated")
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("spectrum", help="list the spectral index set with classes")
    _add_common(p)
    p.add_argument("--variant", choices=spectral.VARIANTS, default=spectral.EXCLUDE_U)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("coeffs", help="interpolation coefficients of node data")
    _add_common(p)
    _add_data(p)
    _add_flavor(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("eval", help="evaluate a coefficient file (JSON from 'coeffs --format json')")
    p.add_argument("--coeffs", required=True)
    p.add_argument("--points", help="CSV with header theta,phi; default: the nodes of I")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("quad", help="quadrature of node data over the sphere")
    _add_common(p)
    _add_data(p)
    _add_flavor(p, variant=False)
    p.add_argument("--unnormalized", action="store_true", help="integral w.r.t. surface area (times 4 pi)")
    p.add_argument("--weights", action="store_true", help="print the quadrature weights on I_S")
    p.set_defaults(func=cmd_quad)

    p = sub.add_parser("lebesgue", help="grid estimate (a lower bound) of the Lebesgue constant")
    _add_common(p)
    p.add_argument("--variant", choices=spectral.VARIANTS, default=spectral.EXCLUDE_U)
    _add_grid(p)
    p.set_defaults(func=cmd_lebesgue)

    p = sub.add_parser("converge", help="grid sup-norm errors (lower bounds) of the interpolant")
    _add_common(p, m_required=False)
    p.add_argument("--reference-table", "--paper-table", dest="reference_table", action="store_true",
                   help="the ten pairs (3,4), (7,8), ..., (39,40) with the Gaussian pair on a 1001 x 2000 grid")
    p.add_argument("--pairs", help="frequency pairs 'm1,m2;m1,m2;...'")
    p.add_argument("--function", choices=FUNCTIONS, default="gauss")
    p.add_argument("--seed", type=int, default=0)
    _add_flavor(p, variant=False)
    _add_grid(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("rotate", help="fit Euler angles between reference and rotated node data")
    _add_common(p, fmt=False)
    p.add_argument("--f", help="reference node-value file")
    p.add_argument("--f-rot", help="rotated node-value file")
    p.add_argument("--synthesize", action="store_true", help="generate both data sets from --function and --beta-true")
    p.add_argument("--function", choices=FUNCTIONS, default="gauss")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--beta-true", type=float, nargs=3, metavar=("B1", "B2", "B3"))
    p.add_argument("--beta0", type=float, nargs=3, default=(0.0, 0.0, 0.0), metavar=("B1", "B2", "B3"))
    p.add_argument("--degrees", action="store_true", help="angles on the command line are in degrees")
    p.add_argument("--axes", default=rotation.DEFAULT_AXES, help="Euler axis sequence, e.g. zyx or zyz")
    p.add_argument("--lattice", type=int, default=0, help="grid-search n^3 starting angles first")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol-step", type=float, default=1e-10)
    p.add_argument("--trace", action="store_true", help="include the iteration history")
    p.add_argument("--allow-nonconverged", action="store_true", help="exit 0 even if the fit did not converge")
    _add_flavor(p, variant=False)
    p.set_defaults(func=cmd_rotate, format="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        result = args.func(args, cfg)
    except UsageError as exc:
        print(f"lissphere {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "rotate":
        payload, converged = result
        emit(payload, cfg)
        if not converged and not args.allow_nonconverged:
            print("lissphere rotate: Gauss-Newton did not converge", file=sys.stderr)
            return 1
        return 0
    emit(result, cfg)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
