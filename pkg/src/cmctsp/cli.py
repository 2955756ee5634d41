"""Command-line interface.

Every subcommand reads a complex (``--complex``), writes its artifacts to
``--out`` (default: ``$CMCTSP_OUT`` or the working directory) and prints a
short JSON summary.  Exit status is 0 on success, 2 for invalid input and
3 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import boundary, laplacians, learn, signals, sparse, synth
from . import formats
from .errors import InputError, NumericalError
from .spectral import eig_sym

OUT_ENV = "CMCTSP_OUT"


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated integers, got {text!r}") from None
    return a, b


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _versions() -> dict[str, str]:
    import networkx
    import scipy

    try:
        own = version("artifact")
    except PackageNotFoundError:
        own = "unknown"
    return {"cmctsp": own, "numpy": np.__version__, "scipy": scipy.__version__, "networkx": networkx.__version__}


# --- shared argument groups ------------------------------------------------------

def _add_complex(p, required=True):
    p.add_argument("--complex", required=required, type=Path, help="complex description (JSON)")


def _add_layers(p, required=True):
    p.add_argument("--layers", type=_pair, required=required, metavar="L,M",
                   help="layer pair with L < M")


def _add_from(p):
    p.add_argument("--from", dest="perspective", choices=("ell", "m"), default="ell",
                   help="perspective of the cross-boundary maps (default: ell)")


def _add_orders(p):
    p.add_argument("--orders", type=_pair, default=(0, 0), metavar="K,N",
                   help="order pair (k, n); write negative values as --orders=-1,0 (default: 0,0)")


def _add_signals(p, required=True):
    p.add_argument("--signals", type=Path, required=required,
                   help="CSV with header cell_id,value or cell_id,t1,...,tM")


def _add_seed(p):
    p.add_argument("--seed", type=int, default=0, help="master random seed (default: 0)")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- subcommands -------------------------------------------------------------------

def cmd_validate(args) -> dict:
    X = formats.read_complex(args.complex)
    flat = X.flatten()
    summary = {
        "N": flat.N,
        "E": flat.E,
        "C": flat.C,
        "layers": [{"id": l, "nodes": len(X.nodes(l)), "edges": len(X.intra(l, 1)),
                    "cells": len(X.intra(l, 2))} for l in X.layers],
        "cross_pairs": [{"layers": [l, m], "edges": len(X.cross(l, m, 1)), "cells": len(X.cross(l, m, 2))}
                        for l, m in X.cross_pairs()],
    }
    out = _out_dir(args)
    formats.write_json(out / "summary.json", summary)
    formats.write_complex(X, out / "complex.json")
    return summary


def cmd_counts(args) -> dict:
    X = formats.read_complex(args.complex)
    l, m = args.layers
    X._check_pair(l, m)
    counts = {f"{k},{n}": X.cell_count(l, m, k, n) for k in range(-1, 3) for n in range(-1, 3) if (k, n) != (-1, -1)}
    result = {"layers": [l, m], "counts": counts}
    formats.write_json(_out_dir(args) / "counts.json", result)
    return result


def cmd_boundary(args) -> dict:
    X = formats.read_complex(args.complex)
    out = _out_dir(args)
    if args.layers is None:
        mats = {"B1": boundary.mono_b1(X), "B2": boundary.mono_b2(X)}
    else:
        l, m = args.layers
        k, n = args.orders
        build = boundary.cross_boundary_from_ell if args.perspective == "ell" else boundary.cross_boundary_from_m
        mats = {"B": build(X, l, m, k, n)}
    shapes = {}
    for name, B in mats.items():
        formats.write_table(out / f"{name}.csv", ["row_id", "col_id", "value"], B.triplets())
        shapes[name] = list(B.shape)
    return {"shapes": shapes}


def cmd_laplacian(args) -> dict:
    X = formats.read_complex(args.complex)
    out = _out_dir(args)
    if args.layers is None:
        L0, L1 = laplacians.hodge_laplacians(X)
        flat = X.flatten()
        formats.write_matrix(out / "L0.csv", flat.nodes, flat.nodes, L0)
        formats.write_matrix(out / "L1.csv", flat.edges, flat.edges, L1)
        result = {}
        for name, L, index in (("L0", L0, flat.nodes), ("L1", L1, flat.edges)):
            d = eig_sym(L, psd=True)
            formats.write_table(out / f"{name}_eigenvalues.csv", ["position", "eigenvalue"], enumerate(d.eigenvalues))
            result[name] = {"size": len(index), "kernel_dim": d.kernel_dim()}
        return result
    l, m = args.layers
    k, n = args.orders
    L = laplacians.cross_laplacian(X, l, m, k, n, args.perspective)
    for name in ("lower", "upper", "total"):
        formats.write_matrix(out / f"laplacian_{name}.csv", L.index, L.index, getattr(L, name))
    formats.write_table(out / "eigenvalues.csv", ["position", "eigenvalue"], enumerate(L.eig.eigenvalues))
    if L.index:
        formats.write_signals(out / "eigenvectors.csv", L.index, L.eig.eigenvectors)
    return {"size": len(L.index), "kernel_dim": L.kernel_dim(), "orders": [k, n], "perspective": args.perspective}


def cmd_betti(args) -> dict:
    X = formats.read_complex(args.complex)
    l, m = args.layers
    k, n = args.orders
    result = laplacians.cross_betti(X, l, m, k, n).as_dict()
    formats.write_json(_out_dir(args) / "betti.json", result)
    return result


def _wedge(w) -> dict:
    return {"hub": w.hub, "cross_edges": list(w.edges), "ends": list(w.ends), "closed": w.closed}


def cmd_cones(args) -> dict:
    X = formats.read_complex(args.complex)
    l, m = args.layers
    report = laplacians.cone_count_oracle(X, l, m, args.hub_layer)
    hubs = laplacians.harmonic_cross_hubs(X, l, m, args.hub_layer)
    result = {
        "count": report.count,
        "hub_layer": report.hub_layer,
        "open": report.n_open,
        "closed": report.n_closed,
        "hubs": [{"node": h.node, "open_cones": h.open_cones, "closed_cones": h.closed_cones,
                  "critical": h.critical} for h in hubs],
        "cones": {hub: [_wedge(w) for w in ws] for hub, ws in report.cones.items()},
        "wedges": {hub: [_wedge(w) for w in ws] for hub, ws in report.wedges.items()},
    }
    formats.write_json(_out_dir(args) / "cones.json", result)
    return {k: result[k] for k in ("count", "hub_layer", "open", "closed", "hubs")}


def _decompose(args, prefix: str) -> dict:
    X = formats.read_complex(args.complex)
    out = _out_dir(args)
    if args.layers is None:
        index = X.flatten().edges
        Y = formats.read_signals(args.signals, index, X)
        split = signals.hodge_split_mono(X, Y)
    else:
        l, m = args.layers
        index = X.family(l, m, 0, 0)
        Y = formats.read_signals(args.signals, index, X)
        split = signals.estimate_components(X, l, m, Y, args.perspective)
        formats.write_signals(out / f"{prefix}divergence.csv", *_pack(signals.cross_divergence(X, l, m, Y, args.perspective)))
        curl = signals.cross_curl(X, l, m, Y, args.perspective)
        if curl.index:
            formats.write_signals(out / f"{prefix}curl.csv", *_pack(curl))
    norms = {}
    for name in ("irrotational", "solenoidal", "harmonic", "node_potential", "cell_potential"):
        part = getattr(split, name)
        if part.index:
            formats.write_signals(out / f"{prefix}{name}.csv", *_pack(part))
        norms[name] = float(np.linalg.norm(part.values))
    return {"trials": int(Y.shape[1]), "cells": len(index), "norms": norms}


def _pack(sig):
    return sig.index, sig.values


def cmd_decompose(args) -> dict:
    return _decompose(args, "")


def cmd_estimate(args) -> dict:
    return _decompose(args, "estimate_")


def cmd_sparsify(args) -> dict:
    X = formats.read_complex(args.complex)
    out = _out_dir(args)
    if args.layers is None:
        index = X.flatten().edges
        U = signals.edge_basis(X)
        eps = args.epsilon
    else:
        l, m = args.layers
        index = X.family(l, m, 0, 0)
        U = signals.cross_basis(X, l, m, args.perspective)
        eps = args.epsilon
        if args.scale_epsilon:
            eps = sparse.scaled_epsilon(eps, len(index), X.flatten().E)
    Y = formats.read_signals(args.signals, index, X)
    codes, rows = [], []
    for j in range(Y.shape[1]):
        code = sparse.basis_pursuit(U, Y[:, j], eps)
        codes.append(code.coefficients)
        rows.append([j + 1, code.sparsity, code.l1, code.residual])
    C = np.column_stack(codes)
    formats.write_signals(out / "coefficients.csv", [str(i) for i in range(C.shape[0])], C)
    formats.write_table(out / "sparsify.csv", ["trial", "sparsity", "l1_norm", "residual"], rows)
    return {"epsilon": eps, "atoms": U.shape[1], "mean_sparsity": float(np.mean([r[1] for r in rows]))}


def cmd_learn(args) -> dict:
    X = formats.read_complex(args.complex)
    l, m = args.layers
    index = X.family(l, m, 0, 0)
    Y = formats.read_signals(args.signals, index, X)
    res = learn.learn_topology(
        X, l, m, Y, gamma=args.gamma, threshold=args.threshold, pmax=args.pmax,
        eta_threshold=args.eta_threshold, perspective=args.perspective,
    )
    result = res.as_dict()
    result.update({"layers": [l, m], "perspective": args.perspective, "n_candidates": len(res.candidates)})
    out = _out_dir(args)
    formats.write_json(out / "learn.json", result)
    cols = [f"cand{i}" for i in res.selected]
    formats.write_matrix(out / "B_hat.csv", index, cols, res.B_hat)
    formats.write_matrix(out / "L_u_hat.csv", index, index, res.L_u_hat)
    return {"eta": res.eta, "gated": res.gated, "selected": result["selected"]}


def cmd_gen_complex(args) -> dict:
    cfg = synth.RandomCmcConfig(
        layer_nodes=args.nodes, p_intra=args.p_intra, p_cross=args.p_cross, p_fill=args.p_fill,
        p_fill_intra=args.p_fill_intra, pmax=args.pmax, seed=args.seed, require_cross=args.require_cross,
    )
    X = synth.random_cmc(cfg)
    formats.write_complex(X, _out_dir(args) / "complex.json")
    flat = X.flatten()
    return {"N": flat.N, "E": flat.E, "C": flat.C}


def cmd_gen_signals(args) -> dict:
    X = formats.read_complex(args.complex)
    out = _out_dir(args)
    if args.model == "planted":
        if args.layers is None:
            raise InputError("--layers is required for planted corpora")
        l, m = args.layers
        Y = learn.planted_corpus(X, l, m, list(args.planted), args.trials, args.seed, args.pmax, args.perspective)
        formats.write_signals(out / "signals.csv", X.family(l, m, 0, 0), Y)
        return {"trials": args.trials, "rows": int(Y.shape[0])}
    sigmas = tuple(args.sigmas)
    if len(sigmas) != 3:
        raise InputError("--sigmas takes three values: irrotational, solenoidal, harmonic")
    s = synth.gen_signals(X, args.model, args.trials, args.seed, args.layers, args.perspective, sigmas)
    formats.write_signals(out / "signals.csv", s.index, s.values)
    for name, part in s.components.items():
        formats.write_signals(out / f"signals_{name}.csv", s.index, part)
    return {"trials": args.trials, "rows": len(s.index)}


def _write_report(out: Path, name: str, report: synth.ExperimentReport, complex_path: Path) -> None:
    formats.write_table(out / f"{name}.csv", report.columns, report.rows)
    meta = dict(report.config)
    meta.update({"complex": str(complex_path), "versions": _versions(), "columns": report.columns})
    formats.write_json(out / f"{name}.json", meta)


def cmd_experiment(args) -> dict:
    X = formats.read_complex(args.complex)
    l, m = args.layers
    out = _out_dir(args)
    if args.kind == "denoise":
        report = synth.denoise_experiment(X, l, m, args.trials, args.snr_grid, args.seed, args.perspective, args.jobs)
    else:
        report = synth.sparsity_experiment(X, l, m, args.trials, args.seed, args.epsilon, args.perspective)
    _write_report(out, args.kind, report, args.complex)
    return {"experiment": args.kind, "rows": len(report.rows), "trials": args.trials}


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmctsp", description="Signal processing over cell multicomplexes.")
    parser.add_argument("--out", default=os.environ.get(OUT_ENV, "."),
                        help=f"output directory (default: ${OUT_ENV} or the working directory)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
        if func is not None:
            p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "validate a complex and report its flattened sizes")
    _add_complex(p)

    p = add("counts", cmd_counts, "cell counts of every (k, n) family of a layer pair")
    _add_complex(p)
    _add_layers(p)

    p = add("boundary", cmd_boundary, "write signed incidence matrices as triplet CSV")
    _add_complex(p)
    _add_layers(p, required=False)
    _add_orders(p)
    _add_from(p)

    p = add("laplacian", cmd_laplacian, "Hodge Laplacians (no --layers) or a cross-Laplacian")
    _add_complex(p)
    _add_layers(p, required=False)
    _add_orders(p)
    _add_from(p)

    p = add("betti", cmd_betti, "cross-Betti vector of a layer pair")
    _add_complex(p)
    _add_layers(p)
    _add_orders(p)

    p = add("cones", cmd_cones, "cone count, per-hub cones and harmonic cross-hubs")
    _add_complex(p)
    _add_layers(p)
    p.add_argument("--hub-layer", type=int, default=None, help="layer holding the cone apexes (default: M)")

    for name, func, text in (
        ("decompose", cmd_decompose, "Hodge split of edge signals (mono) or cross-edge signals"),
        ("estimate", cmd_estimate, "closed-form component estimates of noisy cross-edge signals"),
    ):
        p = add(name, func, text)
        _add_complex(p)
        _add_signals(p)
        _add_layers(p, required=(name == "estimate"))
        _add_from(p)

    p = add("sparsify", cmd_sparsify, "basis pursuit over the edge or cross-edge eigenbasis")
    _add_complex(p)
    _add_signals(p)
    _add_layers(p, required=False)
    _add_from(p)
    p.add_argument("--epsilon", type=float, required=True, help="bound on the residual norm")
    p.add_argument("--scale-epsilon", action="store_true",
                   help="scale epsilon by (#cross-edges / #edges) for the cross problem")

    p = add("learn", cmd_learn, "infer filled cross-cells from cross-edge signals")
    _add_complex(p)
    _add_signals(p)
    _add_layers(p)
    _add_from(p)
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--gamma", type=int, help="number of cells to select")
    sel.add_argument("--threshold", type=float, help="select every candidate with circulation below this value")
    p.add_argument("--eta-threshold", type=float, default=learn.ETA_THRESHOLD,
                   help=f"curl-energy gate (default: {learn.ETA_THRESHOLD})")
    p.add_argument("--pmax", type=int, default=learn.PMAX, help=f"longest closing path (default: {learn.PMAX})")

    gen = add("gen", None, "generate random complexes or signals")
    gsub = gen.add_subparsers(dest="what", required=True)
    g = gsub.add_parser("complex", help="random complex")
    g.set_defaults(func=cmd_gen_complex)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    g.add_argument("--nodes", type=_ints, default=(6, 6), help="nodes per layer, e.g. 9,9,9")
    g.add_argument("--p-intra", type=float, default=0.4)
    g.add_argument("--p-cross", type=float, default=0.3)
    g.add_argument("--p-fill", type=float, default=0.0, help="fill probability of cross-cell candidates")
    g.add_argument("--p-fill-intra", type=float, default=0.0, help="fill probability of intra triangles")
    g.add_argument("--pmax", type=int, default=1)
    g.add_argument("--require-cross", action="store_true")
    _add_seed(g)
    g = gsub.add_parser("signals", help="random signals on a complex")
    g.set_defaults(func=cmd_gen_signals)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    _add_complex(g)
    _add_layers(g, required=False)
    _add_from(g)
    g.add_argument("--model", choices=("gaussian_edge", "hodge_model", "planted"), default="gaussian_edge")
    g.add_argument("--sigmas", type=_floats, default=[1.0, 1.0, 1.0],
                   help="standard deviations of the three model components")
    g.add_argument("--planted", type=_ints, default=(), help="candidate positions with zero circulation")
    g.add_argument("--pmax", type=int, default=learn.PMAX)
    g.add_argument("--trials", type=int, default=1)
    _add_seed(g)

    p = add("experiment", cmd_experiment, "Monte Carlo experiments")
    p.add_argument("kind", choices=("denoise", "sparsity"))
    _add_complex(p)
    _add_layers(p)
    p.add_argument("--from", dest="perspective", choices=("ell", "m"), default="m",
                   help="perspective of the cross-Laplacian (default: m)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--snr-grid", type=_floats, default=[0, 5, 10, 15, 20], help="SNR values in dB")
    p.add_argument("--epsilon", type=_floats, default=None,
                   help="epsilon grid for the sparsity sweep (default: exact support path)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    _add_seed(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(formats._jsonable(result), sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
