"""Command-line interface.

Subcommands: expand (model/table file -> polynomial + level map), check
(submodularity / representability report), minimize (solver dispatch), msfm
(block decomposition with trace), gadget-dump (DIMACS network), denoise
(PGM pipeline demo), bench (seeded instance/method timing table).

Exit codes: 0 success, 1 no applicable method, 2 invalid input, 3 internal
verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import dimacs, encode, generators, graphcut, msfm, pgm, poly, submod
from .errors import (
    CapExceededError,
    EncodeError,
    GibbsCutError,
    MsfmError,
    NotRepresentableError,
    PolynomialError,
    VerificationError,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID = 2
EXIT_INTERNAL = 3


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise PolynomialError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise PolynomialError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PolynomialError(f"{path}: expected a JSON object")
    return doc


def _load_polynomial(path: str) -> poly.Polynomial:
    return poly.from_json_dict(_load_json(path))


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _report_doc(rep: submod.MinimizerReport, method: str, wall: float) -> dict:
    return {
        "min_value": str(rep.min_value),
        "minimal": list(rep.minimal),
        "maximal": list(rep.maximal),
        "n_vars": len(rep.vars),
        "method": method,
        "wall_time_s": round(wall, 6),
    }


# ---------------------------------------------------------------------------
# expand


def _expansion_from_file(path: str) -> encode.Expansion:
    doc = _load_json(path)
    if "pairwise" in doc:
        model = encode.model_from_json_dict(doc, base_dir=os.path.dirname(path) or ".")
        return encode.expand_energy_model(model)
    if "values" in doc:
        try:
            fn = encode.LabelFunction.from_table(int(doc["n"]), int(doc["k"]), doc["values"])
        except (KeyError, TypeError, ValueError) as exc:
            raise EncodeError(f"malformed table document: {exc}") from exc
        ex = encode.expand_function(fn)
        c = encode.penalty_constant(ex.poly)
        penalized = encode.apply_order_penalty(ex.poly, c, ex.level_map)
        return encode.Expansion(penalized, ex.level_map, ex.base_value, c)
    raise EncodeError("model file needs either a 'pairwise' section or a 'values' table")


def cmd_expand(args) -> int:
    ex = _expansion_from_file(args.model)
    stem = os.path.splitext(args.model)[0]
    poly_out = args.out or stem + ".poly.json"
    map_out = args.map_out or stem + ".map.json"
    with open(poly_out, "w") as fh:
        fh.write(poly.dumps(ex.poly) + "\n")
    with open(map_out, "w") as fh:
        json.dump({"n": ex.level_map.n, "k": ex.level_map.k, "layout": "site-major"}, fh)
        fh.write("\n")
    _emit(
        {
            "polynomial": poly_out,
            "level_map": map_out,
            "n_vars": ex.poly.n_vars,
            "n_monomials": len(ex.poly.monomials),
            "penalty_c": str(ex.penalty),
            "base_value": str(ex.base_value),
        },
        None,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    p = _load_polynomial(args.polynomial)
    witness = submod.is_submodular_pairwise(p)
    rep = submod.in_p_suf(p)
    doc = {
        "n_vars": p.n_vars,
        "degree": p.degree(),
        "submodular": witness.verdict,
        "violation": None,
        "p_suf": rep.verdict,
        "violating_pair": list(rep.violating_pair) if rep.violating_pair else None,
        "pairs": [
            {
                "i": e.i,
                "j": e.j,
                "quad_coef": str(e.quad_coef),
                "positive_higher": str(e.positive_higher),
                "ok": e.corrected_ok,
                "literal_ok": e.literal_ok,
            }
            for e in rep.pairs
        ],
        "class": {
            "all_nonlinear_nonpositive": rep.f_minus,
            "higher_order_nonnegative": rep.f_plus,
        },
        "literal_condition": rep.literal_verdict,
        "strict_quadratics": rep.strict_quadratics,
    }
    if witness.violation is not None:
        v = witness.violation
        doc["violation"] = {
            "i": v.i,
            "j": v.j,
            "context": {str(var): bit for var, bit in sorted(v.context.items())},
            "value": str(v.value),
        }
    _emit(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# minimize


def _pick_method(p: poly.Polynomial) -> str:
    if submod.in_p_suf(p).verdict:
        return "cut"
    try:
        if submod.is_submodular_pairwise(p).verdict:
            return "msfm"
    except CapExceededError:
        pass
    if p.n_vars <= submod.resolve_brute_cap():
        return "brute"
    raise NotRepresentableError(
        "no applicable method: not in the gadget class, not verifiably "
        "submodular, and beyond the brute-force cap"
    )


def _run_method(p: poly.Polynomial, method: str, msfm_cfg: msfm.MsfmConfig):
    if method == "brute":
        return submod.brute_minimize(p), None
    if method == "cut":
        return graphcut.minimize_via_cut(p), None
    if method == "msfm":
        rep, trace = msfm.msfm_minimize(p, msfm_cfg)
        return rep, trace
    raise PolynomialError(f"unknown method {method!r}")


def cmd_minimize(args) -> int:
    p = _load_polynomial(args.polynomial)
    method = args.method if args.method != "auto" else _pick_method(p)
    cfg = msfm.MsfmConfig(levels=args.levels, block_size=args.block_size)
    start = time.perf_counter()
    rep, trace = _run_method(p, method, cfg)
    wall = time.perf_counter() - start
    if args.verify and p.n_vars <= submod.resolve_brute_cap():
        oracle = submod.brute_minimize(p)
        same = oracle.min_value == rep.min_value
        if same and method != "brute" and oracle.lattice:
            same = oracle.minimal == rep.minimal and oracle.maximal == rep.maximal
        if not same:
            raise VerificationError(
                f"method {method} disagrees with brute force: "
                f"{rep.min_value} vs {oracle.min_value}"
            )
    doc = _report_doc(rep, method, wall)
    if trace is not None and args.trace:
        with open(args.trace, "w") as fh:
            json.dump(msfm.trace_to_json_dict(trace), fh, indent=2)
            fh.write("\n")
        doc["trace"] = args.trace
    _emit(doc, args.out)
    return EXIT_OK


def cmd_msfm(args) -> int:
    p = _load_polynomial(args.polynomial)
    cfg = msfm.MsfmConfig(levels=args.levels, block_size=args.block_size)
    start = time.perf_counter()
    rep, trace = msfm.msfm_minimize(p, cfg)
    wall = time.perf_counter() - start
    doc = _report_doc(rep, "msfm", wall)
    doc["trace"] = msfm.trace_to_json_dict(trace)
    _emit(doc, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# gadget-dump


def cmd_gadget_dump(args) -> int:
    p = _load_polynomial(args.polynomial)
    net = graphcut.build_network(p)
    buf = io.StringIO()
    scale = dimacs.dump_network(net, buf)
    with open(args.out, "w") as fh:
        fh.write(buf.getvalue())
    _emit(
        {
            "dimacs": args.out,
            "nodes": net.n_nodes,
            "arcs": len(net.arcs),
            "aux_nodes": len(net.aux_nodes),
            "scale": scale,
            "offset": str(net.offset),
        },
        None,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# denoise


def cmd_denoise(args) -> int:
    if args.levels < 2 or args.levels > 16:
        raise EncodeError("levels must be between 2 and 16")
    img = pgm.read_pgm(args.input)
    k = args.levels - 1
    lam = poly.as_fraction(args.lam)
    model = encode.model_from_image(
        img.pixels, img.width, img.height, img.maxval, k, lam, data=args.data
    )
    ex = encode.expand_energy_model(model)
    start = time.perf_counter()
    method = args.method
    if method == "auto":
        method = "cut"
    if method == "cut":
        rep = graphcut.minimize_via_cut(ex.poly)
    elif method == "msfm":
        cfg = msfm.MsfmConfig(
            levels=args.msfm_levels,
            strategy="grid",
            block_size=(args.tile, args.tile),
            grid=(img.width, img.height, k),
            check_submodular=False,
        )
        rep, _ = msfm.msfm_minimize(ex.poly, cfg)
    elif method == "brute":
        rep = submod.brute_minimize(ex.poly)
    else:
        raise PolynomialError(f"unknown method {method!r}")
    wall = time.perf_counter() - start
    labels = encode.decode_levels(rep.minimal, ex.level_map)
    values = model.label_values(labels)
    out_pixels = tuple(min(img.maxval, max(0, round(v))) for v in values)
    out_img = pgm.ImageBuffer(img.width, img.height, img.maxval, out_pixels)
    pgm.write_pgm(out_img, args.output, binary=not args.ascii)
    _emit(
        {
            "output": args.output,
            "method": method,
            "levels": args.levels,
            "energy": str(rep.min_value + ex.base_value),
            "wall_time_s": round(wall, 6),
        },
        None,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


def _bench_instances(suite: dict, seed: int):
    rng = random.Random(seed)
    for family in suite.get("families", []):
        name = family.get("name")
        count = int(family.get("count", 1))
        if name == "chain":
            for size in family.get("sizes", []):
                for idx in range(count):
                    yield "chain", f"n{size}#{idx}", generators.random_chain(rng, int(size)), None
        elif name == "psuf":
            degree = int(family.get("degree", 4))
            for size in family.get("sizes", []):
                for idx in range(count):
                    yield "psuf", f"n{size}#{idx}", generators.random_psuf(rng, int(size), degree), None
        elif name == "grid":
            width = int(family.get("width", 4))
            height = int(family.get("height", 4))
            k = int(family.get("k", 1))
            for idx in range(count):
                model = generators.random_energy_model(rng, width, height, k)
                ex = encode.expand_energy_model(model)
                yield "grid", f"{width}x{height}k{k}#{idx}", ex.poly, (width, height, k)
        else:
            raise PolynomialError(f"unknown bench family {name!r}")


def cmd_bench(args) -> int:
    suite = _load_json(args.suite)
    rows = []
    cap = submod.resolve_brute_cap()
    for family, label, p, grid in _bench_instances(suite, args.seed):
        results: dict[str, Fraction] = {}
        methods = []
        if p.n_vars <= cap:
            methods.append("brute")
        if submod.in_p_suf(p).verdict:
            methods.append("cut")
        try:
            if submod.is_submodular_pairwise(p).verdict:
                methods.append("msfm")
        except CapExceededError:
            pass
        for method in methods:
            note = ""
            start = time.perf_counter()
            if method == "brute":
                rep = submod.brute_minimize(p)
            elif method == "cut":
                rep = graphcut.minimize_via_cut(p)
            else:
                if grid is not None:
                    cfg = msfm.MsfmConfig(
                        levels=2, strategy="grid", block_size=(2, 2), grid=grid,
                        check_submodular=False,
                    )
                else:
                    cfg = msfm.MsfmConfig(levels=2, block_size=4, check_submodular=False)
                rep, trace = msfm.msfm_minimize(p, cfg)
                fixed1 = len(trace.entries[0].cumulative_fixed) if trace.entries else 0
                note = f"fixed_level1={fixed1}"
            wall = time.perf_counter() - start
            results[method] = rep.min_value
            rows.append(
                {
                    "family": family,
                    "label": label,
                    "n_vars": p.n_vars,
                    "method": method,
                    "min_value": str(rep.min_value),
                    "wall_time_s": f"{wall:.6f}",
                    "note": note,
                }
            )
        if len(set(results.values())) > 1:
            raise VerificationError(f"methods disagree on {family}/{label}: {results}")
    fieldnames = ["family", "label", "n_vars", "method", "min_value", "wall_time_s", "note"]
    if args.out:
        fh = open(args.out, "w", newline="")
    else:
        fh = sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gibbscut",
        description="Exact minimization of ordered-label energies via Boolean "
        "polynomial expansion and graph cuts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_expand = sub.add_parser("expand", help="expand a model/table file into a polynomial")
    p_expand.add_argument("model")
    p_expand.add_argument("-o", "--out", help="polynomial output path")
    p_expand.add_argument("--map-out", help="level map output path")
    p_expand.set_defaults(func=cmd_expand)

    p_check = sub.add_parser("check", help="submodularity and representability report")
    p_check.add_argument("polynomial")
    p_check.add_argument("-o", "--out")
    p_check.set_defaults(func=cmd_check)

    p_min = sub.add_parser("minimize", help="minimize a polynomial file")
    p_min.add_argument("polynomial")
    p_min.add_argument("--method", choices=["auto", "brute", "cut", "msfm"], default="auto")
    p_min.add_argument("--levels", type=int, default=3, help="msfm level count")
    p_min.add_argument("--block-size", type=int, default=8, help="msfm chunk size")
    p_min.add_argument("--trace", help="write the msfm trace here")
    p_min.add_argument("--verify", action="store_true", help="cross-check against brute force")
    p_min.add_argument("-o", "--out")
    p_min.set_defaults(func=cmd_minimize)

    p_msfm = sub.add_parser("msfm", help="block-decomposition solve with full trace")
    p_msfm.add_argument("polynomial")
    p_msfm.add_argument("--levels", type=int, default=3)
    p_msfm.add_argument("--block-size", type=int, default=8)
    p_msfm.add_argument("-o", "--out")
    p_msfm.set_defaults(func=cmd_msfm)

    p_dump = sub.add_parser("gadget-dump", help="write the flow network as DIMACS max-flow")
    p_dump.add_argument("polynomial")
    p_dump.add_argument("-o", "--out", required=True)
    p_dump.set_defaults(func=cmd_gadget_dump)

    p_den = sub.add_parser("denoise", help="quantized denoising of a PGM image")
    p_den.add_argument("input")
    p_den.add_argument("output")
    p_den.add_argument("--levels", type=int, default=4, help="number of gray levels (k+1)")
    p_den.add_argument("--lambda", dest="lam", default="1", help="smoothing weight (rational)")
    p_den.add_argument("--data", choices=["absolute", "quadratic"], default="absolute")
    p_den.add_argument("--method", choices=["auto", "cut", "msfm", "brute"], default="auto")
    p_den.add_argument("--msfm-levels", type=int, default=3)
    p_den.add_argument("--tile", type=int, default=8, help="msfm tile side in sites")
    p_den.add_argument("--ascii", action="store_true", help="write P2 instead of P5")
    p_den.set_defaults(func=cmd_denoise)

    p_bench = sub.add_parser("bench", help="run a seeded benchmark suite")
    p_bench.add_argument("suite")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("-o", "--out", help="CSV output path (default stdout)")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (NotRepresentableError, CapExceededError, MsfmError) as exc:
        print(f"no applicable method: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except GibbsCutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
