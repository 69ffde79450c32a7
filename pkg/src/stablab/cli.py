"""Command-line surface: one JSON document per invocation.

Subcommands: group, extension, verify, symspace, stability.  Group
inputs are presentation files in the `.grp` text grammar, or
`catalog:<name>` for built-in groups.  Extension files use the same
grammar plus `central <word>` lines naming central generators; the file
is read as the total group L and the extension is L -> L / <central>.

Exit codes: 0 success, 1 computation error (the JSON carries the error
name), 2 usage error.

Beta-specs for --pushforward have the form `<module>:<images>` where
`<module>` parses like a coefficient module ("Z/2", "Z/2+Z/4") and
`<images>` gives, per kernel generator, comma-separated coordinates in
the target, generators separated by semicolons (e.g. "Z/4:2" or
"Z/2+Z/4:1,0;0,2").
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

import numpy as np

SCHEMA_VERSION = 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        return [_jsonable(v) for v in sorted(x)] if isinstance(x, set) \
            else [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _emit(doc: dict, pretty: bool) -> None:
    doc = {"schema_version": SCHEMA_VERSION, **_jsonable(doc)}
    if pretty:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))


def _load_group(spec: str):
    from .catalog import catalog_group
    from .gtable import group_table
    from .presentation import parse_presentation
    if spec.startswith("catalog:"):
        return catalog_group(spec.split(":", 1)[1])
    text = pathlib.Path(spec).read_text(encoding="utf-8")
    return group_table(parse_presentation(text))


def _load_extension(spec: str):
    from .extensions import central_quotient_extension, extension_catalog
    from .gtable import group_table
    from .presentation import parse_presentation
    if spec.startswith("catalog:"):
        name = spec.split(":", 1)[1]
        for nm, e in extension_catalog():
            if nm == name:
                return nm, e
        from .errors import UnknownEntry
        raise UnknownEntry(f"no catalog extension named {name!r}")
    lines = pathlib.Path(spec).read_text(encoding="utf-8").splitlines()
    central_words = [ln.split(None, 1)[1] for ln in lines
                     if ln.strip().startswith("central ")]
    pres_text = "\n".join(ln for ln in lines
                          if not ln.strip().startswith("central ")) + "\n"
    pres = parse_presentation(pres_text)
    g = group_table(pres)
    central = [g.evaluate(pres.parse_word(w)) for w in central_words]
    return pres.name, central_quotient_extension(g, central)


def _parse_beta(spec: str, kernel):
    from .cohomology import CoefficientModule
    mod, _, imgs = spec.partition(":")
    target = CoefficientModule.parse(mod).group
    if target is None:
        raise ValueError("pushforward target must be a finite module")
    images = [tuple(int(v) for v in part.split(","))
              for part in imgs.split(";")] if imgs else []
    if len(images) != kernel.rank:
        raise ValueError(
            f"beta-spec gives {len(images)} generator images, kernel "
            f"rank is {kernel.rank}")
    return target, images


# -- subcommand handlers -------------------------------------------------

def _cmd_group(args) -> dict:
    from .cohomology import CoefficientModule, cohomology
    from .extsq import exterior_square
    from .gtable import abelian_invariants
    from .rs import relation_module
    g = _load_group(args.file)
    out: dict = {"group": g.name, "order": g.order}
    if args.abelianization:
        out["abelianization"] = list(abelian_invariants(g).invariant_factors)
    if args.multiplier:
        rm = relation_module(g.presentation)
        out["invariant_factors"] = list(rm.h2.invariant_factors)
    if args.exterior_square:
        out["exterior_square"] = exterior_square(g).summary()
    if args.cohomology:
        deg = int(args.cohomology[0])
        module = CoefficientModule.parse(args.cohomology[1])
        h = cohomology(g, module, deg)
        out["cohomology"] = {"degree": deg, "module": str(module),
                             "invariant_factors":
                                 list(h.struct.invariant_factors),
                             "order": h.order}
    return out


def _cmd_extension(args) -> dict:
    from .cohomology import CoefficientModule
    from .extensions import (five_term_check, pushforward,
                             transgression)
    name, e = _load_extension(args.file)
    out: dict = {"extension": name,
                 "total_order": e.total.order,
                 "base_order": e.base.order,
                 "kernel": list(e.kernel.invariant_factors)}
    if args.pushforward:
        target, images = _parse_beta(args.pushforward, e.kernel)
        pf = pushforward(e, target, images)
        out["pushforward"] = {
            "target": list(target.invariant_factors),
            "total_order": pf.total.order,
            "kernel": list(pf.kernel.invariant_factors)}
    if args.transgression:
        module = CoefficientModule.parse(args.transgression)
        tg = transgression(e, module)
        out["transgression"] = {
            "module": str(module),
            "matrix": tg.matrix().tolist(),
            "image_classes": len(tg.image_classes())}
    if args.five_term:
        module = CoefficientModule.parse(args.five_term)
        out["five_term"] = five_term_check(e, module).to_json()
    return out


def _cmd_verify(args) -> dict:
    from .verify import run_suite
    return run_suite(args.suite, args.max_order)


def _cmd_symspace(args) -> dict:
    from .symspace import (catalog_entry, instability_verdict,
                           is_odd_rational_homology_sphere,
                           poincare_polynomial)
    if args.entry:
        e = catalog_entry(args.entry)
        p = poincare_polynomial(e)
        return {"name": e.name, "group": e.group, "dim": e.dim,
                "poincare": p.to_list(),
                "odd_rhs": is_odd_rational_homology_sphere(p, e.dim)}
    # '+'-separated so group labels like SO(3,1) keep their commas
    return instability_verdict([f.strip() for f in
                                args.verdict.split("+") if f.strip()])


def _read_config(path: str) -> dict:
    out = {}
    for ln in pathlib.Path(path).read_text(encoding="utf-8").splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        key, _, val = ln.partition("=")
        out[key.strip()] = val.strip()
    return out


def _cmd_stability(args) -> dict:
    from .stability import (NormKind, SolverConfig, UnitaryTuple, defect,
                            free_commutator_presentation, perturb,
                            perturbation_solve, alpha_threshold,
                            quotient_transfer_experiment, voiculescu_pair)
    kind = NormKind.parse(args.norm)
    out: dict = {"norm": str(kind), "seed": args.seed}
    tuple_ = None
    pres = None
    if args.voiculescu:
        tuple_ = voiculescu_pair(args.voiculescu)
        pres = free_commutator_presentation()
        out["voiculescu_n"] = args.voiculescu
    if args.defect:
        if tuple_ is None:
            raise ValueError("--defect needs a tuple source "
                             "(e.g. --voiculescu <n>)")
        rep = defect(pres, tuple_, kind)
        out["max_defect"] = rep.max_defect
        out["per_relator"] = rep.per_relator
    if args.solve is not None:
        from .report import recovery_experiment, write_report
        cfgfile = _read_config(args.solve)
        kind2 = NormKind.parse(cfgfile.get("norm", args.norm))
        cfg = SolverConfig(
            max_iterations=int(cfgfile.get("iterations", 3000)),
            seed=int(cfgfile.get("seed", args.seed)))
        exp = recovery_experiment(
            cfgfile.get("case", "cyclic:3"),
            int(cfgfile.get("n", 6)),
            [float(d) for d in cfgfile.get("delta", "1e-2,1e-3").split(",")],
            trials=int(cfgfile.get("trials", 5)),
            kind=kind2, seed=int(cfgfile.get("seed", args.seed)), cfg=cfg)
        out["experiment"] = {k: v for k, v in exp.items() if k != "traces"}
        if args.report_dir:
            out["report_files"] = write_report(exp, args.report_dir)
    if args.alpha:
        g = _load_group(args.alpha)
        out["alpha"] = alpha_threshold(g, seed=args.seed)
        out["alpha_group"] = g.name
    if args.quotient_transfer:
        from .presentation import parse_presentation
        from .gtable import group_table
        from .stability import random_unitary, regular_representation
        from .gtable import quotient_table
        lines = pathlib.Path(args.quotient_transfer).read_text(
            encoding="utf-8").splitlines()
        central_words = [ln.split(None, 1)[1] for ln in lines
                         if ln.strip().startswith("central ")]
        pres_text = "\n".join(ln for ln in lines
                              if not ln.strip().startswith("central ")) + "\n"
        p = parse_presentation(pres_text)
        g = group_table(p)
        n_words = [p.parse_word(w) for w in central_words]
        # genuine tuple: lift of the quotient's regular representation
        elems = g.subgroup_closure([g.evaluate(w) for w in n_words])
        q, proj = quotient_table(g, elems)
        reg = regular_representation(q)
        rng = np.random.default_rng(args.seed)
        conj = random_unitary(q.order, rng)
        t0 = UnitaryTuple(tuple(
            conj @ np.asarray(reg[int(proj[gi])], dtype=complex)
            @ conj.conj().T for gi in g.gen_images))
        t = perturb(t0, args.delta, rng)
        res = quotient_transfer_experiment(
            p, n_words, t, cfg=SolverConfig(seed=args.seed), kind=kind)
        out["quotient_transfer"] = {
            k: v for k, v in res.items() if k != "tuple"}
        out["quotient_transfer"]["solver"].pop("trace", None)
    return out


# -- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stablab",
        description="group cohomology, central extensions, and "
                    "norm-stability experiments")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true",
                        help="indent the JSON output")
    ap.add_argument("--pretty", action="store_true",
                    help="indent the JSON output")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group", parents=[common],
                       help="compute invariants of a presentation")
    g.add_argument("file", help=".grp file or catalog:<name>")
    g.add_argument("--abelianization", action="store_true")
    g.add_argument("--multiplier", action="store_true")
    g.add_argument("--exterior-square", action="store_true")
    g.add_argument("--cohomology", nargs=2, metavar=("DEG", "COEFFS"))
    g.set_defaults(fn=_cmd_group)

    e = sub.add_parser("extension", parents=[common],
                       help="analyze a central extension")
    e.add_argument("file", help=".grp file with `central` lines, or "
                               "catalog:<name>")
    e.add_argument("--pushforward", metavar="BETA")
    e.add_argument("--transgression", metavar="COEFFS")
    e.add_argument("--five-term", metavar="COEFFS")
    e.set_defaults(fn=_cmd_extension)

    v = sub.add_parser("verify", parents=[common],
                       help="run cross-check suites")
    v.add_argument("--suite", required=True,
                   choices=("miller", "split", "lemma-i", "five-term",
                            "spectral", "all"))
    v.add_argument("--max-order", type=int, default=16)
    v.set_defaults(fn=_cmd_verify)

    s = sub.add_parser("symspace", parents=[common],
                       help="symmetric-space catalog queries")
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--entry", metavar="NAME")
    grp.add_argument("--verdict", metavar="FACTORS",
                     help="'+'-separated catalog names or group labels, "
                          "e.g. 'SO(3,1)+SO(5,1)'")
    s.set_defaults(fn=_cmd_symspace)

    st = sub.add_parser("stability", parents=[common],
                        help="norm and solver experiments")
    st.add_argument("--norm", default="frobenius",
                    help="frobenius | hs | operator | schatten:<p>")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--delta", type=float, default=1e-3)
    st.add_argument("--defect", action="store_true")
    st.add_argument("--solve", metavar="CONFIG",
                    help="run a recovery experiment from a key=value file")
    st.add_argument("--voiculescu", type=int, metavar="N")
    st.add_argument("--alpha", metavar="FILE",
                    help="alpha threshold of the group in FILE")
    st.add_argument("--quotient-transfer", metavar="FILE",
                    help=".grp file with `central` lines for the kernel")
    st.add_argument("--report-dir", metavar="DIR",
                    help="write results.csv and trace figures here")
    st.set_defaults(fn=_cmd_stability)
    return ap


def main(argv: list[str] | None = None) -> int:
    from .errors import StablabError
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        doc = args.fn(args)
    except StablabError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)},
              args.pretty)
        return 1
    except (ValueError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)},
              args.pretty)
        return 1
    _emit(doc, args.pretty)
    if args.command == "verify" and not doc.get("ok", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
