import argparse
import json
import re
import sys
from pathlib import Path

from pydantic import ValidationError
from rich.console import Console

# Use explicit relative imports when running as a module within src
from .utils.logging_config import setup_logging, get_logger
from .utils.config import RunConfig, get_config

# Setup logging first, as other modules might use it upon import
setup_logging()
logger = get_logger(__name__)

from .algebra.gradedring import RingMap, RingPresentation, VariableTable  # noqa: E402
from .algebra.polyparse import parse_poly  # noqa: E402
from .errors import ChowGlueError, GluingError, PolynomialError, UsageError, VerificationError  # noqa: E402
from .geometry.bundle_expr import parse_bundle  # noqa: E402
from .geometry.chern import base_table, chern_class  # noqa: E402
from .geometry.invariants import GroupAction, invariant_ideal_generators_check, invariant_in_quotient  # noqa: E402
from .geometry.localization import ProjectiveRep, localize_pushforward, localized_integral  # noqa: E402
from .genus3.constants import load_constants  # noqa: E402
from .genus3.pipeline import run_pipeline  # noqa: E402
from .genus3.strata import derive_boundary_strata, derive_hyperelliptic, derive_open  # noqa: E402
from .genus3.report import FAIL, PASS, VerificationReport  # noqa: E402
from .gluing.gluecore import GluingDatum, glue  # noqa: E402
from .ideals.engine import compare_ideals, kernel, member, nzd_check  # noqa: E402
from .utils.schemas import InvariantsModel, LocalizeModel, PresentationModel, poly_from_input  # noqa: E402

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

STRATA = ("hyperelliptic", "open", "delta1", "delta11", "delta111", "boundary")

console = Console()


def _read_json(text_or_path: str):
    """Inline JSON, or a path to a JSON file."""
    p = Path(text_or_path)
    if p.suffix == ".json" and p.exists():
        with open(p, "r") as f:
            return json.load(f)
    return json.loads(text_or_path)


def _emit(payload: dict, out: str = None, indent: int = 2):
    text = json.dumps(payload, indent=indent)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
        logger.info(f"Wrote {out}")
    else:
        print(text)


# commands


def cmd_verify(args, run: RunConfig) -> int:
    constants = load_constants(run.constants_file)
    report = VerificationReport(run.max_degree, constants.checksum, constants.source_name)
    try:
        run_pipeline(constants, run.max_degree, run.workers, report)
    except (VerificationError, GluingError) as e:
        logger.error(f"Verification stopped: {e}")
        report.record("pipeline", "aborted", False, stage="pipeline", detail=str(e))

    payload = report.to_json(run.include_runtimes)
    if run.report_path:
        _emit(payload, str(run.report_path), run.indent)
    if args.update_golden:
        if not run.golden_report:
            raise UsageError("No golden report path configured (pipeline.golden_report)")
        _emit(report.to_json(False), str(run.golden_report), run.indent)
    console.print(report.summary_table())
    console.print(f"[bold]{payload['status']}[/bold]: {len(report.claims) - len(report.failures())}"
                  f"/{len(report.claims)} claims")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_derive(args, run: RunConfig) -> int:
    constants = load_constants(run.constants_file)
    report = VerificationReport(run.max_degree, constants.checksum, constants.source_name)
    if args.stratum == "hyperelliptic":
        records = [derive_hyperelliptic(constants, report, run.max_degree)]
    elif args.stratum == "open":
        records = [derive_open(constants, report)]
    else:
        records = derive_boundary_strata(constants, report, run.max_degree)
        if args.stratum != "boundary":
            records = [r for r in records if r.name == args.stratum]
    payload = {"strata": {r.name: r.to_json() for r in records},
               "claims": [c.to_json() for c in report.claims]}
    _emit(payload, args.out, run.indent)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_glue(args, run: RunConfig) -> int:
    datum = GluingDatum.from_json(_read_json(args.datum))
    total, cert = glue(datum, run.max_degree)
    _emit({"presentation": total.to_json(), "certificate": cert.to_json()}, args.out, run.indent)
    return EXIT_OK


def _infer_table(texts) -> VariableTable:
    """Degree-1 variables named in the inputs, in order of appearance."""
    names = []
    for t in texts:
        if isinstance(t, str):
            for n in re.findall(r"[A-Za-z_][A-Za-z0-9_]*", t):
                if n not in names:
                    names.append(n)
    if names:
        logger.info(f"No --vars given; treating {', '.join(names)} as degree-1 variables")
    return VariableTable([(n, 1) for n in names])


def _ideal_inputs(args):
    if args.presentation:
        pres = PresentationModel.model_validate(_read_json(args.presentation)).to_presentation()
        return pres.table, list(pres.relations), pres
    raw = json.loads(args.gens or "[]")
    if not isinstance(raw, list):
        raise UsageError("--gens must be a JSON list")
    table = VariableTable.of(args.vars) if args.vars else _infer_table(raw + json.loads(args.other or "[]") + [args.poly or ""])
    gens = [poly_from_input(g, table) for g in raw]
    return table, gens, RingPresentation(table, gens)


def cmd_ideal(args, run: RunConfig) -> int:
    table, gens, pres = _ideal_inputs(args)
    if args.op == "member":
        if args.poly is None:
            raise UsageError("ideal member needs --poly")
        res = member(parse_poly(args.poly, table), gens, table=table, cofactors=run.track_cofactors)
        payload = {"status": PASS if res else FAIL, **res.to_json()}
    elif args.op == "equal":
        other = [poly_from_input(g, table) for g in json.loads(args.other or "[]")]
        cmp = compare_ideals(gens, other, table, run.workers)
        payload = {"status": PASS if cmp else FAIL,
                   "missing_from_second": [p.to_str() for p in cmp.missing_from_second],
                   "missing_from_first": [p.to_str() for p in cmp.missing_from_first]}
    elif args.op == "kernel":
        if not args.map:
            raise UsageError("ideal kernel needs --map (JSON: {source: presentation, images: {var: poly}})")
        map_data = _read_json(args.map)
        if not isinstance(map_data, dict) or "source" not in map_data or "images" not in map_data:
            raise UsageError("--map needs the keys 'source' and 'images'")
        source = PresentationModel.model_validate(map_data["source"]).to_presentation()
        images = {n: parse_poly(v, table) for n, v in map_data["images"].items()}
        gens_out = kernel(RingMap(source, pres, images), run.max_degree)
        payload = {"status": PASS, "kernel": [g.to_str() for g in gens_out]}
    else:
        if args.poly is None:
            raise UsageError("ideal nzd needs --poly")
        res = nzd_check(parse_poly(args.poly, table), pres, run.max_degree)
        payload = {"status": PASS if res else FAIL, **res.to_json()}
    _emit(payload, args.out, run.indent)
    return EXIT_OK if payload["status"] == PASS else EXIT_FAILED


def cmd_chern(args, run: RunConfig) -> int:
    expr = parse_bundle(args.expr)
    c = chern_class(expr, args.degree, base_table(expr))
    _emit({"expr": args.expr, "degree": args.degree, "class": c.to_str()}, args.out, run.indent)
    return EXIT_OK


def cmd_localize(args, run: RunConfig) -> int:
    model = LocalizeModel.model_validate(_read_json(args.input))
    table = VariableTable((v.name, v.degree) for v in model.characters)
    target = ProjectiveRep([poly_from_input(w, table) for w in model.weights], model.hyperplane)
    payload = {"fixed_points": [{"label": pt.label, "hyperplane": pt.hyperplane.to_str(), "euler": pt.euler.to_str()}
                                for pt in target.fixed_points()]}
    if model.restrictions is not None:
        integral = localized_integral(target, [poly_from_input(r, table) for r in model.restrictions])
        payload["integral"] = integral.to_str()
    if model.source_weights is not None:
        if model.point_map is None:
            raise UsageError("source_weights needs point_map (one target index per source coordinate)")
        source = ProjectiveRep([poly_from_input(w, table) for w in model.source_weights], model.hyperplane)
        labels = dict(zip(source.labels, model.point_map))
        pushed = localize_pushforward(source, target, labels.get, model.pullback_degree)
        payload["pushforward"] = [p.to_str() for p in pushed]
    _emit(payload, args.out, run.indent)
    return EXIT_OK


def cmd_invariants(args, run: RunConfig) -> int:
    model = InvariantsModel.model_validate(_read_json(args.input))
    table = VariableTable((v.name, v.degree) for v in model.vars)
    if model.group == "swap":
        if len(model.acting_on) != 2:
            raise UsageError("swap acts on exactly two variables")
        group = GroupAction.swap(*model.acting_on)
    else:
        group = GroupAction.permutations_of(model.acting_on)
    ideal = [poly_from_input(g, table) for g in model.ideal]
    ok = invariant_ideal_generators_check(ideal, [poly_from_input(g, table) for g in model.claimed],
                                          group, model.degree_bound, table)
    fixed = {str(e): invariant_in_quotient(poly_from_input(e, table), ideal, group, table) for e in model.elements}
    ok = ok and all(fixed.values())
    _emit({"status": PASS if ok else FAIL, "group_order": group.order, "invariant_in_quotient": fixed},
          args.out, run.indent)
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {
    "verify": cmd_verify,
    "derive": cmd_derive,
    "glue": cmd_glue,
    "ideal": cmd_ideal,
    "chern": cmd_chern,
    "localize": cmd_localize,
    "invariants": cmd_invariants,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chowglue",
                                     description="Integral Chow rings of stacks by stratification gluing")
    parser.add_argument("--max-degree", type=int, help="Degree bound for degreewise linear algebra.")
    parser.add_argument("--workers", type=int, help="Processes used to build degree slices.")
    parser.add_argument("--constants", type=Path, help="Constants file (default from config).")
    parser.add_argument("--out", type=str, help="Write JSON output here instead of stdout.")
    parser.add_argument("--verbose", action="store_true", help="DEBUG logging.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="Run the full genus-3 pipeline and check every stored constant.")
    p.add_argument("--report", type=Path, help="Where to write the JSON verification report.")
    p.add_argument("--update-golden", action="store_true", help="Rewrite the golden report used by the tests.")

    p = sub.add_parser("derive", help="Derive one stratum presentation and check it against the constants.")
    p.add_argument("stratum", choices=STRATA)

    p = sub.add_parser("glue", help="Glue an open and a closed stratum from a JSON gluing datum.")
    p.add_argument("--datum", required=True, help="JSON text or path to a .json file.")

    p = sub.add_parser("ideal", help="Ideal operations over Z[1/6].")
    p.add_argument("op", choices=("member", "equal", "kernel", "nzd"))
    p.add_argument("--vars", help="Variables as 'name:degree,...'.")
    p.add_argument("--gens", help="JSON list of generators.")
    p.add_argument("--other", help="JSON list of generators of the second ideal (equal).")
    p.add_argument("--presentation", help="Presentation JSON (instead of --vars/--gens).")
    p.add_argument("--poly", help="Polynomial for member / nzd.")
    p.add_argument("--map", help="Ring map JSON for kernel.")

    p = sub.add_parser("chern", help="Chern class of a bundle expression.")
    p.add_argument("--expr", required=True)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("localize", help="Fixed points, integrals and pushforwards on P(V).")
    p.add_argument("--input", required=True, help="LocalizeModel JSON text or path.")

    p = sub.add_parser("invariants", help="Check generators of an invariant ideal.")
    p.add_argument("--input", required=True, help="InvariantsModel JSON text or path.")
    return parser


def main(argv=None) -> int:
    """Main entry point for the chowglue command line."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        setup_logging("DEBUG")

    try:
        run = RunConfig.from_config(args.command, get_config(), max_degree=args.max_degree, workers=args.workers,
                                    constants_file=args.constants, report_path=getattr(args, "report", None),
                                    verbose=args.verbose)
        return COMMANDS[args.command](args, run)
    except (VerificationError, GluingError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILED
    except (UsageError, PolynomialError, ValidationError, json.JSONDecodeError) as e:
        logger.error(f"Invalid input for {args.command}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ChowGlueError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_FAILED
    except Exception as e:
        logger.critical(f"Unexpected error in {args.command}: {e}", exc_info=True)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
