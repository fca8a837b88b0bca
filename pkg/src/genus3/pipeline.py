"""
The genus-3 pipeline: derive every stratum, glue them in order

    open stratum  <-  hyperelliptic (H)  <-  delta1 (d1)  <-  delta11 (d11)  <-  delta111 (d111)

and compare the result with the printed relation list.
"""
import time
from typing import Dict, List, Optional

from tqdm import tqdm

from ..algebra.gradedring import GradedPoly, RingMap, RingPresentation
from ..errors import GluingError
from ..gluing.gluecore import (FAMILY_CLOSED, FAMILY_KERNEL, GluingCertificate, GluingDatum, glue,
                               restrict_to_open)
from ..ideals.engine import compare_slices, ideal_equal, prune_generators
from ..ideals.slices import IdealSlices
from ..utils.logging_config import get_logger, progress_enabled
from .constants import FINAL_RING, Genus3Constants
from .report import CERTIFICATE, DEGREE, EQUAL, EQUAL_UP_TO_UNIT, IDEAL_EQUAL, MEMBER, VerificationReport
from .strata import StratumRecord, unit_between, derive_boundary_strata, derive_hyperelliptic, derive_open

logger = get_logger(__name__)

GLUING_ORDER = ("hyperelliptic", "delta1", "delta11", "delta111")
# closed-stratum relation names of each step, in presentation order
CLOSED_LABELS = {"hyperelliptic": ("c9", "D1", "D2"), "delta1": ("f",), "delta11": (), "delta111": ()}
# relations the printed list omits as redundant, by the label the pipeline gives them
REDUNDANT = {"h(2)": "H*lift(D2)", "h(3)": "H*lift(c9)", "d1(1)": "d1*lift(f)"}
# printed final relations whose restriction to the open stratum is an open relation
OPEN_RESTRICTIONS = {"m_1": "p2", "m_2": "p1", "m_3": "p0", "r": "z2"}


class GlueStep:
    def __init__(self, index: int, record: StratumRecord, datum: GluingDatum, presentation: RingPresentation,
                 certificate: GluingCertificate, labels: List[str]):
        self.index = index
        self.record = record
        self.datum = datum
        self.presentation = presentation
        self.certificate = certificate
        self.labels = labels

    def labelled(self) -> Dict[str, GradedPoly]:
        return dict(zip(self.labels, self.presentation.relations))


class PipelineResult:
    def __init__(self, presentation: RingPresentation, report: VerificationReport, steps: List[GlueStep],
                 strata: Dict[str, StratumRecord]):
        self.presentation = presentation
        self.report = report
        self.steps = steps
        self.strata = strata


def derive_all(constants: Genus3Constants, report: VerificationReport,
               degree_bound: int = 12) -> Dict[str, StratumRecord]:
    strata = {"open": derive_open(constants, report)}
    strata["hyperelliptic"] = derive_hyperelliptic(constants, report, degree_bound)
    for record in derive_boundary_strata(constants, report, degree_bound):
        strata[record.name] = record
    return strata


def check_declared_degrees(constants: Genus3Constants, report: VerificationReport):
    bad = {m["name"]: m for m in constants.degree_mismatches()}
    for e in constants.model.entries:
        miss = bad.get(e.name)
        report.record(e.label or e.name, DEGREE, miss is None, stage="constants",
                      detail=f"declared {e.degree}" + (f", recomputed {miss['actual']}" if miss else ""))


def glue_step(index: int, previous: RingPresentation, labels: List[str], record: StratumRecord,
              degree_bound: int) -> GlueStep:
    datum = GluingDatum(previous, record.presentation, record.zsym, record.zdeg, record.restriction,
                        record.normal_class, name=f"step{index}")
    total, cert = glue(datum, degree_bound)
    closed_names = CLOSED_LABELS.get(record.name, ())
    new_labels: List[str] = []
    closed_i = kernel_i = open_i = 0
    for rel in cert.relations:
        if rel.relation.is_zero():
            continue
        if rel.family == FAMILY_CLOSED:
            name = closed_names[closed_i] if closed_i < len(closed_names) else f"q{closed_i + 1}"
            new_labels.append(f"{record.zsym}*lift({name})")
            closed_i += 1
        elif rel.family == FAMILY_KERNEL:
            kernel_i += 1
            new_labels.append(f"{record.zsym}*kernel({kernel_i})")
        else:
            new_labels.append(labels[open_i])
            open_i += 1
    if open_i != len(labels) or len(total.relations) != len(new_labels):
        raise GluingError(f"Step {index}: relation bookkeeping lost track of the open relations", cert)
    logger.info(f"Step {index} ({record.name}): {closed_i} lifted, {kernel_i} kernel, {open_i} modified relations")
    return GlueStep(index, record, datum, total, cert, new_labels)


def _truncation(source: RingPresentation, target: RingPresentation) -> RingMap:
    """Kill the generators of source that target lacks."""
    images = {n: (GradedPoly.var(target.table, n) if n in target.table else GradedPoly.zero(target.table))
              for n in source.table.names}
    return RingMap(source.free(), target, images)


def restriction_maps(final: RingPresentation, steps: List[GlueStep],
                     strata: Dict[str, StratumRecord]) -> Dict[str, RingMap]:
    """Composite restrictions from the final ring to every stratum presentation."""
    maps = {}
    for step in steps:
        to_open_part = _truncation(final, step.datum.total_free)
        maps[step.record.name] = to_open_part.compose(step.datum.eta)
    maps["open"] = _truncation(final, strata["open"].presentation)
    return maps


def _kernel_cross_check(step: GlueStep, constants: Genus3Constants, report: VerificationReport):
    """The first step's kernel relation is k_h with the boundary classes set to zero."""
    table = step.presentation.table
    kernel_rels = [p for label, p in step.labelled().items() if label.startswith(f"{step.record.zsym}*kernel")]
    k_h = constants.poly("k_h").set_zero(["d1", "d11", "d111"]).rename(table)
    ok = len(kernel_rels) == 1 and kernel_rels[0] == k_h
    report.record("k_h vs kernel relation", EQUAL, ok, stage="step1", target=k_h,
                  computed=kernel_rels[0] if kernel_rels else None, detail="boundary classes set to zero")


def run_pipeline(constants: Genus3Constants, degree_bound: int = 12, workers: int = 1,
                 report: Optional[VerificationReport] = None) -> PipelineResult:
    report = report or VerificationReport(degree_bound, constants.checksum, constants.source_name)
    clock = time.perf_counter()
    check_declared_degrees(constants, report)
    strata = derive_all(constants, report, degree_bound)
    report.runtimes["derive"] = time.perf_counter() - clock

    open_pres = strata["open"].presentation
    current, labels = open_pres, ["z2", "p0", "p1", "p2"]
    steps: List[GlueStep] = []
    for index, name in enumerate(tqdm(GLUING_ORDER, desc="gluing", disable=not progress_enabled()), start=1):
        clock = time.perf_counter()
        step = glue_step(index, current, labels, strata[name], degree_bound)
        report.runtimes[f"step{index}"] = time.perf_counter() - clock
        report.certificates[f"step{index}"] = step.certificate.to_json()
        report.record(f"glue {name} along {step.record.zsym}", CERTIFICATE,
                      bool(step.certificate.nzd) and step.certificate.vanishing_checked, stage=f"step{index}",
                      degree_bound=degree_bound, detail=f"{len(step.presentation.relations)} relations")
        restricted = restrict_to_open(step.presentation, step.record.zsym, current.table)
        ok = ideal_equal(restricted.relations, current.relations, current.table, workers)
        previous = "the open stratum" if index == 1 else f"step {index - 1}"
        report.record(f"{step.record.zsym} = 0 gives {previous}", IDEAL_EQUAL, ok, stage=f"step{index}")
        if index == 1:
            _kernel_cross_check(step, constants, report)
        steps.append(step)
        current, labels = step.presentation, step.labels

    clock = time.perf_counter()
    final = RingPresentation(constants.table(FINAL_RING), current.relations, name="final")
    verify_final(final, steps, strata, constants, report, workers)
    report.runtimes["verify"] = time.perf_counter() - clock
    return PipelineResult(final, report, steps, strata)


def verify_final(final: RingPresentation, steps: List[GlueStep], strata: Dict[str, StratumRecord],
                 constants: Genus3Constants, report: VerificationReport, workers: int = 1):
    table = final.table
    printed = constants.final_relations()
    labels = {e.name: (e.label or e.name) for e in constants.ring_entries(FINAL_RING)}

    # both sides are built once and shared by every check below
    pruned = prune_generators(final.relations, table)
    computed = IdealSlices(pruned, table)
    printed_ideal = IdealSlices(list(printed.values()), table)
    comparison = compare_slices(computed, printed_ideal, workers)
    detail = f"{len(final.relations) - len(pruned)} redundant computed generators pruned"
    if not comparison:
        detail += (f"; {len(comparison.missing_from_second)} computed generators outside the printed ideal, "
                   f"{len(comparison.missing_from_first)} printed relations outside the computed ideal")
    report.record("computed ideal == printed ideal", IDEAL_EQUAL, comparison.equal, stage="final",
                  degree_bound=max(r.degree() for r in final.relations), detail=detail)

    for name, p in printed.items():
        ok = computed.slice(p.degree()).contains(p)
        report.record(labels[name], MEMBER, ok, stage="final", target=p, degree_bound=p.degree())

    # labels persist through later steps, so the last step holds the final form of each relation
    last = steps[-1].labelled()
    for name, label in REDUNDANT.items():
        p = last.get(label)
        ok = p is not None and printed_ideal.slice(p.degree()).contains(p)
        report.record(f"{name} redundant", MEMBER, ok, stage="final", computed=p,
                      degree_bound=None if p is None else p.degree(), detail=f"pipeline relation {label}")

    open_table = strata["open"].presentation.table
    boundary = [n for n in table.names if n not in open_table]
    for name, open_name in OPEN_RESTRICTIONS.items():
        restricted = printed[name].set_zero(boundary).rename(open_table)
        stored = constants.poly(open_name)
        unit = unit_between(restricted, stored)
        report.record(f"{labels[name]} on the open stratum", EQUAL_UP_TO_UNIT, unit is not None, stage="final",
                      target=stored, computed=restricted, unit=unit)

    for stratum, m in restriction_maps(final, steps, strata).items():
        target = IdealSlices(m.target.relations, m.target.table)
        failed = []
        for name, p in printed.items():
            image = m(p)
            if not image.is_zero() and not target.slice(image.degree()).contains(image):
                failed.append(labels[name])
        report.record(f"printed relations vanish on {stratum}", MEMBER, not failed, stage="final",
                      detail=("failed: " + ", ".join(failed)) if failed else f"{len(printed)} relations")

