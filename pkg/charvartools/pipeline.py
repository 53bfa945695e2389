"""End-to-end runs: relator word -> character polynomial -> conic bundle geometry."""
import json
from dataclasses import dataclass, field

import pandas as pd

from . import utils
from .euler import (
    EulerError,
    branch_geometry,
    chi_from_conic_fibration,
    chi_singular_model,
    classify_surface,
    fiber_dichotomy_check,
    infinite_fibers,
    split_even,
)
from .exactnum import Surd
from .linkgroup import (
    GroupWord,
    manifold_label,
    nonabelian_part,
    relation_polys,
    schubert_label,
    surgery_word,
)
from .polycore import REP_VARS, TRACE_VARS, bihomogenize, format_poly, parse_poly
from .projmodel import (
    ProjModelError,
    classify_fibers,
    conic_matrix,
    fiber_table,
    geometric_genus,
    singular_points,
)
from .resolve import resolve_all
from .traceelim import TracePoly, component_split, to_trace_coords, verify_trace_image
from .utils import CharVarError, message, published_tables, report_info, solver_config

OUTCOME_COMPLETE = "complete"
OUTCOME_NO_NONABELIAN = "no nonabelian component"
OUTCOME_PARTIAL = "partial"
BEYOND_RANGE = "beyond validated range"


class _Stages:
    """Runs pipeline stages, turning a CharVarError into a recorded failure."""

    def __init__(self, verbosity):
        self.verbosity = verbosity
        self.failures = []

    def run(self, name, func, *args, **kwargs):
        message(f"{name} ...", message_verbosity=3, print_verbosity=self.verbosity)
        try:
            return func(*args, **kwargs)
        except CharVarError as err:
            failure = err.to_dict()
            failure["step"] = name
            self.failures.append(failure)
            message(f"{name} failed: {err}", message_verbosity=1, print_verbosity=self.verbosity)
            return None


@dataclass
class GeometryReport:
    """Conic bundle analysis of one bidegree (2, b) component."""

    form: str
    bidegree: tuple
    conic_matrix: list = None
    fibers: list = field(default_factory=list)
    singular_points: list = field(default_factory=list)
    resolution: list = field(default_factory=list)
    split: dict = None
    branch: dict = None
    infinite_fibers: dict = None
    chi_singular: int = None
    chi_conic_fibration: int = None
    classification: dict = None
    dichotomy: dict = None
    failures: list = field(default_factory=list)

    @property
    def chi_pair(self):
        if self.classification is None:
            return None
        return (self.classification["chi_singular"], self.classification["chi_smooth"])

    @property
    def verdict(self):
        return None if self.classification is None else self.classification["verdict"]

    def to_dict(self):
        return {
            "form": self.form,
            "bidegree": list(self.bidegree),
            "conic_matrix": self.conic_matrix,
            "fibers": [f.to_dict() for f in self.fibers],
            "singular_points": [str(p) for p in self.singular_points],
            "resolution": [r.to_dict() for r in self.resolution],
            "split": self.split,
            "branch": self.branch,
            "infinite_fibers": self.infinite_fibers,
            "chi_singular": self.chi_singular,
            "chi_conic_fibration": self.chi_conic_fibration,
            "classification": self.classification,
            "dichotomy": self.dichotomy,
            "failures": list(self.failures),
        }


@dataclass
class ComponentReport:
    index: int
    component: TracePoly
    p_g: int
    canonical: object = None
    geometry: GeometryReport = None

    @property
    def bidegree(self):
        return self.component.bidegree

    def to_dict(self):
        return {
            "index": self.index,
            "poly": self.component.text(),
            "bidegree": list(self.bidegree),
            "p_g": self.p_g,
            "canonical_annotated": self.canonical,
            "geometry": None if self.geometry is None else self.geometry.to_dict(),
        }


@dataclass
class SurfaceReport:
    """Everything computed for one input, serializable to canonical JSON."""

    spec: dict
    label: str = None
    schubert: str = None
    range_label: str = None
    word: str = None
    relation: dict = None
    nonabelian: dict = None
    f_tilde: str = None
    bidegree: tuple = None
    components: list = field(default_factory=list)
    outcome: str = OUTCOME_COMPLETE
    failures: list = field(default_factory=list)

    @property
    def all_failures(self):
        nested = [f for c in self.components if c.geometry is not None for f in c.geometry.failures]
        return list(self.failures) + nested

    @property
    def failed(self):
        return bool(self.all_failures)

    @property
    def geometries(self):
        return [c.geometry for c in self.components if c.geometry is not None]

    def to_dict(self):
        return {
            "schema_version": report_info["schema_version"],
            "input": dict(self.spec),
            "label": self.label,
            "schubert": self.schubert,
            "range": self.range_label,
            "word": self.word,
            "relation": self.relation,
            "nonabelian": self.nonabelian,
            "f_tilde": self.f_tilde,
            "bidegree": None if self.bidegree is None else list(self.bidegree),
            "components": [c.to_dict() for c in self.components],
            "outcome": self.outcome,
            "failures": list(self.failures),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def component_table(self):
        rows = []
        for c in self.components:
            geometry = c.geometry
            rows.append(
                {
                    "component": c.index,
                    "bidegree": f"({c.bidegree[0]},{c.bidegree[1]})",
                    "p_g": c.p_g,
                    "canonical (annotated)": "-" if c.canonical is None else ("yes" if c.canonical else "no"),
                    "chi(S)": None if geometry is None else geometry.chi_singular,
                    "chi(S~)": None if geometry is None or geometry.chi_pair is None else geometry.chi_pair[1],
                    "verdict": "" if geometry is None else (geometry.verdict or "failed"),
                }
            )
        return pd.DataFrame(rows)

    def to_text(self):
        lines = []
        if self.label:
            lines.append(f"{self.label}  {self.schubert}" + (f"  [{self.range_label}]" if self.range_label else ""))
        if self.word:
            lines.append(f"word: {self.word}")
        if self.f_tilde:
            lines.append(f"f~ = {self.f_tilde}   bidegree {tuple(self.bidegree)}")
        lines.append(f"outcome: {self.outcome}")
        if self.components:
            lines.append("")
            lines.append(self.component_table().to_string(index=False))
        for c in self.components:
            g = c.geometry
            if g is None:
                continue
            lines.append("")
            lines.append(f"component {c.index}: F = {g.form}")
            lines.append("singular points: " + ", ".join(str(p) for p in g.singular_points))
            if g.fibers:
                lines.append(fiber_table(g.fibers).to_string(index=False))
        for failure in self.all_failures:
            lines.append(f"FAILED {failure['step']}: [{failure['error']}] {failure['message']}")
        return "\n".join(lines)


def _same_point(a, b):
    return len(a) == len(b) and all(Surd.lift(x) == Surd.lift(y) for x, y in zip(a, b))


def _check_on_degenerate_fibers(points, fibers):
    for point in points:
        if not any(_same_point(point.p1, f.point) for f in fibers):
            raise ProjModelError(f"Singular point {point} lies on a smooth fiber")
    return points


def _check_fibration(chi_sing, fibers):
    chi_fib = chi_from_conic_fibration(fibers)
    if chi_fib != chi_sing:
        raise EulerError(
            f"Branched-cover count chi(S) = {chi_sing} disagrees with the conic fibration count {chi_fib}"
        )
    return chi_fib


def conic_bundle_geometry(tp, radicands=None, samples=200, seed=0, verbosity=None):
    """Fibers, singular points, resolution and Euler characteristic of a (2, b) component.

    Args:
        tp (TracePoly): component with ``bidegree[0] == 2``
        radicands (frozenset, optional): allowed radicands for roots
        samples (int, optional): fiber dichotomy sample count. Defaults to 200.
        seed (int, optional): fiber dichotomy seed. Defaults to 0.
        verbosity (int, optional): Defaults to ``utils.global_verbosity``.

    Returns:
        GeometryReport: with failures recorded per stage
    """
    if verbosity is None:
        verbosity = utils.global_verbosity
    stages = _Stages(verbosity)
    F = bihomogenize(tp.poly)
    report = GeometryReport(F.text(), F.bidegree)

    M = stages.run("conic_matrix", conic_matrix, F)
    if M is not None:
        report.conic_matrix = M.to_dict()
        report.fibers = stages.run("classify_fibers", classify_fibers, M, radicands=radicands) or []

    sing = stages.run("singular_points", singular_points, F, radicands=radicands, verbosity=verbosity)
    if sing is not None and M is not None:
        sing = stages.run("singular_fibers", _check_on_degenerate_fibers, sing, report.fibers)
    if sing is not None:
        report.singular_points = sing
        report.resolution = stages.run("resolve", resolve_all, F, sing, radicands=radicands) or []

    split = stages.run("split_even", split_even, F)
    branch = fibers = None
    if split is not None:
        report.split = split.to_dict()
        branch = stages.run("branch_geometry", branch_geometry, split.g, radicands=radicands)
        fibers = stages.run("infinite_fibers", infinite_fibers, split, radicands=radicands)
    if branch is not None:
        report.branch = branch.to_dict()
    if fibers is not None:
        report.infinite_fibers = fibers.to_dict()

    if branch is not None and fibers is not None:
        report.chi_singular = chi_singular_model(branch, fibers)
        if report.fibers:
            report.chi_conic_fibration = stages.run(
                "conic_fibration_check", _check_fibration, report.chi_singular, report.fibers
            )
        if sing is not None and len(report.resolution) == len(sing):
            evidence = {
                "chi_B": branch.chi,
                "chi_Q": fibers.chi_Q,
                "chi_L": fibers.chi_L,
                "chi_phi_inverse_L": fibers.chi_phi_L,
                "chi_conic_fibration": report.chi_conic_fibration,
            }
            classification = stages.run(
                "classify_surface",
                classify_surface,
                report.chi_singular,
                report.resolution,
                report.fibers,
                evidence=evidence,
            )
            if classification is not None:
                report.classification = classification.to_dict()
        report.dichotomy = stages.run(
            "fiber_dichotomy", fiber_dichotomy_check, split, branch, samples=samples, seed=seed
        )
    report.failures = stages.failures
    return report


def character_stages(word, n=None, cached=None, verbosity=None):
    """Relation polynomials, nonabelian part and f~ for ``word``.

    ``cached`` maps cache stages to texts from an earlier run; they replace
    the expensive gcd and trace elimination steps.

    Returns:
        tuple: (RelationPolys or None, NonabelianPart or None, TracePoly or None,
            failures, computed) where ``computed`` maps cache stages to texts
            produced in this call
    """
    if verbosity is None:
        verbosity = utils.global_verbosity
    stages = _Stages(verbosity)
    cached = dict(cached or {})
    computed = {}

    if "p1" in cached and "p2" in cached:
        p1, p2 = parse_poly(cached["p1"], REP_VARS), parse_poly(cached["p2"], REP_VARS)
        rel = stages.run("relation_polys", relation_polys, word)
        if rel is not None and (rel.p1 != p1 or rel.p2 != p2):
            message(f"Cached relation polynomials for n={n} are stale, recomputing", message_verbosity=1)
            cached = {}
    else:
        rel = stages.run("relation_polys", relation_polys, word)
    if rel is None:
        return None, None, None, stages.failures, computed
    computed["p1"], computed["p2"] = format_poly(rel.p1), format_poly(rel.p2)

    gcd = parse_poly(cached["p"], REP_VARS) if "p" in cached else None
    part = stages.run("nonabelian_part", nonabelian_part, rel.p1, rel.p2, gcd=gcd)
    if part is None:
        return rel, None, None, stages.failures, computed
    computed["p"] = format_poly(part.p)
    if part.trivial:
        return rel, part, None, stages.failures, computed

    provenance = manifold_label(n) if n is not None else f"word {word}"
    tp = None
    if "f_tilde" in cached:
        try:
            tp = verify_trace_image(parse_poly(cached["f_tilde"], TRACE_VARS), part.p, provenance)
        except (CharVarError, ValueError) as err:
            message(f"Cached f~ for n={n} fails the back-substitution check, recomputing: {err}", message_verbosity=1)
    if tp is None:
        tp = stages.run("to_trace_coords", to_trace_coords, part.p, provenance=provenance)
    if tp is not None:
        computed["f_tilde"] = tp.text()
    return rel, part, tp, stages.failures, computed


def _canonical_flags(n, components):
    published = published_tables["components"].get(n)
    if published is None or len(published) != len(components):
        return [None] * len(components)
    return [flag if c.bidegree == bideg else None for c, (bideg, flag) in zip(components, published)]


def _parse_spec(spec):
    keys = [k for k in ("n", "word", "polynomial") if spec.get(k) is not None]
    if len(keys) != 1:
        raise ValueError(f"Exactly one of n, word, polynomial is required, got {sorted(spec)}")
    return keys[0], spec[keys[0]]


def cmd_pipeline(spec, cache=None, radicands=None, samples=200, seed=0, verbosity=None):
    """Run the full pipeline for ``{"n": int}``, ``{"word": text}`` or ``{"polynomial": text}``.

    Args:
        spec (dict): the input, exactly one key
        cache (IntermediateCache, optional): intermediate store for surgery runs
        radicands (frozenset, optional): allowed radicands,
            defaults to ``solver_config["radicands"]``
        samples (int, optional): fiber dichotomy sample count
        seed (int, optional): fiber dichotomy seed
        verbosity (int, optional): Defaults to ``utils.global_verbosity``.

    Raises:
        ValueError: on a malformed spec, word or polynomial

    Returns:
        SurfaceReport: stage failures are embedded, never raised
    """
    if verbosity is None:
        verbosity = utils.global_verbosity
    if radicands is None:
        radicands = solver_config["radicands"]
    kind, value = _parse_spec(spec)
    report = SurfaceReport(spec={kind: value})
    n = None

    if kind == "polynomial":
        poly = parse_poly(value, TRACE_VARS, d=1)
        if not poly or poly.is_ground:
            raise ValueError(f"Polynomial '{value}' is constant")
        tp = TracePoly.from_poly(poly, "input polynomial")
    else:
        if kind == "n":
            n = int(value)
            word = surgery_word(n)
            report.label, report.schubert = manifold_label(n), schubert_label(n)
            if n > solver_config["max_validated_n"]:
                report.range_label = BEYOND_RANGE
                message(f"n = {n} is {BEYOND_RANGE}", message_verbosity=1, print_verbosity=verbosity)
        else:
            word = GroupWord.parse(value)
        report.word = str(word)
        message(f"cmd_pipeline: word {word}", message_verbosity=2, print_verbosity=verbosity)
        cached = cache.load_all(n) if (cache is not None and n is not None) else {}
        rel, part, tp, failures, computed = character_stages(word, n=n, cached=cached, verbosity=verbosity)
        report.failures.extend(failures)
        if cache is not None and n is not None:
            cache.store_all(n, computed)
        if rel is not None:
            report.relation = rel.to_dict()
        if part is not None:
            report.nonabelian = part.to_dict()
            if part.trivial:
                report.outcome = OUTCOME_NO_NONABELIAN
                return report
        if tp is None:
            report.outcome = OUTCOME_PARTIAL
            return report

    report.f_tilde, report.bidegree = tp.text(), tp.bidegree
    stages = _Stages(verbosity)
    components = stages.run("component_split", component_split, tp)
    report.failures.extend(stages.failures)
    if components is None:
        report.outcome = OUTCOME_PARTIAL
        return report

    flags = _canonical_flags(n, components)
    for i, (component, flag) in enumerate(zip(components, flags)):
        a, b = component.bidegree
        entry = ComponentReport(i + 1, component, geometric_genus(a, b), flag)
        if component.conic_candidate:
            message(f"cmd_pipeline: conic bundle component {i + 1}", message_verbosity=2, print_verbosity=verbosity)
            entry.geometry = conic_bundle_geometry(
                component, radicands=radicands, samples=samples, seed=seed, verbosity=verbosity
            )
        report.components.append(entry)
    if report.failed:
        report.outcome = OUTCOME_PARTIAL
    return report
