"""Command line front end: validation, completions, censuses, and the
classification roundtrips, with machine-readable reports.

Every finding carries a stable anchor naming the classification statement it
verifies; the anchors map one-to-one onto engine operations (see ANCHORS).
Reports are byte-identical across runs for identical inputs: wall-clock
timing is shown on the human output only and never serialized.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .category import FinCat, cat_from_json, cat_hash, cat_to_json, catalog, validate
from .center import center_idempotents, compute_center, summand_bijection_check
from .completion import additive_closure, find_oplus_generator, idempotent_completion
from .ideals import enumerate_ideals, enumerate_idempotent_ideals, is_idempotent, is_trace_of_projectives
from .linalg import CapExceeded
from .modules import enumerate_modules, quotient_module, representable
from .torsion import (
    enumerate_topologies,
    gabriel_roundtrip,
    has_fg_basis,
    hereditary_closure_oracle,
)
from .ttf import is_split, jans_roundtrip, recollement_data, recollement_shadows, ttf_from_ideal

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_REFUSED = 2
EXIT_USAGE = 64
EXIT_BAD_INPUT = 65

# anchor -> engine operation implementing the statement it verifies
ANCHORS = {
    "axioms:preadditive-category": "category.validate",
    "axioms:linear-topology": "torsion.check_topology",
    "bijection:gabriel-topologies-torsion": "torsion.gabriel_roundtrip",
    "census:topologies-vs-hereditary-classes": "torsion.hereditary_closure_oracle",
    "bijection:jans-idempotent-ttf": "ttf.jans_roundtrip",
    "bijection:central-idempotents-split-ttf": "ttf.is_split",
    "bijection:summands-central-idempotents": "center.summand_bijection_check",
    "structure:recollement-shadows": "ttf.recollement_shadows",
    "structure:trace-of-projectives": "ideals.is_trace_of_projectives",
    "lattice:two-sided-ideals": "ideals.enumerate_ideals",
    "lattice:idempotent-ideals": "ideals.enumerate_idempotent_ideals",
    "invariant:center-dimension": "center.compute_center",
    "invariant:finite-type-basis": "torsion.has_fg_basis",
    "construction:additive-closure": "completion.additive_closure",
    "construction:idempotent-completion": "completion.idempotent_completion",
    "construction:oplus-generator": "completion.find_oplus_generator",
}


class Report:
    def __init__(self, command: str, cat: FinCat, parameters: dict):
        self.command = command
        self.category_hash = cat_hash(cat)
        self.parameters = parameters
        self.findings = []
        self.started = time.monotonic()

    def add(self, statement_id: str, anchor: str, verdict: str, witness=None):
        if anchor not in ANCHORS:
            raise ValueError(f"unknown anchor {anchor}")
        self.findings.append(
            {
                "statement_id": statement_id,
                "paper_anchor": anchor,
                "verdict": verdict,
                "witness": witness,
            }
        )

    def exit_code(self) -> int:
        verdicts = {f["verdict"] for f in self.findings}
        if any(v.startswith("refused") for v in verdicts):
            return EXIT_REFUSED
        if "fail" in verdicts:
            return EXIT_FAIL
        return EXIT_PASS

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "category": self.category_hash,
            "parameters": self.parameters,
            "findings": self.findings,
            "timing": None,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def human(self) -> str:
        lines = [f"{self.command}  category={self.category_hash}  params={self.parameters}"]
        for f in self.findings:
            w = f" :: {f['witness']}" if f["witness"] is not None else ""
            lines.append(f"  [{f['verdict']:>7}] {f['statement_id']} ({f['paper_anchor']}){w}")
        lines.append(f"  elapsed: {time.monotonic() - self.started:.2f}s")
        return "\n".join(lines)


def load_category(source: str, p: int | None):
    if source.startswith("catalog:"):
        cat = catalog(source[len("catalog:"):], p)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            cat = cat_from_json(fh.read())
    violations = validate(cat)
    return cat, violations


def cmd_validate(cat, args, report):
    report.add("category-axioms", "axioms:preadditive-category", "pass", "no violations")
    return report


def cmd_complete(cat, args, report):
    if args.idempotents:
        comp = idempotent_completion(cat, args.bound)
        out = comp.cat
        report.add(
            "idempotent-completion-validates",
            "construction:idempotent-completion",
            "pass" if not validate(out) else "fail",
            {"objects": len(out.objects)},
        )
    else:
        out = additive_closure(cat, args.bound).cat
        report.add(
            "additive-closure-validates",
            "construction:additive-closure",
            "pass" if not validate(out) else "fail",
            {"objects": len(out.objects)},
        )
    gen = find_oplus_generator(cat, args.bound)
    report.add(
        "oplus-generator-search",
        "construction:oplus-generator",
        "pass",
        {"generator": list(gen) if gen is not None else None},
    )
    report.emitted_category = cat_to_json(out)
    return report


def cmd_ideals(cat, args, report):
    ideals = enumerate_idempotent_ideals(cat) if args.idempotent else enumerate_ideals(cat)
    anchor = "lattice:idempotent-ideals" if args.idempotent else "lattice:two-sided-ideals"
    sound = all(i.validate() == [] for i in ideals)
    report.add(
        "ideal-enumeration",
        anchor,
        "pass" if sound else "fail",
        {"count": len(ideals), "dims": [i.total_dim() for i in ideals]},
    )
    if args.idempotent:
        witnesses = [
            is_trace_of_projectives(cat, i, args.bound) is not None for i in ideals
        ]
        report.add(
            "trace-of-projectives-witnesses",
            "structure:trace-of-projectives",
            "pass",
            {"witnessed": witnesses, "bound": args.bound},
        )
    return report


def cmd_gabriel(cat, args, report):
    topos = enumerate_topologies(cat)
    report.add(
        "topology-axioms",
        "axioms:linear-topology",
        "pass",
        {"topologies": len(topos), "sizes": [t.size() for t in topos]},
    )
    roundtrips = [gabriel_roundtrip(t) for t in topos]
    report.add(
        "gabriel-roundtrip",
        "bijection:gabriel-topologies-torsion",
        "pass" if all(roundtrips) else "fail",
        {"roundtrip": roundtrips},
    )
    report.add(
        "finite-type-basis",
        "invariant:finite-type-basis",
        "pass" if all(has_fg_basis(t) for t in topos) else "fail",
    )
    if args.census:
        census = enumerate_modules(cat, args.census)
        fps = set()
        collisions = False
        for topo in topos:
            seeds = []
            for a in cat.objects:
                h = representable(cat, a)
                for sub in topo.families[a]:
                    q, _ = quotient_module(h, sub)
                    seeds.append(q)
            oracle = hereditary_closure_oracle(cat, seeds, args.census, census=census)
            if oracle.census_fingerprint in fps:
                collisions = True
            fps.add(oracle.census_fingerprint)
        report.add(
            "topology-census-equality",
            "census:topologies-vs-hereditary-classes",
            "pass" if len(fps) == len(topos) else "fail",
            {"topologies": len(topos), "torsion_fingerprints": len(fps), "collisions": collisions},
        )
    return report


def cmd_jans(cat, args, report):
    rep = jans_roundtrip(cat, args.dim)
    report.add(
        "jans-roundtrip",
        "bijection:jans-idempotent-ttf",
        "pass" if rep["pass"] else "fail",
        {"idempotent_ideals": rep["idempotent_ideals"], "roundtrips": rep["roundtrips"]},
    )
    return report


def cmd_split(cat, args, report):
    census = enumerate_modules(cat, args.dim)
    ideals = enumerate_idempotent_ideals(cat)
    split_flags = []
    agree = True
    for ideal in ideals:
        rep = is_split(cat, ttf_from_ideal(cat, ideal), census=census)
        split_flags.append(rep["split"])
        agree = agree and rep["agree"] and rep.get("class_formulas", True)
    z = compute_center(cat)
    n_central = len(center_idempotents(z))
    report.add(
        "split-three-way-agreement",
        "bijection:central-idempotents-split-ttf",
        "pass" if agree and sum(split_flags) == n_central else "fail",
        {"split": split_flags, "central_idempotents": n_central},
    )
    return report


def cmd_center(cat, args, report):
    z = compute_center(cat)
    report.add("center-dimension", "invariant:center-dimension", "pass", {"dim": z.dim})
    if args.idempotents:
        idems = center_idempotents(z)
        report.add(
            "center-idempotents",
            "bijection:central-idempotents-split-ttf",
            "pass",
            {"count": len(idems), "coords": [list(c) for c, _ in idems]},
        )
    if args.summands:
        rep = summand_bijection_check(cat)
        report.add(
            "summand-bijection",
            "bijection:summands-central-idempotents",
            "pass" if rep["pass"] else "fail",
            rep,
        )
    return report


def _select_ideals(cat, selector: str):
    ideals = enumerate_idempotent_ideals(cat)
    if selector == "all":
        return ideals
    idx = int(selector)
    if not 0 <= idx < len(ideals):
        raise ValueError(f"ideal index {idx} out of range (0..{len(ideals) - 1})")
    return [ideals[idx]]


def cmd_recollement(cat, args, report):
    ideals = _select_ideals(cat, args.ideal)
    for n, ideal in enumerate(ideals):
        witness = is_trace_of_projectives(cat, ideal, args.bound)
        if witness is None:
            report.add(
                f"recollement-{n}",
                "structure:recollement-shadows",
                f"refused(bound={args.bound})",
                "no idempotent witness at this bound; the ideal must be a"
                " trace of finitely generated projective modules",
            )
            continue
        data = recollement_data(cat, ideal, args.bound)
        rep = recollement_shadows(data, args.dim)
        report.add(
            f"recollement-{n}",
            "structure:recollement-shadows",
            "pass" if rep["pass"] else "fail",
            rep,
        )
    return report


def report_census(cat: FinCat, dim: int, bound: int, report: Report) -> Report:
    """One aggregated classification census for a category."""
    ideals = enumerate_ideals(cat)
    idem = [i for i in ideals if is_idempotent(i)]
    report.add("ideal-count", "lattice:two-sided-ideals", "pass", {"count": len(ideals)})
    report.add("idempotent-ideal-count", "lattice:idempotent-ideals", "pass", {"count": len(idem)})
    topos = enumerate_topologies(cat)
    roundtrips = [gabriel_roundtrip(t) for t in topos]
    report.add(
        "topology-count",
        "bijection:gabriel-topologies-torsion",
        "pass" if all(roundtrips) else "fail",
        {"count": len(topos)},
    )
    census = enumerate_modules(cat, dim)
    fps = set()
    for topo in topos:
        seeds = []
        for a in cat.objects:
            h = representable(cat, a)
            for sub in topo.families[a]:
                q, _ = quotient_module(h, sub)
                seeds.append(q)
        fps.add(hereditary_closure_oracle(cat, seeds, dim, census=census).census_fingerprint)
    report.add(
        "torsion-fingerprints",
        "census:topologies-vs-hereditary-classes",
        "pass" if len(fps) == len(topos) else "fail",
        {"count": len(fps)},
    )
    jrep = jans_roundtrip(cat, dim)
    report.add(
        "ttf-roundtrips",
        "bijection:jans-idempotent-ttf",
        "pass" if jrep["pass"] else "fail",
        {"count": jrep["idempotent_ideals"]},
    )
    split_flags = []
    for ideal in idem:
        srep = is_split(cat, ttf_from_ideal(cat, ideal), census=census)
        split_flags.append(srep["split"])
    report.add(
        "split-ttf-count",
        "bijection:central-idempotents-split-ttf",
        "pass",
        {"count": sum(split_flags)},
    )
    shadows_pass = True
    witnessed = 0
    for ideal in idem:
        if is_trace_of_projectives(cat, ideal, bound) is None:
            continue
        witnessed += 1
        data = recollement_data(cat, ideal, bound)
        shadows_pass = shadows_pass and recollement_shadows(data, dim)["pass"]
    report.add(
        "recollement-shadows",
        "structure:recollement-shadows",
        "pass" if shadows_pass else "fail",
        {"witnessed_ideals": witnessed},
    )
    return report


def cmd_census(cat, args, report):
    return report_census(cat, args.dim, args.bound, report)


COMMANDS = {
    "validate": cmd_validate,
    "complete": cmd_complete,
    "ideals": cmd_ideals,
    "gabriel": cmd_gabriel,
    "jans": cmd_jans,
    "split": cmd_split,
    "center": cmd_center,
    "recollement": cmd_recollement,
    "census": cmd_census,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringoid",
        description="exact classification checks for finite F_p-linear categories",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("source", help="category JSON file or catalog:<name>, e.g. catalog:a2cat")
    parser.add_argument("--p", type=int, default=None, help="prime for catalog names")
    parser.add_argument("--bound", type=int, default=3, help="tuple length bound for completions")
    parser.add_argument("--dim", type=int, default=4, help="module census total dimension bound")
    parser.add_argument("--census", type=int, default=0, help="gabriel: census dimension (0 = skip)")
    parser.add_argument("--json", action="store_true", help="emit the machine-readable report")
    parser.add_argument("--seed", type=int, default=0, help="reserved; all runs are deterministic")
    parser.add_argument("--idempotent", action="store_true", help="ideals: restrict to idempotent ones")
    parser.add_argument("--idempotents", action="store_true", help="complete/center: include idempotent data")
    parser.add_argument("--summands", action="store_true", help="center: check the summand bijection")
    parser.add_argument("--ideal", default="all", help="recollement: idempotent ideal index or 'all'")
    parser.add_argument("--enumerate", action="store_true", help="gabriel: kept for symmetry; enumeration always runs")
    parser.add_argument("--roundtrip", action="store_true", help="gabriel: kept for symmetry; roundtrip always runs")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        cat, violations = load_category(args.source, args.p)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as e:
        print(f"cannot load category: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    from .linalg import vector_cap

    params = {
        "source": args.source,
        "p": cat.p,
        "bound": args.bound,
        "dim": args.dim,
        "cap": vector_cap(),
        "seed": args.seed,
    }
    report = Report(args.command, cat, params)
    if violations:
        for v in violations[:20]:
            report.add("category-axioms", "axioms:preadditive-category", "fail", v)
        print(report.to_json() if args.json else report.human())
        return EXIT_BAD_INPUT
    try:
        report = COMMANDS[args.command](cat, args, report)
    except CapExceeded as e:
        report.add(args.command, "axioms:preadditive-category", f"refused(cap): {e}")
        print(report.to_json() if args.json else report.human())
        return EXIT_REFUSED
    emitted = getattr(report, "emitted_category", None)
    if args.json:
        doc = json.loads(report.to_json())
        if emitted is not None:
            doc["emitted"] = json.loads(emitted)
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    else:
        if emitted is not None:
            print(emitted)
        print(report.human())
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
