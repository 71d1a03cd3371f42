"""Command-line front door: one subcommand per question, plus `full`."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from . import __version__
from .config import ConfigDocument, echo, fmt_rational, load
from .errors import InvariantViolation, ValidationError, WildredError
from .normalform import fission, resonance_report
from .orbitflat import composite_moment_rank, flatness_verdict, moment_rank
from .stability import avoidance_check, stability_check
from .unfolding import UnfoldingConfig, unfold_residues, unfolded_flatness_bridge
from .verma import simplicity_test, slice_for

COMMANDS = ("classify", "flatness", "stability", "verma", "unfold", "rank", "full")


def _q(x) -> str:
    return fmt_rational(x)


def _vec(v) -> List[str]:
    return [_q(x) for x in v]


def _root(a) -> List[int]:
    return [int(x) for x in a]


# ---------------------------------------------------------------- sections

def section_classify(doc: ConfigDocument) -> dict:
    points = []
    total = 0
    for label, p in doc.config.points:
        fd = fission(p)
        rr = resonance_report(p)
        total += fd.nu
        points.append({
            "label": label,
            "pole_order": p.s,
            "nu": fd.nu,
            "fission": {"levi_dims": list(fd.dims()), "torus_indices": list(fd.torus_indices),
                        "levi_roots": [sorted(_root(a) for a in sub.roots) for sub in fd.levi_subsystems]},
            "resonance": {"nonresonant": rr.nonresonant,
                          "offenders": [{"root": _root(a), "degree": k} for a, k in rr.offenders],
                          "degrees": list(rr.resonance_degrees)},
        })
    return {"points": points, "chi": 2 - total}


def section_flatness(doc: ConfigDocument) -> dict:
    fv = flatness_verdict(doc.config)
    out = {"verdict": fv.verdict, "clause": fv.clause, "nu": list(fv.nu), "chi": fv.chi,
           "all_generic": fv.all_generic, "pole_divisor_degree": fv.pole_divisor_degree,
           "rank_evidence": None}
    if doc.config.points:
        rep = moment_rank(doc.config, doc.samples, doc.seed)
        out["rank_evidence"] = {"min": rep.min_rank, "max": rep.max_rank, "expected": rep.expected,
                                "full_fraction": _q(rep.full_fraction), "samples": len(rep.ranks)}
    return out


def _stability_entry(v) -> dict:
    wit = None
    if v.witness_failure is not None:
        kept, words, vec = v.witness_failure
        wit = {"kept_simple_roots": list(kept), "weyl_words": [list(w) for w in words], "sum": _vec(vec)}
    return {"certified": v.stable_certified, "witness": wit, "checks": v.enumeration_size}


def section_stability(doc: ConfigDocument) -> dict:
    a = stability_check(doc.config)
    b = avoidance_check(doc.config)
    if a.stable_certified != b.stable_certified:
        raise InvariantViolation("character and avoidance formulations disagree")
    return {"certified": a.stable_certified, "character": _stability_entry(a),
            "avoidance": _stability_entry(b), "agree": True}


def section_verma(doc: ConfigDocument) -> dict:
    points = []
    for label, p in doc.config.points:
        sl = slice_for(p, doc.grade_bound)
        v = simplicity_test(sl)
        blocks = sorted(((sl.grade_of(w), w) for w in sl.gram), key=lambda t: (t[0], t[1]))
        dets = sl.determinants()
        points.append({
            "label": label,
            "grade_bound": doc.grade_bound,
            "blocks": [{"grade": g, "weight": _root(w), "size": len(sl.gram[w]), "determinant": _q(dets[w])}
                       for g, w in blocks],
            "simple_up_to_grade": v.simple_up_to_n,
            "first_degenerate_grade": v.first_degenerate_grade,
            "criterion_values": [{"root": _root(a), "value": _q(x)} for a, x in v.criterion_values],
            "criterion_nonzero_integer_pass": v.criterion_nonzero_integer_pass,
            "criterion_positive_integer_pass": v.criterion_positive_integer_pass,
        })
    return {"points": points}


def section_unfold(doc: ConfigDocument) -> dict:
    points = []
    for label, p in doc.config.points:
        eps = doc.epsilons.get(label, tuple(Fraction(i) for i in range(p.s)))
        u = unfold_residues(UnfoldingConfig(eps, p))
        points.append({"label": label, "epsilons": _vec(u.epsilons), "perturbed": u.perturbed,
                       "residues": [_vec(r.cartan_coords()) for r in u.residues]})
    out: Dict[str, Any] = {"points": points, "bridge": None}
    marks = doc.config.markings
    torus = doc.config.algebra.rank
    if len(marks) == 3 and all(fission(a).levis[-1].dim == torus for a in marks):
        cert = unfolded_flatness_bridge(doc.config, doc.samples, doc.seed)
        out["bridge"] = {"residue_offsets_zero": cert.residue_offsets_zero,
                         "rank_full_fraction": _q(cert.rank_full_fraction),
                         "rank_expected": cert.rank_expected, "passes": cert.passes}
    return out


def section_rank(doc: ConfigDocument) -> dict:
    out: Dict[str, Any] = {"moment": None, "composite": []}
    if doc.config.points:
        rep = moment_rank(doc.config, doc.samples, doc.seed)
        out["moment"] = {"min": rep.min_rank, "max": rep.max_rank, "expected": rep.expected,
                         "full_fraction": _q(rep.full_fraction), "ranks": list(rep.ranks)}
    for label, p in doc.config.points:
        if fission(p).nu < 1:
            continue
        rep = composite_moment_rank(p, doc.samples, doc.seed)
        out["composite"].append({"label": label, "min": rep.min_rank, "max": rep.max_rank,
                                 "expected": rep.expected, "full_fraction": _q(rep.full_fraction)})
    return out


SECTIONS: Dict[str, Callable[[ConfigDocument], dict]] = {
    "classify": section_classify,
    "flatness": section_flatness,
    "stability": section_stability,
    "verma": section_verma,
    "unfold": section_unfold,
    "rank": section_rank,
}


# ---------------------------------------------------------------- driver

def _run_section(name: str, doc: ConfigDocument):
    try:
        return SECTIONS[name](doc), 0
    except WildredError as e:
        code = e.exit_code if e.exit_code in (2, 3, 4) else 4
        return {"error": {"kind": type(e).__name__, "message": str(e), "exit_code": code}}, code
    except Exception as e:  # noqa: BLE001 - anything else is an internal fault
        return {"error": {"kind": "InternalError", "message": f"{type(e).__name__}: {e}", "exit_code": 4}}, 4


def build_report(command: str, doc: ConfigDocument):
    names = list(SECTIONS) if command == "full" else [command]
    report: Dict[str, Any] = {"tool": "wildred", "version": __version__, "command": command,
                              "seed": doc.seed, "config": echo(doc)}
    code = 0
    for name in names:
        body, c = _run_section(name, doc)
        report[name] = body
        code = max(code, c)
    return report, code


def render(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def thread_cap(env: Optional[dict] = None) -> int:
    """WILDRED_THREADS caps parallelism; computation here is sequential, so
    the value is only validated."""
    raw = (env if env is not None else os.environ).get("WILDRED_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"WILDRED_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError(f"WILDRED_THREADS must be a positive integer, got {raw!r}")
    return n


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def _positive(text: str) -> int:
    n = _nonneg(text)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wildred", description="Wild genus-zero de Rham space computations.")
    ap.add_argument("--version", action="version", version=f"wildred {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="path to a JSON configuration")
    ap.add_argument("--seed", type=_nonneg, help="sampling seed (overrides options.seed)")
    ap.add_argument("--samples", type=_positive, help="sample count (overrides options.samples)")
    ap.add_argument("--grade", type=_nonneg, help="Verma grade bound (overrides options.grade_bound)")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        thread_cap()
        doc = load(args.config)
    except WildredError as e:
        print(f"wildred: error: {e}", file=sys.stderr)
        return e.exit_code if e.exit_code in (2, 3, 4) else 4
    overrides = {k: v for k, v in (("seed", args.seed), ("samples", args.samples),
                                   ("grade_bound", args.grade)) if v is not None}
    if overrides:
        doc = ConfigDocument(doc.config, overrides.get("grade_bound", doc.grade_bound),
                             overrides.get("samples", doc.samples), overrides.get("seed", doc.seed),
                             doc.epsilons)
    report, code = build_report(args.command, doc)
    text = render(report)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"wildred: error: {args.out}: {e.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    for name in SECTIONS:
        err = report.get(name, {}).get("error") if isinstance(report.get(name), dict) else None
        if err:
            print(f"wildred: {name}: {err['kind']}: {err['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
