"""Command line front end: parse one JSON monoid, run, emit a report.

Subcommands: analyze, holes, roots, derive, check.  Output is either a JSON
document (stable key order, no timestamps, byte-identical across runs) or
aligned text carrying the same verdicts.

Exit codes: 0 success, 1 failed consistency checks, 2 invalid input,
3 unsupported monoid (nonzero units), 4 inconclusive within the given bounds
(a partial report is still emitted).

All report vectors are in normalized coordinates: the input lattice is
re-embedded so that the generators span the full integer lattice of their
rank.  The ``normalization`` block says whether anything changed and gives
the basis rows mapping normalized points back to input coordinates.
"""

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .checks import run_all
from .demazure import (
    DEFAULT_ROOT_HEIGHT,
    DemazureRoot,
    all_demazure_roots,
    descends,
)
from .derivations import (
    AMBIENT,
    NORMALIZATION,
    STRICT,
    AlgebraElement,
    ClosureError,
    apply as apply_derivation,
    exponential,
)
from .invariants import NO_SLICE, analyze
from .lattice import pairing
from .monoid import (
    DEFAULT_FAMILY_WINDOW,
    AffineMonoid,
    MonoidError,
    UnitsError,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_INCONCLUSIVE = 4


class InputError(ValueError):
    """Bad input document or bad request flags; maps to exit code 2."""


# ---------------------------------------------------------------------------
# input document
# ---------------------------------------------------------------------------

_BOUND_KEYS = ("degree_bound", "family_window", "root_height", "max_iter")


def load_document(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    rank = doc.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank <= 0:
        raise InputError("field 'rank' must be a positive integer")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError("field 'generators' must be a nonempty list")
    for i, g in enumerate(gens):
        if (not isinstance(g, list)
                or any(not isinstance(c, int) or isinstance(c, bool) for c in g)):
            raise InputError(f"generator {i} must be a list of integers")
        if len(g) != rank:
            raise InputError(
                f"generator {i} has length {len(g)}, rank says {rank}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError("field 'name' must be a string")
    bounds = doc.get("bounds", {})
    if not isinstance(bounds, dict):
        raise InputError("field 'bounds' must be an object")
    for key, value in bounds.items():
        if key not in _BOUND_KEYS:
            raise InputError(f"unknown bounds field '{key}'")
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise InputError(f"bounds field '{key}' must be a positive integer")
    return {"rank": rank, "generators": [tuple(g) for g in gens],
            "name": name, "bounds": dict(bounds)}


def build_monoid(doc: dict) -> AffineMonoid:
    try:
        return AffineMonoid(doc["generators"], name=doc["name"])
    except UnitsError:
        raise
    except MonoidError as exc:
        raise InputError(str(exc)) from exc


def resolve_bounds(doc: dict, args: argparse.Namespace) -> dict:
    """Effective bounds: command line beats the file, the file beats defaults."""
    bounds = dict(doc["bounds"])
    if getattr(args, "degree_bound", None) is not None:
        bounds["degree_bound"] = args.degree_bound
    if getattr(args, "bound", None) is not None:
        bounds["degree_bound"] = args.bound
    if getattr(args, "family_window", None) is not None:
        bounds["family_window"] = args.family_window
    if getattr(args, "root_height", None) is not None:
        bounds["root_height"] = args.root_height
    if getattr(args, "height", None) is not None:
        bounds["root_height"] = args.height
    bounds.setdefault("degree_bound", None)
    bounds.setdefault("family_window", DEFAULT_FAMILY_WINDOW)
    bounds.setdefault("root_height", DEFAULT_ROOT_HEIGHT)
    bounds.setdefault("max_iter", None)
    return bounds


def parse_point(text: str, what: str) -> tuple:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise InputError(f"{what} must be comma-separated integers, "
                         f"got {text!r}") from exc


def normalized_point(monoid: AffineMonoid, point: tuple, what: str) -> tuple:
    if len(point) != monoid.ambient_rank:
        raise InputError(f"{what} has length {len(point)}, "
                         f"expected {monoid.ambient_rank}")
    q = monoid.to_normalized(point)
    if q is None:
        raise InputError(f"{what} {point} is not in the monoid's lattice")
    return q


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _fr(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _pt(p) -> list:
    return [int(c) for c in p]


def _pts(ps) -> list:
    return [_pt(p) for p in ps]


def _face_doc(face) -> dict:
    return {"ray_indices": sorted(face.ray_indices),
            "rays": _pts(face.rays),
            "dim": face.dim}


def _family_doc(fam) -> dict:
    return {"base": _pt(fam.base), "direction": _pt(fam.direction),
            "certificate": fam.certificate}


def _element_doc(elem) -> list:
    terms = sorted(elem.coeffs.items(),
                   key=lambda kv: (elem.monoid.degree(kv[0]), kv[0]))
    return [{"exponent": _pt(m), "coefficient": _fr(c)} for m, c in terms]


def _tool_doc(command: str, doc: dict, bounds: dict) -> dict:
    return {
        "tool": {"name": "mltoric", "version": __version__},
        "command": command,
        "input": {"name": doc["name"], "rank": doc["rank"],
                  "generators": _pts(doc["generators"])},
        "bounds": {k: bounds[k] for k in _BOUND_KEYS},
    }


def _normalization_doc(monoid: AffineMonoid) -> dict:
    return {
        "reembedded": monoid.was_reembedded,
        "rank": monoid.rank,
        "generators": _pts(monoid.generators),
        "basis_rows": _pts(monoid.reindex.matrix_rows())
        if monoid.was_reembedded else None,
    }


def _facet_doc(monoid: AffineMonoid, c) -> dict:
    s = c.saturation
    slice_doc = None
    if c.slice_derivation is not None:
        sd = c.slice_derivation
        slice_doc = {
            "root_shift": _pt(sd.root.shift),
            "dual_vector": _pt(sd.derivation.dual_vector),
            "slice_point": _pt(sd.slice_point),
            "certificate": sd.certificate,
        }
    return {
        "index": c.facet_index,
        "normal": _pt(monoid.cone.facet_normals[c.facet_index]),
        "label": s.label,
        "certificate": s.certificate,
        "saturation_witness": _pt(s.witness) if s.witness is not None else None,
        "blocking_family": _family_doc(s.blocking) if s.blocking else None,
        "holes_on_facet": _pts(s.holes_on_facet),
        "is_affine": c.is_affine,
        "distinguished_ray": _pt(c.distinguished_ray)
        if c.distinguished_ray is not None else None,
        "affine_ray": c.affine_ray,
        "affine_ray_reason": c.affine_ray_reason,
        "slice_derivation": slice_doc,
        "notes": list(c.notes),
    }


def emit(payload: dict, fmt: str, render) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render(payload))


def _table(rows: list, headers: Sequence[str]) -> str:
    cells = [list(map(str, headers))] + [list(map(str, r)) for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for j, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _exact_only_block(doc: dict, bounds: dict, monoid: AffineMonoid,
                      command: str, fmt: str) -> int:
    payload = _tool_doc(command, doc, bounds)
    payload["status"] = "partial"
    payload["notes"] = [
        f"exact-only was requested but the exact engine covers rank <= 2 "
        f"and this monoid has rank {monoid.rank}"]
    emit(payload, fmt,
         lambda p: f"exact-only: unavailable at rank {monoid.rank}\n")
    return EXIT_INCONCLUSIVE


def run_analyze(doc: dict, args: argparse.Namespace) -> int:
    monoid = build_monoid(doc)
    bounds = resolve_bounds(doc, args)
    if args.exact_only and not monoid.exact_mode:
        return _exact_only_block(doc, bounds, monoid, "analyze", args.format)
    report = analyze(monoid, bounds["degree_bound"],
                     bounds["family_window"], bounds["root_height"])
    inventory = monoid.hole_families(bounds["degree_bound"],
                                     bounds["family_window"])

    star = report.ml_star_face
    if star is None:
        star_doc = None
    elif star is NO_SLICE:
        star_doc = "no-slice-exists"
    else:
        star_doc = _face_doc(star)
    split_doc = None
    if report.split is not None:
        split_doc = {
            "k": report.split.k,
            "factor_rays": _pts(ray for _, ray, _ in report.split.pairs),
            "core_generators": _pts(report.split.core_generators),
            "core_rank": report.split.core_monoid.rank,
            "core_normalized_generators":
                _pts(report.split.core_monoid.generators),
        }

    payload = _tool_doc("analyze", doc, bounds)
    payload.update({
        "normalization": _normalization_doc(monoid),
        "grading": _pt(monoid.grading),
        "cone": {"extremal_rays": _pts(monoid.cone.extremal_rays),
                 "facet_normals": _pts(monoid.cone.facet_normals)},
        "holes": {"bound": inventory.bound,
                  "certificate": inventory.certificate,
                  "points": _pts(inventory.holes),
                  "families": [_family_doc(f) for f in inventory.families]},
        "facets": [_facet_doc(monoid, c) for c in report.classifications],
        "almost_saturated_facets": list(report.almost_saturated),
        "ml_face": _face_doc(report.ml_face) if report.ml_face else None,
        "ml_star_face": star_doc,
        "affine_rays": _pts(report.affine_rays),
        "split": split_doc,
        "flags": {"is_rigid_core": report.is_rigid_core,
                  "is_affine_space": report.is_affine_space,
                  "ml_equals_ml_star": report.ml_equals_ml_star,
                  "variety_is_rigid": report.variety_is_rigid},
        "certification": {"is_exact": report.certification.is_exact,
                          "tags": list(report.certification.tags)},
        "status": report.status,
        "notes": list(report.notes),
    })
    emit(payload, args.format, _render_analyze)
    return EXIT_OK if report.status == "complete" else EXIT_INCONCLUSIVE


def _render_analyze(p: dict) -> str:
    out = []
    name = p["input"]["name"] or "monoid"
    out.append(f"{name}: rank {p['normalization']['rank']}, "
               f"status {p['status']}\n")
    if p["normalization"]["reembedded"]:
        out.append("lattice re-embedded; all vectors below are in "
                   "normalized coordinates\n")
    out.append("\nfacets:\n")
    rows = []
    for f in p["facets"]:
        rows.append((f["index"], f["normal"], f["label"],
                     f["saturation_witness"], f["is_affine"],
                     f["affine_ray"], f["certificate"]))
    out.append(_table(rows, ("idx", "normal", "label", "witness",
                             "affine-facet", "affine-ray", "certificate")))
    holes = p["holes"]
    out.append(f"\nholes (degree <= {holes['bound']}, "
               f"{holes['certificate']}): {holes['points']}\n")
    for fam in holes["families"]:
        out.append(f"  family: base {fam['base']} + k*{fam['direction']} "
                   f"({fam['certificate']})\n")
    ml = p["ml_face"]
    out.append(f"\nml_face: {ml['rays'] if ml else 'undetermined'}\n")
    star = p["ml_star_face"]
    if isinstance(star, dict):
        star = star["rays"]
    out.append(f"ml_star_face: {star if star else 'undetermined'}\n")
    if p["split"]:
        out.append(f"split: k={p['split']['k']}, core generators "
                   f"{p['split']['core_generators']}\n")
    for key, value in sorted(p["flags"].items()):
        out.append(f"{key}: {value}\n")
    out.append(f"exact: {p['certification']['is_exact']}\n")
    for note in p["notes"]:
        out.append(f"note: {note}\n")
    return "".join(out)


def run_holes(doc: dict, args: argparse.Namespace) -> int:
    monoid = build_monoid(doc)
    bounds = resolve_bounds(doc, args)
    if args.exact_only and not monoid.exact_mode:
        return _exact_only_block(doc, bounds, monoid, "holes", args.format)
    inventory = monoid.hole_families(bounds["degree_bound"],
                                     bounds["family_window"])
    payload = _tool_doc("holes", doc, bounds)
    payload.update({
        "normalization": _normalization_doc(monoid),
        "bound": inventory.bound,
        "certificate": inventory.certificate,
        "holes": _pts(inventory.holes),
        "count": len(inventory.holes),
        "families": [_family_doc(f) for f in inventory.families],
    })
    emit(payload, args.format, _render_holes)
    return EXIT_OK


def _render_holes(p: dict) -> str:
    out = [f"holes of degree <= {p['bound']} ({p['certificate']}): "
           f"{p['count']}\n"]
    for h in p["holes"]:
        out.append(f"  {h}\n")
    for fam in p["families"]:
        out.append(f"family: base {fam['base']} + k*{fam['direction']} "
                   f"({fam['certificate']})\n")
    return "".join(out)


def run_roots(doc: dict, args: argparse.Namespace) -> int:
    monoid = build_monoid(doc)
    bounds = resolve_bounds(doc, args)
    if args.exact_only and not monoid.exact_mode:
        return _exact_only_block(doc, bounds, monoid, "roots", args.format)
    per_ray = all_demazure_roots(monoid, bounds["root_height"])
    indices = sorted(per_ray)
    if args.ray is not None:
        if args.ray not in per_ray:
            raise InputError(
                f"ray index {args.ray} out of range; "
                f"valid indices are 0..{len(indices) - 1}")
        indices = [args.ray]
    rays_doc = []
    for i in indices:
        entries = []
        for root in per_ray[i]:
            verdict = descends(monoid, root, bounds["degree_bound"])
            entries.append({
                "shift": _pt(root.shift),
                "descends": verdict.status,
                "witness": _pt(verdict.witness)
                if verdict.witness is not None else None,
                "certificate": verdict.certificate,
            })
        rays_doc.append({"ray_index": i,
                         "dual_ray": _pt(monoid.cone.facet_normals[i]),
                         "roots": entries})
    payload = _tool_doc("roots", doc, bounds)
    payload["normalization"] = _normalization_doc(monoid)
    payload["height"] = bounds["root_height"]
    payload["rays"] = rays_doc
    emit(payload, args.format, _render_roots)
    return EXIT_OK


def _render_roots(p: dict) -> str:
    out = [f"demazure roots up to height {p['height']}\n"]
    for ray in p["rays"]:
        out.append(f"\nray {ray['ray_index']} (dual vector "
                   f"{ray['dual_ray']}):\n")
        rows = [(e["shift"], e["descends"], e["witness"], e["certificate"])
                for e in ray["roots"]]
        out.append(_table(rows, ("shift", "descends", "witness",
                                 "certificate")))
    return "".join(out)


def _validated_root(monoid: AffineMonoid, ray_index: int,
                    shift: tuple) -> DemazureRoot:
    normals = monoid.cone.facet_normals
    if not 0 <= ray_index < len(normals):
        raise InputError(f"ray index {ray_index} out of range; "
                         f"valid indices are 0..{len(normals) - 1}")
    if len(shift) != monoid.rank:
        raise InputError(f"root has length {len(shift)}, "
                         f"expected {monoid.rank}")
    for j, nrm in enumerate(normals):
        got = pairing(shift, nrm)
        want = -1 if j == ray_index else 0
        if (j == ray_index and got != -1) or (j != ray_index and got < 0):
            raise InputError(
                f"{tuple(shift)} is not a root for ray {ray_index}: pairing "
                f"with dual vector {j} is {got}, "
                + ("-1 is required" if j == ray_index else "must be >= 0"))
    return DemazureRoot(ray_index, tuple(shift))


def run_derive(doc: dict, args: argparse.Namespace) -> int:
    monoid = build_monoid(doc)
    bounds = resolve_bounds(doc, args)
    if args.exact_only and not monoid.exact_mode:
        return _exact_only_block(doc, bounds, monoid, "derive", args.format)
    # root shifts live in the normalized lattice, like the report vectors
    shift = parse_point(args.root, "--root")
    root = _validated_root(monoid, args.ray, shift)
    delta = root.derivation(monoid)
    payload = _tool_doc("derive", doc, bounds)
    payload["normalization"] = _normalization_doc(monoid)
    payload["ray_index"] = args.ray
    payload["root_shift"] = _pt(root.shift)

    if args.apply is not None:
        point = normalized_point(monoid, parse_point(args.apply, "--apply"),
                                 "--apply point")
        if not monoid.contains(point):
            raise InputError(f"--apply point {point} is not in the monoid")
        result = None
        for mode, algebra in ((STRICT, "monoid"),
                              (NORMALIZATION, "saturation"),
                              (AMBIENT, "group")):
            try:
                result = apply_derivation(
                    delta, AlgebraElement.monomial(monoid, point, mode=mode))
                payload["image_algebra"] = algebra
                break
            except ClosureError:
                continue
        payload["action"] = "apply"
        payload["argument"] = _pt(point)
        payload["result"] = _element_doc(result)
    else:
        tokens = args.exp.split(",")
        if len(tokens) < 2:
            raise InputError("--exp needs a scalar and a point: t,m1,...,mn")
        try:
            t = Fraction(tokens[0])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad scalar {tokens[0]!r} in --exp") from exc
        point = normalized_point(
            monoid, parse_point(",".join(tokens[1:]), "--exp"),
            "--exp point")
        if not monoid.contains(point):
            raise InputError(f"--exp point {point} is not in the monoid")
        f = AlgebraElement.monomial(monoid, point, mode=NORMALIZATION)
        result = exponential(delta, t, f, bounds["max_iter"])
        payload["action"] = "exponential"
        payload["argument"] = _pt(point)
        payload["t"] = _fr(t)
        payload["result"] = _element_doc(result)
    emit(payload, args.format, _render_derive)
    return EXIT_OK


def _render_derive(p: dict) -> str:
    terms = [f"{t['coefficient']} * x^{tuple(t['exponent'])}"
             for t in p["result"]]
    poly = "  +  ".join(terms) if terms else "0"
    head = (f"exp({p['t']} * d)" if p["action"] == "exponential" else "d")
    out = [f"root {tuple(p['root_shift'])} at ray {p['ray_index']}\n",
           f"{head} applied to x^{tuple(p['argument'])}:\n",
           f"  {poly}\n"]
    if "image_algebra" in p:
        out.append(f"image lives in: {p['image_algebra']} algebra\n")
    return "".join(out)


def run_check(doc: dict, args: argparse.Namespace) -> int:
    monoid = build_monoid(doc)
    bounds = resolve_bounds(doc, args)
    if args.exact_only and not monoid.exact_mode:
        return _exact_only_block(doc, bounds, monoid, "check", args.format)
    results = run_all(monoid, bounds["degree_bound"],
                      bounds["family_window"], bounds["root_height"],
                      samples=args.samples, seed=args.seed)
    failures = sum(1 for r in results if r.status == "fail")
    payload = _tool_doc("check", doc, bounds)
    payload["results"] = [{"name": r.name, "status": r.status,
                           "detail": r.detail} for r in results]
    payload["failures"] = failures
    emit(payload, args.format, _render_check)
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def _render_check(p: dict) -> str:
    rows = [(r["status"].upper(), r["name"], r["detail"])
            for r in p["results"]]
    tail = ("all checks passed\n" if p["failures"] == 0
            else f"{p['failures']} check(s) FAILED\n")
    return _table(rows, ("status", "check", "detail")) + tail


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mltoric",
        description="Makar-Limanov invariants of affine toric varieties "
                    "from monoid generators")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="JSON monoid document")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--degree-bound", type=int, default=None,
                       help="hole search degree bound")
        p.add_argument("--family-window", type=int, default=None,
                       help="membership window for hole families")
        p.add_argument("--root-height", type=int, default=None,
                       help="root enumeration box size")
        p.add_argument("--exact-only", action="store_true",
                       help="refuse heuristic verdicts (rank <= 2 only)")

    p_analyze = sub.add_parser("analyze", help="full invariant report")
    common(p_analyze)

    p_holes = sub.add_parser("holes", help="list holes up to a degree bound")
    common(p_holes)
    p_holes.add_argument("--bound", type=int, default=None,
                         help="alias for --degree-bound")

    p_roots = sub.add_parser("roots", help="demazure roots and their descent")
    common(p_roots)
    p_roots.add_argument("--ray", type=int, default=None,
                         help="restrict to one dual ray index")
    p_roots.add_argument("--height", type=int, default=None,
                         help="alias for --root-height")

    p_derive = sub.add_parser("derive", help="apply a root derivation")
    common(p_derive)
    p_derive.add_argument("--ray", type=int, required=True,
                          help="dual ray index of the root")
    p_derive.add_argument("--root", required=True,
                          help="root shift, comma-separated integers")
    action = p_derive.add_mutually_exclusive_group(required=True)
    action.add_argument("--apply", default=None,
                        help="monomial exponent to differentiate")
    action.add_argument("--exp", default=None,
                        help="t,m1,...,mn: exponential at scalar t")

    p_check = sub.add_parser("check", help="run the consistency suite")
    common(p_check)
    p_check.add_argument("--samples", type=int, default=25)
    p_check.add_argument("--seed", type=int, default=0)
    return parser


_RUNNERS = {
    "analyze": run_analyze,
    "holes": run_holes,
    "roots": run_roots,
    "derive": run_derive,
    "check": run_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("degree_bound", "bound", "family_window", "root_height",
                 "height", "samples"):
        value = getattr(args, flag, None)
        if value is not None and value <= 0:
            sys.stderr.write(f"error: --{flag.replace('_', '-')} "
                             "must be positive\n")
            return EXIT_INPUT
    try:
        doc = load_document(args.file)
        return _RUNNERS[args.command](doc, args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except UnitsError as exc:
        sys.stderr.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
