"""Command-line front end.

Every public library operation is reachable from at least one subcommand;
the dispatch table records which operations each handler exercises and a
test enforces the correspondence.  Reports are deterministic: identical
inputs, seeds, and package version give byte-identical output.

Exit codes: 0 success, 1 a check ran and failed, 2 unusable input.
The environment variable SEGAL_TOLERANCE_SCALE multiplies every tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import __version__, acceptance, beltrami, cobordism, corpus, flattening, modulus, quasisym
from . import chains as chainalg
from .errors import SegalError


class CliInputError(Exception):
    """Raised while reading or decoding inputs; maps to exit code 2."""


# ---------------------------------------------------------------------------
# parsing helpers


def tolerance_scale() -> float:
    raw = os.environ.get("SEGAL_TOLERANCE_SCALE", "1")
    try:
        v = float(raw)
    except ValueError:
        raise CliInputError(f"SEGAL_TOLERANCE_SCALE={raw!r} is not a number")
    if not v > 0 or math.isnan(v) or math.isinf(v):
        raise CliInputError(f"SEGAL_TOLERANCE_SCALE={raw!r} must be finite and positive")
    return v


def parse_complex(s: str) -> complex:
    """Accept Python literals like 0.1+0.2j or comma pairs like 0.1,0.2."""
    txt = s.strip()
    try:
        if "," in txt:
            re_s, im_s = txt.split(",")
            return complex(float(re_s), float(im_s))
        return complex(txt)
    except ValueError:
        raise CliInputError(f"cannot parse complex number from {s!r}")


def parse_float(s: str, what: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise CliInputError(f"cannot parse {what} from {s!r}")


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise CliInputError(f"{path}: {e.strerror or e}")
    except json.JSONDecodeError as e:
        raise CliInputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")


def load_octype(path: str) -> cobordism.OCType:
    d = load_json(path)
    try:
        return cobordism.octype_from_json(d)
    except (SegalError, KeyError, TypeError, ValueError) as e:
        raise CliInputError(f"{path}: not a valid surface-type file: {e}")


def load_field(path: str) -> beltrami.DilatationField:
    d = load_json(path)
    try:
        return beltrami.DilatationField.from_json(d)
    except (SegalError, KeyError, TypeError, ValueError) as e:
        raise CliInputError(f"{path}: not a valid dilatation-field file: {e}")


def load_sampled_csv(path: str) -> quasisym.SampledIncreasingFunction:
    """Two-column x,y file; a non-numeric first line is treated as a header."""
    xs: list[float] = []
    ys: list[float] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise CliInputError(f"{path}: {e.strerror or e}")
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise CliInputError(f"{path}:{lineno}: expected two comma-separated columns")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            if lineno == 1:
                continue
            raise CliInputError(f"{path}:{lineno}: non-numeric sample")
        xs.append(x)
        ys.append(y)
    try:
        return quasisym.SampledIncreasingFunction(tuple(xs), tuple(ys))
    except SegalError as e:
        raise CliInputError(f"{path}: {e}")


def parse_profile(kind: str) -> quasisym.CircleDiffeo:
    if kind == "piecewise":
        return quasisym.half_angle_piecewise()
    if kind == "smooth":
        return quasisym.half_angle_smooth()
    if kind == "identity":
        return quasisym.circle_identity()
    if kind.startswith("rotation:"):
        return quasisym.circle_rotation(parse_float(kind[9:], "rotation angle"))
    raise CliInputError(
        f"unknown profile {kind!r}; use piecewise, smooth, identity, or rotation:ANGLE"
    )


def parse_sampled(kind: str, n: int) -> quasisym.SampledIncreasingFunction:
    if kind == "identity":
        return quasisym.sampled_identity(n)
    if kind.startswith("slope:"):
        return quasisym.sampled_slope_break(parse_float(kind[6:], "slope"), n)
    if kind.startswith("exp:"):
        return quasisym.sampled_exp(parse_float(kind[4:], "window size"), n)
    raise CliInputError(f"unknown function {kind!r}; use identity, slope:K, or exp:T")


def parse_glue(kind: str) -> flattening.BoundaryGlueMap:
    try:
        if kind == "identity":
            return flattening.glue_identity()
        if kind.startswith("linear:"):
            return flattening.glue_linear(parse_float(kind[7:], "slope"))
        if kind.startswith("sine:"):
            return flattening.glue_sine(parse_float(kind[5:], "amplitude"))
    except SegalError as e:
        raise CliInputError(f"glue map {kind!r}: {e}")
    raise CliInputError(f"unknown glue map {kind!r}; use identity, linear:K, or sine:A")


# ---------------------------------------------------------------------------
# output helpers


def cfmt(z: complex) -> str:
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def cjson(z: complex) -> list[float]:
    return [z.real, z.imag]


def emit(args: argparse.Namespace, payload: dict, lines: Sequence[str]) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def octype_lines(t: cobordism.OCType) -> list[str]:
    lines = [
        f"components: {len(t.components)}",
        f"in signature: {t.in_signature.describe()}",
        f"out signature: {t.out_signature.describe()}",
    ]
    for i, comp in enumerate(t.components):
        lines.append(
            f"component {i}: genus={comp.genus} closed_in={len(comp.closed_in)} "
            f"closed_out={len(comp.closed_out)} cycles={len(comp.cycles)}"
        )
    return lines


def field_lines(f: beltrami.DilatationField) -> list[str]:
    return [
        f"grid: {f.ny}x{f.nx}",
        f"rectangle: [{f.x0!r}, {f.x1!r}] x [{f.y0!r}, {f.y1!r}]",
        f"sup |mu|: {f.sup_abs()!r}",
    ]


def finish_type_output(args: argparse.Namespace, t: cobordism.OCType) -> None:
    payload = cobordism.octype_to_json(t)
    if getattr(args, "output", None):
        write_json(args.output, payload)
    emit(args, payload, octype_lines(t))


def finish_field_output(args: argparse.Namespace, f: beltrami.DilatationField) -> None:
    payload = f.to_json()
    if getattr(args, "output", None):
        write_json(args.output, payload)
    emit(args, payload, field_lines(f))


# ---------------------------------------------------------------------------
# handlers: surface types


def run_types_validate(args) -> int:
    t = load_octype(args.file)
    rep = cobordism.validate_type(t)
    payload = {
        "schema": "segal.report.validate/1",
        "version": __version__,
        "ok": rep.ok,
        "violations": list(rep.violations),
    }
    lines = [f"ok: {str(rep.ok).lower()}"] + [f"violation: {v}" for v in rep.violations]
    emit(args, payload, lines)
    return 0 if rep.ok else 1


def run_types_compose(args) -> int:
    t1, t2 = load_octype(args.first), load_octype(args.second)
    out = cobordism.compose_types(t1, t2)
    finish_type_output(args, out)
    return 0


def run_types_union(args) -> int:
    t1, t2 = load_octype(args.first), load_octype(args.second)
    finish_type_output(args, cobordism.disjoint_union(t1, t2))
    return 0


def run_types_stability(args) -> int:
    t = load_octype(args.file)
    rep = cobordism.is_stable(t)
    payload = {
        "schema": "segal.report.stability/1",
        "version": __version__,
        "statuses": list(rep.statuses),
        "all_stable": rep.all_stable,
    }
    lines = [f"component {i}: {s}" for i, s in enumerate(rep.statuses)]
    lines.append(f"all stable: {str(rep.all_stable).lower()}")
    emit(args, payload, lines)
    return 0 if rep.all_stable else 1


def run_types_random(args) -> int:
    rng = random.Random(args.seed)
    if args.successor:
        base = load_octype(args.successor)
        t = corpus.random_successor(rng, base)
    else:
        t = corpus.random_octype(rng)
    finish_type_output(args, t)
    return 0


def run_types_enumerate(args) -> int:
    labels = tuple(args.labels.split(",")) if args.labels else ("a", "b")
    if not all(labels):
        raise CliInputError("labels must be non-empty strings")
    ts = corpus.enumerate_small_types(labels)
    payload = {
        "schema": "segal.enumeration/1",
        "version": __version__,
        "labels": list(labels),
        "count": len(ts),
    }
    emit(args, payload, [f"count: {len(ts)}"])
    return 0


# ---------------------------------------------------------------------------
# handlers: dilatation calculus


def run_belt_distance(args) -> int:
    if args.mu:
        mu1, mu2 = (parse_complex(s) for s in args.mu)
        try:
            d = beltrami.teichmuller_distance(mu1, mu2)
            ks = [beltrami.dilatation_K(mu1), beltrami.dilatation_K(mu2)]
        except SegalError as e:
            raise CliInputError(str(e))
        payload = {
            "schema": "segal.report.distance/1",
            "version": __version__,
            "kind": "scalar",
            "distance": d,
            "dilatations": ks,
        }
        lines = [f"distance: {d!r}", f"K1: {ks[0]!r}", f"K2: {ks[1]!r}"]
    else:
        if not (args.first and args.second):
            raise CliInputError("provide two field files or --mu MU1 MU2")
        f1, f2 = load_field(args.first), load_field(args.second)
        d = beltrami.field_distance(f1, f2)
        payload = {
            "schema": "segal.report.distance/1",
            "version": __version__,
            "kind": "field",
            "distance": d,
        }
        lines = [f"distance: {d!r}"]
    emit(args, payload, lines)
    return 0


def _chart_triplet(args) -> tuple[complex, complex, complex]:
    mu_f = parse_complex(args.mu_f)
    fz = parse_complex(args.fz)
    fzbar = parse_complex(args.fzbar) if args.fzbar else mu_f * parse_complex(args.fz)
    return mu_f, fz, fzbar


def run_belt_transform(args) -> int:
    mu_f, fz, fzbar = _chart_triplet(args)
    if args.value:
        mu = parse_complex(args.value)
        out = beltrami.transform_mu(mu, mu_f, fz, fzbar)
        payload = {
            "schema": "segal.report.transform/1",
            "version": __version__,
            "value": cjson(out),
        }
        emit(args, payload, [f"value: {cfmt(out)}"])
        return 0
    if not args.field:
        raise CliInputError("provide a field file or --value MU")
    f = load_field(args.field)
    finish_field_output(args, beltrami.transform_field(f, mu_f, fz, fzbar))
    return 0


def run_belt_pullback(args) -> int:
    mu_g = parse_complex(args.mu_g)
    u = parse_complex(args.u)
    if args.value:
        nu = parse_complex(args.value)
        out = beltrami.pullback_mu(nu, mu_g, u)
        payload = {
            "schema": "segal.report.pullback/1",
            "version": __version__,
            "value": cjson(out),
        }
        emit(args, payload, [f"value: {cfmt(out)}"])
        return 0
    if not args.field:
        raise CliInputError("provide a field file or --value MU")
    f = load_field(args.field)
    finish_field_output(args, beltrami.pullback_field(f, mu_g, u))
    return 0


def run_belt_sew(args) -> int:
    f1, f2 = load_field(args.first), load_field(args.second)
    finish_field_output(args, beltrami.sew_sections(f1, f2, args.seam))
    return 0


def run_belt_acs(args) -> int:
    payload: dict = {"schema": "segal.report.acs/1", "version": __version__}
    lines: list[str] = []
    if args.mu is not None:
        mu = parse_complex(args.mu)
        try:
            j = beltrami.acs_from_mu(mu)
        except SegalError as e:
            raise CliInputError(str(e))
        back = beltrami.mu_from_acs(j)
        k = beltrami.dilatation_K(mu)
        payload.update(
            matrix=[[j.j11, j.j12], [j.j21, j.j22]], mu=cjson(back), dilatation=k
        )
        lines = [
            f"matrix: [[{j.j11!r}, {j.j12!r}], [{j.j21!r}, {j.j22!r}]]",
            f"mu: {cfmt(back)}",
            f"dilatation: {k!r}",
        ]
    elif args.frame is not None:
        a, b = (parse_float(s, "frame entry") for s in args.frame)
        try:
            j = beltrami.acs_from_frame(a, b)
        except SegalError as e:
            raise CliInputError(str(e))
        mu = beltrami.mu_from_acs(j)
        payload.update(matrix=[[j.j11, j.j12], [j.j21, j.j22]], mu=cjson(mu))
        lines = [
            f"matrix: [[{j.j11!r}, {j.j12!r}], [{j.j21!r}, {j.j22!r}]]",
            f"mu: {cfmt(mu)}",
        ]
    elif args.K is not None:
        k = parse_float(args.K, "dilatation")
        try:
            m = beltrami.abs_mu_from_K(k)
        except SegalError as e:
            raise CliInputError(str(e))
        payload.update(abs_mu=m)
        lines = [f"abs mu: {m!r}"]
    elif args.linear is not None:
        a, b = (parse_complex(s) for s in args.linear)
        try:
            mu = beltrami.mu_of_linear(beltrami.LinearMapZZbar(a, b))
        except SegalError as e:
            raise CliInputError(str(e))
        payload.update(mu=cjson(mu), dilatation=beltrami.dilatation_K(mu))
        lines = [f"mu: {cfmt(mu)}", f"dilatation: {beltrami.dilatation_K(mu)!r}"]
    else:
        raise CliInputError("provide one of --mu, --frame, --K, --linear")
    emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# handlers: quasisymmetry


def run_qs_bound(args) -> int:
    if args.file:
        h = load_sampled_csv(args.file)
    else:
        h = parse_sampled(args.fn, args.n)
    if args.inverted:
        h = h.inverted()
    k = quasisym.qs_bound(h)
    payload = {
        "schema": "segal.report.qsbound/1",
        "version": __version__,
        "bound": k,
        "samples": len(h.xs),
    }
    emit(args, payload, [f"bound: {k!r}", f"samples: {len(h.xs)}"])
    return 0


def run_qs_corner(args) -> int:
    phi = parse_profile(args.profile)
    try:
        k = quasisym.corner_dilatation(phi)
    except SegalError as e:
        raise CliInputError(f"profile unsuitable for a corner map: {e}")
    lo, hi = phi.derivative_range()
    sigma = quasisym.corner_transform(phi)
    pts = [parse_complex(p) for p in args.points.split(";")] if args.points else []
    rim = [complex(math.cos(2 * math.pi * j / 8), math.sin(2 * math.pi * j / 8)) for j in range(8)]
    images, _ = quasisym.corner_map(phi, rim)
    extra = [sigma(p) for p in pts]
    payload = {
        "schema": "segal.report.corner/1",
        "version": __version__,
        "dilatation": k,
        "derivative_range": [lo, hi],
        "rim_images": [cjson(z) for z in images],
        "point_images": [cjson(z) for z in extra],
    }
    lines = [f"dilatation: {k!r}", f"derivative range: [{lo!r}, {hi!r}]"]
    lines += [f"rim {j}: {cfmt(z)}" for j, z in enumerate(images)]
    lines += [f"point {j}: {cfmt(z)}" for j, z in enumerate(extra)]
    emit(args, payload, lines)
    return 0


def run_qs_twist(args) -> int:
    phi = parse_profile(args.profile)
    _twist, rep = quasisym.smooth_twist(phi, args.r1, args.r2)
    payload = {
        "schema": "segal.report.twist/1",
        "version": __version__,
        "inner_max_dev": rep.inner_max_dev,
        "outer_max_dev": rep.outer_max_dev,
        "min_jacobian": rep.min_jacobian,
        "endpoint_flatness": rep.endpoint_flatness,
        "rigid_rotation": rep.rigid_rotation,
        "phase": rep.phase,
    }
    lines = [
        f"inner max dev: {rep.inner_max_dev!r}",
        f"outer max dev: {rep.outer_max_dev!r}",
        f"min jacobian: {rep.min_jacobian!r}",
        f"endpoint flatness: {rep.endpoint_flatness!r}",
        f"rigid rotation: {str(rep.rigid_rotation).lower()}",
        f"phase: {rep.phase!r}",
    ]
    emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# handlers: conformal modules


def run_module_compute(args) -> int:
    try:
        if args.quad:
            q = modulus.QuadrilateralSpec(*(parse_float(s, "marked point") for s in args.quad))
            x = modulus.normalize_quad(q)
            m = modulus.module_of_quad(q)
            cr = modulus.cross_ratio(*q.vertices)
            payload = {
                "schema": "segal.report.module/1",
                "version": __version__,
                "kind": "quad",
                "position": x,
                "module": m,
                "cross_ratio": cr,
            }
            lines = [f"position: {x!r}", f"module: {m!r}", f"cross ratio: {cr!r}"]
        elif args.rect:
            a, b = (parse_float(s, "rectangle side") for s in args.rect)
            m = modulus.module_rect(a, b)
            payload = {
                "schema": "segal.report.module/1",
                "version": __version__,
                "kind": "rect",
                "module": m,
            }
            lines = [f"module: {m!r}"]
        else:
            if not args.positions:
                raise CliInputError("provide positions, --quad, or --rect")
            entries = []
            lines = []
            for s in args.positions:
                x = parse_float(s, "position")
                m = modulus.module_sc(x)
                xr = modulus.rotated_position(x)
                mr = modulus.module_sc(xr)
                entries.append(
                    {"position": x, "module": m, "rotated_position": xr, "product": m * mr}
                )
                lines.append(f"x={x!r}: module={m!r} rotated={mr!r} product={m * mr!r}")
            payload = {
                "schema": "segal.report.module/1",
                "version": __version__,
                "kind": "positions",
                "entries": entries,
            }
    except SegalError as e:
        raise CliInputError(str(e))
    emit(args, payload, lines)
    return 0


def run_module_check_qc(args) -> int:
    scale = tolerance_scale()
    if args.generate:
        quads = corpus.generate_quads(args.seed, args.count)
    elif args.corpus:
        quads = acceptance.load_corpus(args.corpus).quads
    else:
        quads = acceptance.load_corpus().quads
    try:
        specs = [modulus.QuadrilateralSpec(*q) for q in quads]
        report = modulus.check_geometric_qc(args.K, specs, slack=args.slack * scale)
    except SegalError as e:
        raise CliInputError(str(e))
    payload = {
        "schema": "segal.report.qc/1",
        "version": __version__,
        "K": report.K,
        "quad_count": len(report.quad_ratios),
        "min_ratio": report.min_ratio,
        "max_ratio": report.max_ratio,
        "within_bounds": report.within_bounds,
    }
    lines = [
        f"K: {report.K!r}",
        f"quads: {len(report.quad_ratios)}",
        f"ratio range: [{report.min_ratio!r}, {report.max_ratio!r}]",
        f"within bounds: {str(report.within_bounds).lower()}",
    ]
    emit(args, payload, lines)
    return 0 if report.within_bounds else 1


# ---------------------------------------------------------------------------
# handlers: chain algebra


def _simplex_str(s) -> str:
    if isinstance(s, chainalg.FormalSimplex):
        base = f"{s.label}{s.dimension}"
        if s.omitted:
            base += "/" + ",".join(str(v) for v in sorted(s.omitted))
        return base
    word = "".join(f"({a},{b})" for a, b in s.pairs)
    return f"{_simplex_str(s.left)}*{_simplex_str(s.right)}@{word}"


def _chain_entries(c: chainalg.Chain) -> list[tuple[str, str]]:
    return [(_simplex_str(s), str(coef)) for s, coef in c.sorted_terms()]


def run_chains_product(args) -> int:
    if args.i < 0 or args.j < 0:
        raise CliInputError("degrees must be non-negative")
    if args.i + args.j > 8:
        raise CliInputError("total degree above 8 is too large to print")
    la, lb = args.labels.split(",") if "," in args.labels else (args.labels, args.labels)
    prod = chainalg.shuffle_product(
        chainalg.generator(la, args.i), chainalg.generator(lb, args.j)
    )
    shown = prod
    kind = "product"
    if args.boundary:
        shown = chainalg.boundary(prod)
        kind = "boundary"
    elif args.swapped:
        shown = chainalg.swap_factors(prod)
        kind = "swapped"
    entries = _chain_entries(shown)
    payload = {
        "schema": "segal.report.chain/1",
        "version": __version__,
        "kind": kind,
        "terms": [{"simplex": s, "coefficient": c} for s, c in entries],
        "count": len(entries),
    }
    lines = [f"{c:>3s}  {s}" for s, c in entries] + [f"terms: {len(entries)}"]
    emit(args, payload, lines)
    return 0


def run_chains_check(args) -> int:
    deg = args.degree
    if not 1 <= deg <= 8:
        raise CliInputError("degree must be between 1 and 8")
    chain_map_ok = all(
        chainalg.check_chain_map(i, j)
        for i in range(deg + 1)
        for j in range(deg + 1 - i)
    )
    assoc_ok = all(
        chainalg.check_associativity(i, j, k)
        for i in range(deg + 1)
        for j in range(deg + 1 - i)
        for k in range(deg + 1 - i - j)
    )
    sym_ok = all(
        chainalg.check_symmetry(i, j) for i in range(4) for j in range(4)
    )
    square_ok = all(
        chainalg.boundary(chainalg.boundary(chainalg.generator("a", n))).is_zero()
        for n in range(1, deg + 1)
    )
    ok = chain_map_ok and assoc_ok and sym_ok and square_ok
    payload = {
        "schema": "segal.report.chaincheck/1",
        "version": __version__,
        "max_degree": deg,
        "chain_map": chain_map_ok,
        "associativity": assoc_ok,
        "symmetry": sym_ok,
        "boundary_squares_to_zero": square_ok,
        "ok": ok,
    }
    lines = [
        f"chain map: {str(chain_map_ok).lower()}",
        f"associativity: {str(assoc_ok).lower()}",
        f"symmetry: {str(sym_ok).lower()}",
        f"d^2 = 0: {str(square_ok).lower()}",
    ]
    emit(args, payload, lines)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# handlers: flattening


def _order_str(v) -> str:
    if v == flattening.INFINITE:
        return "inf"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def run_appb_orders(args) -> int:
    if args.k < 0:
        raise CliInputError("step count must be non-negative")
    if args.k > 200:
        raise CliInputError("step count above 200 is not meaningful to print")
    seq = flattening.order_sequence(args.k)
    # fold the single-step map as an internal cross-check of the table
    cur = seq[0]
    for p in seq[1:]:
        cur = flattening.order_step(cur)
        if cur != p:
            raise SegalError("order table disagrees with the one-step recursion")
    payload = {
        "schema": "segal.report.orders/1",
        "version": __version__,
        "steps": [
            {"k": i, "m": None if p.m == flattening.INFINITE else p.m, "n": p.n}
            for i, p in enumerate(seq)
        ],
    }
    lines = [
        f"{i}: m={_order_str(p.m)} n={_order_str(p.n)}" for i, p in enumerate(seq)
    ]
    emit(args, payload, lines)
    return 0


def run_appb_flatten(args) -> int:
    g = parse_glue(args.glue)
    if not 0 <= args.k <= 2:
        raise CliInputError("--k must be between 0 and 2")
    report = flattening.verify_orders(g, args.k)
    rows = [
        (
            fit.k,
            _order_str(fit.fitted_m),
            _order_str(fit.fitted_n),
            _order_str(fit.predicted.m),
            _order_str(fit.predicted.n),
            str(fit.ok).lower(),
        )
        for fit in report.fits
    ]
    chart_payload = None
    chart_lines: list[str] = []
    if args.chart:
        field = flattening.base_structure_field(g)
        for _ in range(args.depth):
            field = flattening.next_structure_field(field)
        chart = flattening.flatten_step(field, window=g.window, y_max=0.75 * g.y_max)
        rep = chart.report
        x_probe = 0.5 * (rep.x_valid[0] + rep.x_valid[1])
        tau = flattening.tau_minus1(g, [(x_probe, 0.0)])[0]
        chart_payload = {
            "boundary_max_dev": rep.boundary_max_dev,
            "min_jacobian": rep.min_jacobian,
            "pushforward_max_dev": rep.pushforward_max_dev,
            "x_valid": list(rep.x_valid),
            "y_valid": list(rep.y_valid),
            "tau_probe": [x_probe, tau[0], tau[1]],
        }
        chart_lines = [
            "",
            f"chart depth: {args.depth}",
            f"boundary max dev: {rep.boundary_max_dev!r}",
            f"min jacobian: {rep.min_jacobian!r}",
            f"pushforward max dev: {rep.pushforward_max_dev!r}",
            f"certified x: [{rep.x_valid[0]!r}, {rep.x_valid[1]!r}]",
            f"certified y: [{rep.y_valid[0]!r}, {rep.y_valid[1]!r}]",
            f"tau({x_probe!r}, 0.0) = ({tau[0]!r}, {tau[1]!r})",
        ]
    payload = {
        "schema": "segal.report.orderfits/1",
        "version": __version__,
        "glue": args.glue,
        "fits": [
            {
                "k": fit.k,
                "fitted_m": None if fit.fitted_m == flattening.INFINITE else fit.fitted_m,
                "fitted_n": None if fit.fitted_n == flattening.INFINITE else fit.fitted_n,
                "predicted_m": None
                if fit.predicted.m == flattening.INFINITE
                else fit.predicted.m,
                "predicted_n": fit.predicted.n,
                "ok": fit.ok,
            }
            for fit in report.fits
        ],
        "all_ok": report.all_ok,
    }
    if chart_payload is not None:
        payload["chart"] = chart_payload
    lines = ["k,fitted_m,fitted_n,predicted_m,predicted_n,ok"]
    lines += [",".join(str(v) for v in row) for row in rows]
    lines += chart_lines
    emit(args, payload, lines)
    return 0 if report.all_ok else 1


# ---------------------------------------------------------------------------
# handler: acceptance


def run_accept(args) -> int:
    scale = tolerance_scale()
    indices = None
    if args.only:
        try:
            indices = [int(s) for s in args.only.split(",")]
        except ValueError:
            raise CliInputError(f"--only takes comma-separated integers, got {args.only!r}")
        bad = [i for i in indices if not 1 <= i <= 12]
        if bad:
            raise CliInputError(f"criterion indices out of range: {bad}")
    try:
        results = acceptance.run_acceptance(args.corpus, scale, indices)
    except acceptance.CorpusError as e:
        raise CliInputError(str(e))
    payload = {
        "schema": "segal.report.accept/1",
        "version": __version__,
        "tolerance_scale": scale,
        "results": [
            {
                "index": r.index,
                "name": r.name,
                "passed": r.passed,
                "measured": r.measured,
                "tolerance": r.tolerance,
                "detail": r.detail,
            }
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    emit(args, payload, [r.line() for r in results])
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# dispatch table


@dataclass(frozen=True)
class Command:
    group: Optional[str]
    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    run: Callable[[argparse.Namespace], int]
    uses: tuple[str, ...]


def _cfg_types_validate(p):
    p.add_argument("file", help="surface-type JSON file")


def _cfg_two_types(p):
    p.add_argument("first", help="surface-type JSON file")
    p.add_argument("second", help="surface-type JSON file")
    p.add_argument("-o", "--output", help="write the resulting type JSON here")


def _cfg_types_random(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--successor", help="emit a type composable after this one", default=None)
    p.add_argument("-o", "--output", help="write the type JSON here")


def _cfg_types_enumerate(p):
    p.add_argument("--labels", default="a,b", help="comma-separated interval labels")


def _cfg_belt_distance(p):
    p.add_argument("first", nargs="?", help="dilatation-field JSON file")
    p.add_argument("second", nargs="?", help="dilatation-field JSON file")
    p.add_argument("--mu", nargs=2, metavar=("MU1", "MU2"), help="two scalar values")


def _cfg_belt_transform(p):
    p.add_argument("field", nargs="?", help="dilatation-field JSON file")
    p.add_argument("--value", help="transform one scalar instead of a field")
    p.add_argument("--mu-f", required=True, help="dilatation of the chart change")
    p.add_argument("--fz", required=True, help="holomorphic derivative at the point")
    p.add_argument("--fzbar", help="antiholomorphic derivative; default mu_f*fz")
    p.add_argument("-o", "--output", help="write the resulting field JSON here")


def _cfg_belt_pullback(p):
    p.add_argument("field", nargs="?", help="dilatation-field JSON file")
    p.add_argument("--value", help="pull back one scalar instead of a field")
    p.add_argument("--mu-g", required=True, help="dilatation of the overlap map")
    p.add_argument("--u", required=True, help="derivative coefficient of the overlap map")
    p.add_argument("-o", "--output", help="write the resulting field JSON here")


def _cfg_belt_sew(p):
    p.add_argument("first", help="dilatation-field JSON file")
    p.add_argument("second", help="dilatation-field JSON file")
    p.add_argument("--seam", choices=("x", "y"), default="x")
    p.add_argument("-o", "--output", help="write the joined field JSON here")


def _cfg_belt_acs(p):
    p.add_argument("--mu", help="dilatation value to convert to a structure matrix")
    p.add_argument("--frame", nargs=2, metavar=("A", "B"), help="frame coefficients")
    p.add_argument("--K", help="dilatation bound to convert to |mu|")
    p.add_argument("--linear", nargs=2, metavar=("A", "B"), help="z and conj(z) coefficients")


def _cfg_qs_bound(p):
    p.add_argument("--fn", default="identity", help="identity, slope:K, or exp:T")
    p.add_argument("--file", help="CSV file of x,y samples")
    p.add_argument("--n", type=int, default=256, help="sample count for built-in functions")
    p.add_argument("--inverted", action="store_true", help="bound the inverse instead")


def _cfg_qs_corner(p):
    p.add_argument("--profile", default="piecewise", help="piecewise, smooth, identity, rotation:X")
    p.add_argument("--points", help="semicolon-separated complex points to map")


def _cfg_qs_twist(p):
    p.add_argument("--profile", default="smooth", help="piecewise, smooth, identity, rotation:X")
    p.add_argument("--r1", type=float, default=1.0)
    p.add_argument("--r2", type=float, default=2.0)


def _cfg_module_compute(p):
    p.add_argument("positions", nargs="*", help="normalized fourth-point positions, |x| > 1")
    p.add_argument("--quad", nargs=4, metavar=("Z0", "Z1", "Z2", "Z3"), help="marked points")
    p.add_argument("--rect", nargs=2, metavar=("A", "B"), help="rectangle side lengths")


def _cfg_module_check_qc(p):
    p.add_argument("--K", type=float, default=2.0, help="horizontal stretch factor")
    p.add_argument("--corpus", help="directory holding quads.json")
    p.add_argument("--generate", action="store_true", help="generate quads instead of loading")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--slack", type=float, default=1e-6)


def _cfg_chains_product(p):
    p.add_argument("i", type=int, help="degree of the first generator")
    p.add_argument("j", type=int, help="degree of the second generator")
    p.add_argument("--labels", default="a,b", help="labels LA,LB of the two generators")
    p.add_argument("--boundary", action="store_true", help="print the boundary of the product")
    p.add_argument("--swapped", action="store_true", help="print the factor-swapped product")


def _cfg_chains_check(p):
    p.add_argument("--degree", type=int, default=6, help="maximum total degree to sweep")


def _cfg_appb_orders(p):
    p.add_argument("k", type=int, help="number of recursion steps to tabulate")


def _cfg_appb_flatten(p):
    p.add_argument("--glue", default="sine:0.1", help="identity, linear:K, or sine:A")
    p.add_argument("--k", type=int, default=1, help="deepest field level to fit")
    p.add_argument("--chart", action="store_true", help="also flatten one field and certify it")
    p.add_argument("--depth", type=int, default=0, help="field recursion depth for --chart")


def _cfg_accept(p):
    p.add_argument("--corpus", help="directory with quads.json and types/*.json")
    p.add_argument("--only", help="comma-separated criterion indices to run")


COMMANDS: tuple[Command, ...] = (
    Command(
        "types", "validate", "check structural invariants of a surface type",
        _cfg_types_validate, run_types_validate,
        ("cobordism.validate_type", "cobordism.octype_from_json"),
    ),
    Command(
        "types", "compose", "splice two types along matching boundaries",
        _cfg_two_types, run_types_compose,
        ("cobordism.compose_types", "cobordism.octype_to_json"),
    ),
    Command(
        "types", "union", "place two types side by side",
        _cfg_two_types, run_types_union,
        ("cobordism.disjoint_union",),
    ),
    Command(
        "types", "stability", "report per-component stability",
        _cfg_types_validate, run_types_stability,
        ("cobordism.is_stable",),
    ),
    Command(
        "types", "random", "emit a seeded random type, optionally composable after a given one",
        _cfg_types_random, run_types_random,
        ("corpus.random_octype", "corpus.random_successor"),
    ),
    Command(
        "types", "enumerate", "count the bounded single-component type grammar",
        _cfg_types_enumerate, run_types_enumerate,
        ("corpus.enumerate_small_types",),
    ),
    Command(
        "belt", "distance", "distance between two fields or two scalar values",
        _cfg_belt_distance, run_belt_distance,
        ("beltrami.field_distance", "beltrami.teichmuller_distance", "beltrami.dilatation_K"),
    ),
    Command(
        "belt", "transform", "push dilatation data through a chart change",
        _cfg_belt_transform, run_belt_transform,
        ("beltrami.transform_mu", "beltrami.transform_field"),
    ),
    Command(
        "belt", "pullback", "pull dilatation data back along an overlap map",
        _cfg_belt_pullback, run_belt_pullback,
        ("beltrami.pullback_mu", "beltrami.pullback_field"),
    ),
    Command(
        "belt", "sew", "join two fields along a shared edge",
        _cfg_belt_sew, run_belt_sew,
        ("beltrami.sew_sections",),
    ),
    Command(
        "belt", "acs", "convert between dilatation values, structure matrices, and frames",
        _cfg_belt_acs, run_belt_acs,
        (
            "beltrami.acs_from_mu", "beltrami.mu_from_acs", "beltrami.acs_from_frame",
            "beltrami.abs_mu_from_K", "beltrami.mu_of_linear", "beltrami.dilatation_K",
        ),
    ),
    Command(
        "qs", "bound", "quasisymmetry constant of an increasing function",
        _cfg_qs_bound, run_qs_bound,
        (
            "quasisym.qs_bound", "quasisym.sampled_identity",
            "quasisym.sampled_slope_break", "quasisym.sampled_exp",
        ),
    ),
    Command(
        "qs", "corner", "radial square-root map with a boundary profile",
        _cfg_qs_corner, run_qs_corner,
        ("quasisym.corner_dilatation", "quasisym.corner_transform", "quasisym.corner_map"),
    ),
    Command(
        "qs", "twist", "extend a circle map to an annulus, identity outside",
        _cfg_qs_twist, run_qs_twist,
        (
            "quasisym.smooth_twist", "quasisym.half_angle_piecewise",
            "quasisym.half_angle_smooth", "quasisym.circle_identity",
            "quasisym.circle_rotation",
        ),
    ),
    Command(
        "module", "compute", "conformal module at positions, of a quad, or of a rectangle",
        _cfg_module_compute, run_module_compute,
        (
            "modulus.module_sc", "modulus.rotated_position", "modulus.normalize_quad",
            "modulus.module_of_quad", "modulus.cross_ratio", "modulus.module_rect",
        ),
    ),
    Command(
        "module", "check-qc", "module distortion bounds under a horizontal stretch",
        _cfg_module_check_qc, run_module_check_qc,
        ("modulus.check_geometric_qc", "corpus.generate_quads", "acceptance.load_corpus"),
    ),
    Command(
        "chains", "product", "shuffle product of two generators",
        _cfg_chains_product, run_chains_product,
        (
            "chains.shuffle_product", "chains.generator", "chains.boundary",
            "chains.swap_factors",
        ),
    ),
    Command(
        "chains", "check", "sweep the product identities up to a degree",
        _cfg_chains_check, run_chains_check,
        (
            "chains.check_chain_map", "chains.check_associativity",
            "chains.check_symmetry", "chains.boundary",
        ),
    ),
    Command(
        "appb", "orders", "tabulate the vanishing-order recursion",
        _cfg_appb_orders, run_appb_orders,
        ("flattening.order_sequence", "flattening.order_step"),
    ),
    Command(
        "appb", "flatten", "fit field vanishing orders; optionally flatten one chart",
        _cfg_appb_flatten, run_appb_flatten,
        (
            "flattening.verify_orders", "flattening.glue_identity",
            "flattening.glue_linear", "flattening.glue_sine",
            "flattening.base_structure_field", "flattening.next_structure_field",
            "flattening.flatten_step", "flattening.tau_minus1",
        ),
    ),
    Command(
        None, "accept", "run the full acceptance suite",
        _cfg_accept, run_accept,
        ("acceptance.run_acceptance",),
    ),
)


GROUP_HELP = {
    "types": "surface-type monoid operations",
    "belt": "dilatation data and its chart transformations",
    "qs": "boundary reparametrization bounds and extensions",
    "module": "conformal modules of quadrilaterals",
    "chains": "formal chain products",
    "appb": "boundary flattening and vanishing orders",
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="segal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"segal {__version__}")
    top = parser.add_subparsers(dest="group", required=True, metavar="COMMAND")

    group_subs: dict[str, argparse._SubParsersAction] = {}
    for cmd in COMMANDS:
        if cmd.group is None:
            leaf = top.add_parser(cmd.name, help=cmd.help, parents=[shared])
            cmd.configure(leaf)
            leaf.set_defaults(run=cmd.run)
            continue
        if cmd.group not in group_subs:
            gp = top.add_parser(cmd.group, help=GROUP_HELP[cmd.group])
            group_subs[cmd.group] = gp.add_subparsers(
                dest="command", required=True, metavar="SUBCOMMAND"
            )
        leaf = group_subs[cmd.group].add_parser(cmd.name, help=cmd.help, parents=[shared])
        cmd.configure(leaf)
        leaf.set_defaults(run=cmd.run)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except CliInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SegalError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
