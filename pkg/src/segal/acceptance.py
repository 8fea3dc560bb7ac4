"""Acceptance suite: every shipped guarantee as one runnable check.

Each criterion returns a result with a measured value and the tolerance it
was held to, so the command-line runner and the test suite print identical
one-line verdicts.  Tolerances scale by a single factor (CI knob); checks
that are exact keep tolerance zero, which scaling leaves unchanged.
"""

from __future__ import annotations

import cmath
import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from . import beltrami, chains, cobordism, corpus, flattening, modulus, quasisym
from ._oracles import (
    dilatation_fd,
    glued_summary,
    module_agm,
    octype_summary,
    wirtinger_fd,
)
from .errors import SegalError


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict}  {self.index:2d} {self.name:<28s} "
            f"measured={self.measured:.3e} tolerance={self.tolerance:.3e}  {self.detail}"
        )


@dataclass(frozen=True)
class AcceptanceCorpus:
    quads: tuple[tuple[float, float, float, float], ...]
    types: tuple[tuple[str, cobordism.OCType], ...]


class CorpusError(SegalError):
    """Missing or unreadable acceptance corpus."""


def load_corpus(directory: Optional[str] = None) -> AcceptanceCorpus:
    """Read the quad list and example types, bundled or from a directory."""
    if directory is None:
        data = corpus.load_bundled("quads.json")
        quads = tuple(tuple(q) for q in data["quads"])
        names = [
            "disc_out", "disc_in", "free_disc", "strip_ab", "cylinder",
            "pants_split", "pants_join", "torus", "free_annulus",
        ]
        types = tuple(
            (n, cobordism.octype_from_json(corpus.load_bundled(f"types/{n}.json")))
            for n in names
        )
        return AcceptanceCorpus(quads=quads, types=types)
    root = Path(directory)
    quad_path = root / "quads.json"
    if not quad_path.is_file():
        raise CorpusError(f"missing corpus file {quad_path}")
    with open(quad_path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    quads = tuple(tuple(q) for q in data["quads"])
    types = []
    tdir = root / "types"
    if tdir.is_dir():
        for p in sorted(tdir.glob("*.json")):
            with open(p, "r", encoding="utf-8") as fh:
                types.append((p.stem, cobordism.octype_from_json(json.load(fh))))
    return AcceptanceCorpus(quads=quads, types=tuple(types))


def corpus_integrity(c: AcceptanceCorpus) -> CriterionResult:
    """Pre-flight: every corpus type valid, every quad strictly ordered."""
    problems = []
    for name, t in c.types:
        report = cobordism.validate_type(t)
        if not report.ok:
            problems.append(f"{name}: {report.violations[0]}")
    for q in c.quads:
        if not (q[0] < q[1] < q[2] < q[3]):
            problems.append(f"quad {q} not strictly ordered")
    detail = problems[0] if problems else f"{len(c.types)} types, {len(c.quads)} quads"
    return CriterionResult(
        index=0,
        name="corpus-integrity",
        passed=not problems,
        measured=float(len(problems)),
        tolerance=0.0,
        detail=detail,
    )


# ---------------------------------------------------------------------------
# helpers


def _boundary_items(t: cobordism.OCType) -> int:
    return sum(
        len(comp.closed_in) + len(comp.closed_out) + len(comp.cycles)
        for comp in t.components
    )


def _capped_triple(seed: int) -> tuple[cobordism.OCType, ...]:
    rng = random.Random(seed)
    while True:
        t1 = corpus.random_octype(rng)
        t2 = corpus.random_successor(rng, t1)
        t3 = corpus.random_successor(rng, t2)
        triple = (t1, t2, t3)
        if all(len(t.components) <= 4 for t in triple) and all(
            _boundary_items(t) <= 6 for t in triple
        ):
            return triple


def _sample_mu(rng: random.Random, r_max: float = 0.95) -> complex:
    r = r_max * math.sqrt(rng.random())
    return r * cmath.exp(2j * math.pi * rng.random())


def _random_field(
    rng: random.Random, x0: float, x1: float, y0: float, y1: float, nx: int, ny: int
) -> beltrami.DilatationField:
    vals = np.array(
        [[_sample_mu(rng, 0.9) for _ in range(nx)] for _ in range(ny)]
    )
    return beltrami.DilatationField(x0, x1, y0, y1, vals)


# ---------------------------------------------------------------------------
# the criteria


def criterion_1_associativity(tol_scale: float = 1.0, n: int = 1000) -> CriterionResult:
    mismatches = 0
    for seed in range(n):
        t1, t2, t3 = _capped_triple(seed)
        lhs = cobordism.compose_types(cobordism.compose_types(t1, t2), t3)
        rhs = cobordism.compose_types(t1, cobordism.compose_types(t2, t3))
        if lhs != rhs:
            mismatches += 1
    return CriterionResult(
        index=1,
        name="composition-associativity",
        passed=mismatches == 0,
        measured=float(mismatches),
        tolerance=0.0,
        detail=f"{n} seeded composable triples, canonical forms compared",
    )


def criterion_2_compose_oracle(tol_scale: float = 1.0, n_random: int = 200) -> CriterionResult:
    small = corpus.enumerate_small_types()
    mismatches = 0
    checked = 0
    for t1 in small:
        for t2 in small:
            if t1.out_signature != t2.in_signature:
                continue
            got = cobordism.compose_types(t1, t2)
            if octype_summary(got) != glued_summary(t1, t2):
                mismatches += 1
            checked += 1
    for seed in range(n_random):
        t1, t2 = corpus.random_composable_pair(seed)
        if _boundary_items(t1) > 6 or _boundary_items(t2) > 6:
            continue
        got = cobordism.compose_types(t1, t2)
        if octype_summary(got) != glued_summary(t1, t2):
            mismatches += 1
        checked += 1
    return CriterionResult(
        index=2,
        name="compose-vs-cell-complex",
        passed=mismatches == 0,
        measured=float(mismatches),
        tolerance=0.0,
        detail=f"{checked} glued pairs vs polygon-complex oracle, exact",
    )


def criterion_3_dilatation(tol_scale: float = 1.0) -> CriterionResult:
    rng = random.Random(3)
    worst_rt = 0.0
    for _ in range(10_000):
        mu = _sample_mu(rng, 0.999)
        k = beltrami.dilatation_K(mu)
        worst_rt = max(worst_rt, abs(beltrami.abs_mu_from_K(k) - abs(mu)))
    worst_fd = 0.0
    for _ in range(20):
        k = 1.0 + 9.0 * rng.random()
        f = lambda z, k=k: k * z.real + 1j * z.imag
        fz, fzbar = wirtinger_fd(f, complex(0.3, 0.4), 1e-6)
        worst_fd = max(worst_fd, abs(fzbar / fz - (k - 1.0) / (k + 1.0)))
    tol_rt = 1e-12 * tol_scale
    tol_fd = 1e-8 * tol_scale
    return CriterionResult(
        index=3,
        name="dilatation-round-trip",
        passed=worst_rt <= tol_rt and worst_fd <= tol_fd,
        measured=worst_rt,
        tolerance=tol_rt,
        detail=f"10^4 samples; stretch FD dev {worst_fd:.2e} vs {tol_fd:.1e}",
    )


def criterion_4_fiber_isometry(tol_scale: float = 1.0) -> CriterionResult:
    rng = random.Random(4)
    worst = 0.0
    for _ in range(1000):
        mu1, mu2 = _sample_mu(rng), _sample_mu(rng)
        mu_f = _sample_mu(rng, 0.9)
        fz = cmath.exp(2j * math.pi * rng.random()) * (0.5 + rng.random())
        fzbar = mu_f * fz
        d0 = beltrami.teichmuller_distance(mu1, mu2)
        d1 = beltrami.teichmuller_distance(
            beltrami.transform_mu(mu1, mu_f, fz, fzbar),
            beltrami.transform_mu(mu2, mu_f, fz, fzbar),
        )
        worst = max(worst, abs(d1 - d0))
    tol = 1e-10 * tol_scale
    return CriterionResult(
        index=4,
        name="fiber-action-isometry",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        detail="10^3 random coefficient pairs under chart changes",
    )


def criterion_5_sewing_isometry(tol_scale: float = 1.0) -> CriterionResult:
    worst = 0.0
    for seed in range(100):
        rng = random.Random(10_000 + seed)
        a = _random_field(rng, 0.0, 1.0, 0.0, 1.0, 6, 5)
        a2 = _random_field(rng, 0.0, 1.0, 0.0, 1.0, 6, 5)
        b = _random_field(rng, 1.0, 2.0, 0.0, 1.0, 6, 5)
        b2 = _random_field(rng, 1.0, 2.0, 0.0, 1.0, 6, 5)
        lhs = beltrami.field_distance(
            beltrami.sew_sections(a, b, "x"), beltrami.sew_sections(a2, b2, "x")
        )
        rhs = max(beltrami.field_distance(a, a2), beltrami.field_distance(b, b2))
        worst = max(worst, abs(lhs - rhs))
    tol = 1e-12 * tol_scale
    return CriterionResult(
        index=5,
        name="sewing-isometry",
        passed=worst <= tol,
        measured=worst,
        tolerance=tol,
        detail="100 random field quadruples, seam concatenation",
    )


def criterion_6_module_numerics(tol_scale: float = 1.0) -> CriterionResult:
    positions = (1.5, 2.0, 3.0, 5.0, 10.0)
    worst_agm = max(
        abs(modulus.module_sc(x) - module_agm(x)) for x in positions
    )
    worst_rec = max(
        abs(modulus.module_sc(x) * modulus.module_sc(modulus.rotated_position(x)) - 1.0)
        for x in positions
    )
    rng = random.Random(6)
    worst_mob = 0.0
    for _ in range(25):
        quad = modulus.QuadrilateralSpec(*sorted(rng.uniform(-3, 3) for _ in range(4)))
        base = modulus.module_of_quad(quad)
        aa = rng.uniform(0.5, 2.0)
        bb = rng.uniform(-2.0, 2.0)
        moved = modulus.QuadrilateralSpec(*(aa * z + bb for z in quad.vertices))
        worst_mob = max(worst_mob, abs(modulus.module_of_quad(moved) - base))
        # Pole left of every marked point keeps the ordering intact.
        c = quad.z0 - rng.uniform(0.5, 2.0)
        inverted = modulus.QuadrilateralSpec(*(-1.0 / (z - c) for z in quad.vertices))
        worst_mob = max(worst_mob, abs(modulus.module_of_quad(inverted) - base))
    tol_agm = 1e-8 * tol_scale
    tol_rec = 1e-6 * tol_scale
    tol_mob = 1e-8 * tol_scale
    return CriterionResult(
        index=6,
        name="module-vs-agm",
        passed=worst_agm <= tol_agm and worst_rec <= tol_rec and worst_mob <= tol_mob,
        measured=worst_agm,
        tolerance=tol_agm,
        detail=(
            f"reciprocity dev {worst_rec:.2e} vs {tol_rec:.1e}; "
            f"invariance dev {worst_mob:.2e} vs {tol_mob:.1e}"
        ),
    )


def criterion_7_geometric_qc(
    tol_scale: float = 1.0, quad_corpus: Optional[Sequence] = None
) -> CriterionResult:
    if quad_corpus is None:
        quad_corpus = load_corpus().quads
    specs = [modulus.QuadrilateralSpec(*q) for q in quad_corpus]
    report = modulus.check_geometric_qc(
        2.0, specs, modulus.DEFAULT_RECT_ASPECTS, slack=1e-6 * tol_scale
    )
    passed = report.within_bounds and report.max_ratio >= 1.99
    return CriterionResult(
        index=7,
        name="stretch-module-ratios",
        passed=passed,
        measured=report.max_ratio,
        tolerance=1.99,
        detail=(
            f"{len(report.quad_ratios)} quads in [1/2,2]; "
            f"rectangle family sup {report.max_ratio:.6f} (measured >= tolerance)"
        ),
    )


def criterion_8_corner(tol_scale: float = 1.0) -> CriterionResult:
    phi = quasisym.half_angle_piecewise()
    k = quasisym.corner_dilatation(phi)
    lo, hi = phi.derivative_range()
    printed = max(0.5 * hi, 2.0 / lo)
    exact_ok = k == printed
    sigma = quasisym.corner_transform(phi)
    worst_fd = 0.0
    for j in range(256):
        theta = 2.0 * math.pi * (j + 0.5) / 256
        worst_fd = max(worst_fd, dilatation_fd(sigma, cmath.exp(1j * theta), 1e-6))
    rel = abs(worst_fd - k) / k
    tol = 0.05 * tol_scale
    return CriterionResult(
        index=8,
        name="corner-map-dilatation",
        passed=exact_ok and rel <= tol,
        measured=rel,
        tolerance=tol,
        detail=f"K={k} equals profile bound exactly: {exact_ok}; FD sup {worst_fd:.4f}",
    )


def criterion_9_quasisymmetry(tol_scale: float = 1.0) -> CriterionResult:
    k_id = quasisym.qs_bound(quasisym.sampled_identity(128))
    k_slope = quasisym.qs_bound(quasisym.sampled_slope_break(2.0, 128))
    t_max = 1.0
    k_exp = quasisym.qs_bound(quasisym.sampled_exp(t_max, 128))
    exact = max(abs(k_id - 1.0), abs(k_slope - 2.0))
    exp_ok = k_exp >= math.exp(t_max) * (1.0 - 1e-6 * tol_scale)
    return CriterionResult(
        index=9,
        name="quasisymmetry-bounds",
        passed=exact == 0.0 and exp_ok,
        measured=exact,
        tolerance=0.0,
        detail=f"identity=1 and slope-2=2 exact; exp window k={k_exp:.9f}",
    )


def criterion_10_chain_suite(tol_scale: float = 1.0) -> CriterionResult:
    failures = 0
    for i in range(7):
        for j in range(7 - i):
            if not chains.check_chain_map(i, j):
                failures += 1
            c = chains.shuffle_product(chains.generator("a", i), chains.generator("b", j))
            if len(c) != math.comb(i + j, i):
                failures += 1
    for i in range(5):
        for j in range(5):
            for k in range(5):
                if i + j + k > 6:
                    continue
                if not chains.check_associativity(i, j, k):
                    failures += 1
    for n in range(1, 5):
        if not chains.boundary(chains.boundary(chains.generator("a", n))).is_zero():
            failures += 1
    prod = chains.shuffle_product(chains.generator("a", 2), chains.generator("b", 2))
    if not chains.boundary(chains.boundary(prod)).is_zero():
        failures += 1
    return CriterionResult(
        index=10,
        name="chain-product-identities",
        passed=failures == 0,
        measured=float(failures),
        tolerance=0.0,
        detail="chain map, associativity, term counts, d^2=0; rational arithmetic",
    )


def criterion_11_order_recursion(tol_scale: float = 1.0) -> CriterionResult:
    expected = [
        flattening.OrderPair(flattening.INFINITE, 0),
        flattening.OrderPair(1, 2),
        flattening.OrderPair(3, 2),
        flattening.OrderPair(3, 4),
        flattening.OrderPair(5, 4),
        flattening.OrderPair(5, 6),
    ]
    seq_ok = flattening.order_sequence(5) == expected
    long_seq = flattening.order_sequence(45)
    growth_ok = any(p.min_order > 20 for p in long_seq)
    report = flattening.verify_orders(flattening.glue_sine(0.1), 1)
    worst = 0.0
    for fit in report.fits:
        if fit.fitted_m != flattening.INFINITE:
            worst = max(worst, abs(fit.fitted_m - fit.predicted.m))
        if fit.fitted_n != flattening.INFINITE:
            worst = max(worst, abs(fit.fitted_n - fit.predicted.n))
    tol = 0.25 * tol_scale
    return CriterionResult(
        index=11,
        name="flattening-order-recursion",
        passed=seq_ok and growth_ok and worst <= tol,
        measured=worst,
        tolerance=tol,
        detail=f"sequence exact: {seq_ok}; min order exceeds 20 within 45: {growth_ok}",
    )


def criterion_12_smooth_twist(tol_scale: float = 1.0) -> CriterionResult:
    worst = 0.0
    min_jac = math.inf
    for phi in (quasisym.half_angle_smooth(), quasisym.half_angle_piecewise()):
        _, rep = quasisym.smooth_twist(phi, 1.0, 2.0)
        worst = max(worst, rep.inner_max_dev, rep.outer_max_dev)
        min_jac = min(min_jac, rep.min_jacobian)
    _, rot = quasisym.smooth_twist(quasisym.circle_rotation(0.9), 1.0, 2.0)
    passed = worst == 0.0 and min_jac > 0.0 and rot.rigid_rotation
    return CriterionResult(
        index=12,
        name="smooth-twist-boundaries",
        passed=passed,
        measured=worst,
        tolerance=0.0,
        detail=f"min Jacobian {min_jac:.4f}; rotation extends rigidly: {rot.rigid_rotation}",
    )


CRITERIA: tuple[tuple[int, str, Callable[..., CriterionResult]], ...] = (
    (1, "composition-associativity", criterion_1_associativity),
    (2, "compose-vs-cell-complex", criterion_2_compose_oracle),
    (3, "dilatation-round-trip", criterion_3_dilatation),
    (4, "fiber-action-isometry", criterion_4_fiber_isometry),
    (5, "sewing-isometry", criterion_5_sewing_isometry),
    (6, "module-vs-agm", criterion_6_module_numerics),
    (7, "stretch-module-ratios", criterion_7_geometric_qc),
    (8, "corner-map-dilatation", criterion_8_corner),
    (9, "quasisymmetry-bounds", criterion_9_quasisymmetry),
    (10, "chain-product-identities", criterion_10_chain_suite),
    (11, "flattening-order-recursion", criterion_11_order_recursion),
    (12, "smooth-twist-boundaries", criterion_12_smooth_twist),
)


def run_acceptance(
    corpus_dir: Optional[str] = None,
    tol_scale: float = 1.0,
    indices: Optional[Sequence[int]] = None,
) -> list[CriterionResult]:
    """Run the corpus check and every requested criterion, in order."""
    c = load_corpus(corpus_dir)
    results = [corpus_integrity(c)]
    wanted = set(indices) if indices else None
    for idx, _name, fn in CRITERIA:
        if wanted is not None and idx not in wanted:
            continue
        if idx == 7:
            results.append(fn(tol_scale=tol_scale, quad_corpus=c.quads))
        else:
            results.append(fn(tol_scale=tol_scale))
    return results
