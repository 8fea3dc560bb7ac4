"""Conformal modules under a horizontal stretch.

The module of a quadrilateral is a conformal invariant.  A K-fold
horizontal stretch can change it by at most a factor of K in either
direction; this script shows where each extreme lives.  Half-plane
quadrilaterals with real vertices do not move at all, while flat
rectangles absorb the full factor.
"""

from segal import (
    QuadrilateralSpec,
    check_geometric_qc,
    module_of_quad,
    module_rect,
    module_sc,
    rotated_position,
)
from segal.corpus import generate_quads

K = 2.0


def main():
    # positions, modules, and the exact reciprocity under remarking
    print("x       module M(x)   M(x) * M(-x)")
    for x in (1.5, 2.0, 5.0, 10.0):
        m = module_sc(x)
        product = m * module_sc(rotated_position(x))
        print(f"{x:<7.1f} {m:<13.9f} {product:.12f}")
    print()

    quads = [QuadrilateralSpec(*q) for q in generate_quads(seed=5, count=6)]
    print("half-plane quads: stretch ratio stays at 1")
    for q in quads[:3]:
        ratio = module_of_quad(q.scaled(K)) / module_of_quad(q)
        print(f"  {tuple(round(v, 3) for v in q.vertices)}: ratio {ratio:.9f}")
    print()

    print("rectangles realize the bound: aspect a gives ratio K as a -> 0 or inf")
    for a in (0.1, 1.0, 10.0):
        ratio = module_rect(K * a, 1.0) / module_rect(a, 1.0)
        print(f"  aspect {a:<5}: ratio {ratio:.6f}")
    print()

    report = check_geometric_qc(K, quads)
    print(f"all ratios within [1/{K}, {K}]: {report.within_bounds}")
    print(f"largest ratio seen: {report.max_ratio:.6f}")


if __name__ == "__main__":
    main()
