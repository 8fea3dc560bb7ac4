"""The shuffle product on formal chains, term by term.

Products of simplices are indexed by monotone lattice paths with signs.
All coefficients are exact rationals, so the boundary-of-product rule,
associativity, and graded symmetry hold on the nose, not approximately.
"""

from segal import (
    boundary,
    check_associativity,
    check_chain_map,
    check_symmetry,
    generator,
    shuffle_product,
    swap_factors,
)


def show(title, chain):
    print(title)
    for simplex, coef in chain.sorted_terms():
        pairs = getattr(simplex, "pairs", None)
        word = "".join(f"({a},{b})" for a, b in pairs) if pairs else simplex
        print(f"  {str(coef):>3s}  {word}")


def main():
    a, b = generator("a", 1), generator("b", 1)
    show("a1 * b1 (two paths around the unit square):", shuffle_product(a, b))
    print()

    a2 = generator("a", 2)
    show("a2 * b1 (three staircase paths):", shuffle_product(a2, b))
    print()

    prod = shuffle_product(a2, b)
    lhs = boundary(prod)
    rhs = shuffle_product(boundary(a2), b) + (-1) ** 2 * shuffle_product(a2, boundary(b))
    print(f"boundary follows the product rule: {lhs == rhs}")
    print(f"d^2 on the product vanishes: {boundary(boundary(prod)).is_zero()}")

    flipped = swap_factors(shuffle_product(a, b))
    print(f"degree (1,1) swap flips the sign: {flipped == -shuffle_product(b, a)}")
    print()

    checks = {
        "chain map, all i+j <= 5": all(
            check_chain_map(i, j) for i in range(6) for j in range(6 - i)
        ),
        "associativity, all i+j+k <= 5": all(
            check_associativity(i, j, k)
            for i in range(6)
            for j in range(6 - i)
            for k in range(6 - i - j)
        ),
        "graded symmetry, i, j < 4": all(
            check_symmetry(i, j) for i in range(4) for j in range(4)
        ),
    }
    for name, ok in checks.items():
        print(f"{name}: {ok}")


if __name__ == "__main__":
    main()
