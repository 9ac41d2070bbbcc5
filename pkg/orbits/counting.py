from fractions import Fraction

from gf2 import gl_order


def orbit_count_lower_bound(l: int, m: int, square: bool, use_duality: bool = False) -> Fraction:
    """Sum over d of 2^(lm*d) / (|GL_l| |GL_m| |GL_d| |T|), |T| = 2 for square formats.

    Layers d and lm-d hold the same number of orbits, so with `use_duality`
    each term becomes the larger of the two.
    """
    width = l * m
    group = gl_order(l) * gl_order(m) * (2 if square else 1)
    terms = [Fraction(2 ** (width * d), group * gl_order(d)) for d in range(width + 1)]
    if use_duality:
        terms = [max(terms[d], terms[width - d]) for d in range(width + 1)]
    return sum(terms, Fraction(0))


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F2^n."""
    if not 0 <= k <= n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def layer_count_lower_bound(l: int, m: int, square: bool, d: int) -> int:
    """Fewest orbits layer d can hold: no orbit is larger than the group."""
    group = gl_order(l) * gl_order(m) * (2 if square else 1)
    return -(-gaussian_binomial(l * m, d) // group)
