"""Independent reference computations used to freeze expected values.

Nothing here calls into the code under test beyond reading plain attributes
(labels, probabilities, bitmasks).
"""

import itertools
import math
from fractions import Fraction


def brute_probability(probs, members):
    total = 0.0
    for i, p in enumerate(probs):
        if (members >> i) & 1:
            total += p
    return total


def brute_conditional(probs, t_mask, s_mask):
    num = sum(p for i, p in enumerate(probs) if (t_mask >> i) & 1 and (s_mask >> i) & 1)
    den = sum(p for i, p in enumerate(probs) if (s_mask >> i) & 1)
    return num / den


def sigma_by_loops(probs, members):
    """ρ(ΣS) from the ket |S⟩ by an explicit double loop (nested lists)."""
    n = len(probs)
    p_s = sum(p for i, p in enumerate(probs) if (members >> i) & 1)
    ket = [math.sqrt(probs[i] / p_s) if (members >> i) & 1 else 0.0 for i in range(n)]
    return [[ket[i] * ket[k] for k in range(n)] for i in range(n)]


def pair_draw_distinct(probs, block_of):
    """Probability two independent draws land in different blocks.

    ``block_of[i]`` is the block index of outcome ``i`` (None: outside the carrier).
    Draws are conditioned on the carrier.
    """
    inside = [i for i, b in enumerate(block_of) if b is not None]
    total = sum(probs[i] for i in inside)
    acc = 0.0
    for i in inside:
        for k in inside:
            if block_of[i] != block_of[k]:
                acc += (probs[i] / total) * (probs[k] / total)
    return acc


def span_all_nonzero(vectors):
    """Independence over GF(2): every non-empty subset XORs to a nonzero vector."""
    for r in range(1, len(vectors) + 1):
        for combo in itertools.combinations(vectors, r):
            acc = 0
            for v in combo:
                acc ^= v
            if acc == 0:
                return False
    return True


def coords_by_search(vector, basis_vectors):
    """Coordinates of ``vector`` in a basis by trying every subset."""
    n = len(basis_vectors)
    for c in range(1 << n):
        acc = 0
        for i in range(n):
            if (c >> i) & 1:
                acc ^= basis_vectors[i]
        if acc == vector:
            return c
    raise ValueError("not in span")


def expand(coords, basis_vectors):
    acc = 0
    for i, v in enumerate(basis_vectors):
        if (coords >> i) & 1:
            acc ^= v
    return acc


def count_ordered_bases_brute(n):
    nonzero = range(1, 1 << n)
    return sum(1 for t in itertools.permutations(nonzero, n) if span_all_nonzero(t))


def gauss_formula_exact(n, ordered):
    total = Fraction(1)
    for k in range(n):
        total *= 2**n - 2**k
    if not ordered:
        total /= math.factorial(n)
    return int(total)
