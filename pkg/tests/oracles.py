"""Reference computations that share no code with the package."""

import math
import statistics
from fractions import Fraction


def discrepancy_by_norm_identity(shares):
    # |s - c|^2 = sum(s^2) - 1/N on the simplex
    n = len(shares)
    sq = sum(x * x for x in shares) - 1.0 / n
    return 1.0 - math.sqrt(max(sq, 0.0) / ((n - 1) / n))


def dispersion_by_population(up, same, down, size=1000):
    """Population std dev of +1/0/-1 answers from a concrete respondent list."""
    counts = [Fraction(x).limit_denominator(size) * size for x in (up, same, down)]
    assert all(c.denominator == 1 for c in counts)
    pop = [1] * int(counts[0]) + [0] * int(counts[1]) + [-1] * int(counts[2])
    return statistics.pstdev(pop)


def pearson(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    return sxy / math.sqrt(sxx * syy)


def uniform_simplex_sorted_gaps(rng, n, arity):
    """Uniform simplex points from gaps between sorted uniforms (independent of exponential normalization)."""
    out = []
    for _ in range(n):
        cuts = sorted(rng.random() for _ in range(arity - 1))
        edges = [0.0, *cuts, 1.0]
        out.append([b - a for a, b in zip(edges, edges[1:])])
    return out
