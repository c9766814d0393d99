"""Shared oracles and generators for the test suite.

The oracles here are deliberately independent of the library internals:
Bell numbers come from the Bell triangle, partition counts from the
pentagonal-number recurrence, falling factorials from direct expansion.
"""

from fractions import Fraction
from random import Random

import pytest

from partcat.coeff import POLY_T, RingElement
from partcat.pcat import PartitionDiagram


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def partition_count(n: int) -> int:
    """p(n) by the pentagonal number recurrence."""
    table = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= m:
                total += sign * table[m - g1]
            if g2 <= m:
                total += sign * table[m - g2]
            k += 1
        table[m] = total
    return table[n]


def falling_factorial_poly(n: int) -> RingElement:
    """t (t-1) ... (t-n+1) by direct coefficient expansion."""
    coeffs = [Fraction(1)]
    for k in range(n):
        shifted = [Fraction(0)] + coeffs  # multiply by t
        for i, c in enumerate(coeffs):
            shifted[i] -= k * c  # subtract k * old
        coeffs = shifted
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return RingElement(POLY_T, tuple(coeffs))


def random_set_partition(rng: Random, points: int):
    """Uniform-ish random partition of range(points) via random labels."""
    labels = [rng.randrange(points) for _ in range(points)]
    blocks = {}
    for p, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(p)
    return tuple(tuple(b) for b in blocks.values())


def random_diagram(rng: Random, a: int, b: int) -> PartitionDiagram:
    return PartitionDiagram(a, b, random_set_partition(rng, a + b))


@pytest.fixture
def rng() -> Random:
    return Random(20260808)
