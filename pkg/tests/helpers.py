"""Shared test utilities: random unimodular matrices and independent oracles."""
from __future__ import annotations

import decimal
import random

from torcode.intmat import Mat2
from torcode.glz import companion

HYPERBOLIC_PANEL = [(1, -1), (2, -1), (3, -1), (3, 1), (4, 1), (5, -1), (5, 1), (6, -1)]


def random_unimodular(rng: random.Random, steps: int = 4, height: int | None = None) -> Mat2:
    """Random product of elementary matrices (optionally capped entry height)."""
    while True:
        m = Mat2.identity()
        for _ in range(rng.randrange(1, steps + 1)):
            kind = rng.randrange(4)
            k = rng.randrange(-3, 4)
            if kind == 0:
                m = m * Mat2(1, k, 0, 1)
            elif kind == 1:
                m = m * Mat2(1, 0, k, 1)
            elif kind == 2:
                m = m * Mat2(0, 1, 1, 0)
            else:
                m = m * Mat2(1, 0, 0, -1)
        if height is None or max(abs(v) for v in (m.a, m.b, m.c, m.d)) <= height:
            return m


def random_hyperbolic(rng: random.Random, panel=None) -> Mat2:
    """Random positive-trace hyperbolic matrix: a conjugated companion matrix."""
    r, sigma = rng.choice(panel or HYPERBOLIC_PANEL)
    b = random_unimodular(rng)
    m = b * companion(r, sigma) * b.inverse_unimodular()
    return m if m.trace > 0 else -m


def decimal_value(x, prec: int = 60) -> decimal.Decimal:
    """High-precision decimal image of a QuadExt, an independent comparison route."""
    with decimal.localcontext() as ctx:
        ctx.prec = prec
        root = decimal.Decimal(x.D).sqrt()
        return (decimal.Decimal(x.p) + decimal.Decimal(x.q) * root) / decimal.Decimal(x.s)


def brute_pell_minimal(D: int, bound: int = 10**5):
    """Independent minimal Pell solution search for x^2 - D y^2 = +-4."""
    from math import isqrt

    for y in range(1, bound):
        for rhs in (D * y * y - 4, D * y * y + 4):
            if rhs >= 0:
                x = isqrt(rhs)
                if x * x == rhs:
                    return x, y
    raise AssertionError(f"no Pell solution for {D}")
