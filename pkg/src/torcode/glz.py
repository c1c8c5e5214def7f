"""GL(2,Z) layer: hyperbolicity, conjugacy with witnesses, primitivity,
companion matrices, orbit spans, and kernel groups on the torus."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .binforms import associated_form, base_solutions_pm, improperly_equivalent_to_negative, integral_minimum, properly_equivalent, represent
from .intmat import Mat2, lattice_span_index, smith_normal_form
from .qfield import (
    QuadExt,
    SearchBoundExceeded,
    dominant_eigenvalue,
    field_fundamental_unit,
    hyperbolic_params_ok,
)

UniMat = Mat2


def require_unimodular(m: Mat2) -> None:
    if not m.is_unimodular():
        raise ValueError(f"matrix {m} has determinant {m.det}, expected +-1")


def is_hyperbolic(m: Mat2) -> bool:
    require_unimodular(m)
    return hyperbolic_params_ok(m.trace, m.det)


def require_hyperbolic(m: Mat2) -> tuple[int, int, int]:
    """Return (r, sigma, D) or raise for a non-hyperbolic matrix."""
    if not is_hyperbolic(m):
        raise ValueError(f"matrix {m} is not hyperbolic")
    r, sigma = m.trace, m.det
    return r, sigma, r * r - 4 * sigma


def normalize_trace(m: Mat2) -> tuple[Mat2, bool]:
    """Flip the sign of a negative-trace hyperbolic matrix; report the flip."""
    require_hyperbolic(m)
    if m.trace < 0:
        return -m, True
    return m, False


def companion(r: int, sigma: int) -> Mat2:
    """The companion matrix [[r, 1], [-sigma, 0]] of x^2 - r*x + sigma."""
    if not hyperbolic_params_ok(r, sigma):
        raise ValueError(f"(r={r}, sigma={sigma}) is not hyperbolic")
    return Mat2(r, 1, -sigma, 0)


def conjugator_to_companion(m: Mat2) -> Optional[Mat2]:
    """B with B*M*B^{-1} = companion, from a unit value of the associated form.

    Returns None exactly when the associated form represents neither +1
    nor -1.  The witness row (x, y) is the canonical base solution and
    (z, t) = -det(M) * (x, y) * M^{-1}.
    """
    r, sigma, _ = require_hyperbolic(m)
    if r < 0:
        raise ValueError("normalize the trace first")
    if m == companion(r, sigma):
        return Mat2.identity()
    f = associated_form(m)
    for target in (1, -1):
        sols = represent(f, target)
        if not sols:
            continue
        x, y = sols[0]
        z, t = m.inverse_unimodular().row_apply(x, y)
        z, t = -sigma * z, -sigma * t
        b = Mat2(x, y, z, t)
        assert b.det == target
        c = companion(r, sigma)
        assert b * m == c * b
        return b
    return None


def is_conjugate(m1: Mat2, m2: Mat2) -> Optional[Mat2]:
    """A unimodular B with B*M1*B^{-1} = M2, or None.

    Decided through the associated forms: proper equivalence, or equivalence
    with -f2 through a determinant -1 change of variables.
    """
    require_hyperbolic(m1)
    require_hyperbolic(m2)
    if m1.trace != m2.trace or m1.det != m2.det:
        return None
    f1, f2 = associated_form(m1), associated_form(m2)
    t = properly_equivalent(f1, f2)
    if t is not None:
        b = t.transpose()
        if b * m1 == m2 * b:
            return b
        raise RuntimeError(f"proper equivalence witness failed to conjugate {m1} to {m2}")
    w = improperly_equivalent_to_negative(f1, f2)
    if w is not None:
        b = w.transpose()
        if b * m1 == m2 * b:
            return b
        raise RuntimeError(f"improper equivalence witness failed to conjugate {m1} to {m2}")
    return None


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def is_primitive(m: Mat2, max_exponent: int = 200) -> tuple[bool, Optional[tuple[Mat2, int]]]:
    """Whether no K in GL(2,Z) satisfies K^n = M with n >= 2.

    When non-primitive, returns a root K and the largest exponent n with
    K^n = M.  The candidate roots K = alpha*I + beta*M are built from unit
    roots of the dominant eigenvalue in the maximal order.
    """
    r, sigma, D = require_hyperbolic(m)
    if r < 0:
        raise ValueError("normalize the trace first")
    lam = dominant_eigenvalue(r, sigma)
    eps = field_fundamental_unit(D)
    power = eps
    k = None
    for j in range(1, max_exponent + 1):
        if power == lam:
            k = j
            break
        if power > lam:
            break
        power = power * eps
    if k is None:
        raise SearchBoundExceeded(f"eigenvalue of {m} is not a fundamental-unit power up to {max_exponent}")
    sq_d = QuadExt.sqrt_d(D)
    for n in sorted((d for d in _divisors(k) if d >= 2), reverse=True):
        for sign in (1, -1):
            if sign == -1 and n % 2 == 1:
                continue
            mu = (eps ** (k // n)) * sign
            beta = ((mu - mu.conj()) / sq_d).as_fraction()
            alpha = (mu - beta * lam).as_fraction()
            entries = [alpha + beta * m.a, beta * m.b, beta * m.c, alpha + beta * m.d]
            if any(e.denominator != 1 for e in entries):
                continue
            root = Mat2(*(int(e) for e in entries))
            assert root.is_unimodular() and root ** n == m
            return (False, (root, n))
    return (True, None)


def orbit_span_full(m: Mat2, x: int, y: int) -> bool:
    """Whether the lattice spanned by the M-orbit of (x, y) is all of Z^2."""
    require_hyperbolic(m)
    if (x, y) == (0, 0):
        raise ValueError("(x, y) must be nonzero")
    f = associated_form(m)
    return abs(f(y, -x)) == 1


def orbit_span_full_lattice(m: Mat2, x: int, y: int, n_range: int = 3) -> bool:
    """Oracle: explicitly span {M^n (x,y) : |n| <= n_range} and test the index."""
    require_hyperbolic(m)
    if (x, y) == (0, 0):
        raise ValueError("(x, y) must be nonzero")
    vecs = [(m ** n).apply(x, y) for n in range(-n_range, n_range + 1)]
    return lattice_span_index(vecs) == 1


@dataclass(frozen=True)
class OrbitCoverBound:
    """Lower bound on the number of orbit spans needed to cover Z^2."""

    bound: int
    note: Optional[str]


def min_orbit_cover_bound(m: Mat2) -> OrbitCoverBound:
    """integral minimum of the associated form, with a sharper single-orbit note."""
    require_hyperbolic(m)
    mm, _ = normalize_trace(m)
    f = associated_form(mm)
    bound = integral_minimum(f)
    note = None
    if bound >= 2:
        primitive, root = is_primitive(mm)
        step = mm if primitive else root[0]
        orbits = base_solutions_pm(f, bound, step=step)
        if len(orbits) == 1:
            note = (
                f"all minimal solutions lie in a single orbit; at least {bound + 1} "
                "orbit spans are required to cover the lattice"
            )
    return OrbitCoverBound(bound=bound, note=note)


@dataclass(frozen=True)
class KernelGroup:
    """Finite kernel of a torus endomorphism given by an integer matrix."""

    order: int
    generators: tuple[tuple[Fraction, Fraction], ...]
    elements: Optional[tuple[tuple[Fraction, Fraction], ...]]

    def element_set(self) -> frozenset[tuple[Fraction, Fraction]]:
        if self.elements is None:
            raise ValueError("kernel too large to enumerate")
        return frozenset(self.elements)

    def as_strings(self) -> list[str]:
        if self.elements is None:
            raise ValueError("kernel too large to enumerate")
        return [f"{e[0]},{e[1]}" for e in self.elements]


_ENUMERATION_LIMIT = 10**4


def kernel_group(b: Mat2) -> KernelGroup:
    """Kernel of the induced torus endomorphism, as B^{-1}Z^2 / Z^2."""
    det = b.det
    if det == 0:
        raise ValueError(f"matrix {b} is singular")
    s, _, v = smith_normal_form(b)
    s1, s2 = s.a, s.d
    order = s1 * s2
    assert order == abs(det)
    gens = []
    for col, si in (((v.a, v.c), s1), ((v.b, v.d), s2)):
        if si > 1:
            gens.append((Fraction(col[0], si) % 1, Fraction(col[1], si) % 1))
    elements = None
    if order <= _ENUMERATION_LIMIT:
        elems = set()
        for i in range(s1):
            for j in range(s2):
                x = Fraction(v.a * i, s1) + Fraction(v.b * j, s2)
                y = Fraction(v.c * i, s1) + Fraction(v.d * j, s2)
                elems.add((x % 1, y % 1))
        assert len(elems) == order
        for x, y in elems:
            bx, by = b.apply(x, y)
            assert bx.denominator == 1 and by.denominator == 1
        elements = tuple(sorted(elems))
    return KernelGroup(order=order, generators=tuple(gens), elements=elements)


def kernel_isomorphic_under_matrix(m: Mat2, k1: KernelGroup, k2: KernelGroup, bound: int = 12) -> bool:
    """Whether some +-M^n maps the first kernel onto the second, elementwise mod Z^2."""
    require_unimodular(m)
    if k1.order != k2.order:
        return False
    e1, e2 = k1.element_set(), k2.element_set()
    for n in range(-bound, bound + 1):
        a = m ** n
        image = {(Fraction(a.a * x + a.b * y) % 1, Fraction(a.c * x + a.d * y) % 1) for x, y in e1}
        if image == e2:
            return True
        if {((-x) % 1, (-y) % 1) for x, y in image} == e2:
            return True
    return False
