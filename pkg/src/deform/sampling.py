"""Structured sample families for property checks and pipelines.

Sampling is deliberately structured rather than uniform: complexes are sums
of points and contractible two-term pieces conjugated by small integer
invertible matrices, rings come from a fixed menu of validated shapes, and
coefficients are small integers.  Failures are then reproducible and small.
All draws go through a caller-supplied `random.Random` so a seed fixes the
whole run.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .chain import CHAIN, Complex, GradedSpace
from .linalg import Matrix, Q1


def random_invertible(rng: Random, n: int, height: int = 2) -> Matrix:
    """Product of a permutation and two unitriangular integer matrices."""
    if n == 0:
        return Matrix.zero(0, 0)
    perm = list(range(n))
    rng.shuffle(perm)
    ent = {(perm[i], i): Q1 for i in range(n)}
    m = Matrix(n, n, ent)
    for _ in range(2):
        tri = {(i, i): Q1 for i in range(n)}
        upper = rng.random() < 0.5
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    c = rng.randint(-height, height)
                    if c:
                        if upper:
                            tri[(i, j)] = Fraction(c)
                        else:
                            tri[(j, i)] = Fraction(c)
        m = m * Matrix(n, n, tri)
    return m


def invert_unimodular(m: Matrix) -> Matrix:
    """Inverse of a small invertible matrix via solves on unit vectors."""
    n = m.nrows
    ent = {}
    for j in range(n):
        col = m.solve({j: Q1})
        for i, c in col.items():
            ent[(i, j)] = c
    return Matrix(n, n, ent)


def random_complex(rng: Random, max_dim: int = 4, lo: int = -2,
                   hi: int = 3, orientation: str = CHAIN) -> Complex:
    """Sum of points and contractible two-term pieces, conjugated degreewise
    by random invertible integer matrices (so d o d = 0 exactly by
    construction while matrices look generic)."""
    dims = {n: 0 for n in range(lo, hi + 1)}
    pieces = []  # (kind, degree)
    budget = rng.randint(1, max_dim)
    for _ in range(budget):
        n = rng.randint(lo, hi)
        if n > lo and rng.random() < 0.5:
            pieces.append(("cone", n))  # k at n mapping isomorphically to n-1
            dims[n] += 1
            dims[n - 1] += 1
        else:
            pieces.append(("point", n))
            dims[n] += 1
    # assemble block differentials
    offsets = {n: 0 for n in dims}
    place = {}
    for k, (kind, n) in enumerate(pieces):
        place[k] = (kind, n, offsets[n])
        offsets[n] += 1
        if kind == "cone":
            place[k] = (kind, n, place[k][2], offsets[n - 1])
            offsets[n - 1] += 1
    diff = {}
    for k, info in place.items():
        if info[0] == "cone":
            _, n, row_src, row_tgt = info
            d = diff.setdefault(n, {})
            d[(row_tgt, row_src)] = Q1
    dmats = {}
    for n, ent in diff.items():
        dmats[n] = Matrix(dims.get(n - 1, 0), dims.get(n, 0), ent)
    space = GradedSpace({n: d for n, d in dims.items() if d})
    c = Complex(space, dmats, orientation)
    # conjugate: d'_n = P_{n-1} d_n P_n^{-1}
    ps = {n: random_invertible(rng, c.dim(n)) for n in c.degrees()}
    pinv = {n: invert_unimodular(p) for n, p in ps.items()}
    newdiff = {}
    for n in c.degrees():
        if c.dim(n) and c.dim(n - 1):
            m = ps.get(n - 1, Matrix.zero(0, 0)) * c.d(n) * pinv[n]
            if not m.is_zero():
                newdiff[n] = m
    return Complex(c.space, newdiff, orientation)


def random_vector(rng: Random, dim: int, height: int = 2,
                  density: float = 0.7) -> dict:
    v = {}
    for i in range(dim):
        if rng.random() < density:
            c = rng.randint(-height, height)
            if c:
                v[i] = Fraction(c)
    return v


# -- rings -------------------------------------------------------------------

def ring_menu() -> list:
    """Named constructors for the structured ring family (nilpotency <= 4)."""
    from .rings import (acyclic_cone_ring, dual_numbers_odd, fat_point,
                        ring_tensor, square_zero, truncated_polynomial)
    return [
        lambda: truncated_polynomial(2),
        lambda: truncated_polynomial(3),
        lambda: truncated_polynomial(4),
        fat_point,
        lambda: dual_numbers_odd(1),
        lambda: square_zero([0, 1]),
        lambda: square_zero([1, 0], differential={0: {1: Fraction(1)}}),
        acyclic_cone_ring,
        lambda: ring_tensor(truncated_polynomial(2),
                            truncated_polynomial(2, var="s")),
        lambda: ring_tensor(truncated_polynomial(2), dual_numbers_odd(1)),
    ]


def random_ring(rng: Random, max_nilpotency: int = 4):
    menu = ring_menu()
    while True:
        r = rng.choice(menu)()
        if r.nilpotency <= max_nilpotency:
            return r


def random_square_zero_ring(rng: Random):
    from .rings import square_zero, truncated_polynomial
    choice = rng.randrange(3)
    if choice == 0:
        return truncated_polynomial(2)
    if choice == 1:
        return square_zero([0, rng.randint(0, 2)])
    return square_zero([1, 0], differential={0: {1: Fraction(1)}})


# -- DGLAs -------------------------------------------------------------------

def quadratic_cone_dgla():
    """x in degree 1, y in degree 2, d = 0, [x,x] = 2y: the minimal DGLA
    whose MC equation has a genuine quadratic obstruction."""
    from .dgla import TableDgla
    return TableDgla(("x", "y"), (1, 2), {}, {(0, 0): {1: Fraction(2)}})


def random_dgla(rng: Random, max_dim: int = 3):
    """Structured valid DGLAs: endomorphism DGLAs of small complexes,
    abelian DGLAs on cochain complexes, and the quadratic cone."""
    from .chain import u
    from .dgla import EndDgla, abelian_dgla
    kind = rng.randrange(4)
    if kind == 0:
        return quadratic_cone_dgla()
    if kind <= 2:
        return EndDgla(random_complex(rng, max_dim=max_dim, lo=-1, hi=1))
    return abelian_dgla(u(random_complex(rng, max_dim=max_dim + 1,
                                         lo=-2, hi=2)))


def random_degree_vector(rng: Random, t, degree: int, height: int = 2,
                         density: float = 0.6) -> dict:
    keys = t.basis_of_degree(degree)
    out = {}
    for k in keys:
        if rng.random() < density:
            c = rng.randint(-height, height)
            if c:
                out[k] = Fraction(c)
    return out


def random_gauge(rng: Random, t, height: int = 2) -> dict:
    return random_degree_vector(rng, t, 0, height)


def random_mc(rng: Random, t, height: int = 1) -> dict:
    """MC element as a gauge transform of the trivial one (always exact)."""
    from .dgla import gauge_act
    alpha = random_gauge(rng, t, height)
    return gauge_act(t, alpha, {})
