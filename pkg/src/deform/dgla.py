"""Dg Lie algebras and the Maurer-Cartan/gauge calculus over Artinian rings.

DGLAs are cochain objects: |x| below always means cochain degree, and a
coefficient ring element of chain degree j contributes cochain degree -j.
Conventions (matching chain.py):

    [x,y] = -(-1)^{|x||y|} [y,x]
    [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]
    [x(x)a, y(x)b] = (-1)^{|a||y|} [x,y] (x) ab
    d(x(x)a) = dx(x)a + (-1)^{|x|} x(x)da

The Maurer-Cartan equation is d(w) + (1/2)[w,w] = 0 in cochain degree 1; the
gauge action of a degree-0 element a is the operator series

    exp(ad_a)(w) - sum_{n>=0} ad_a^n (da) / (n+1)!

which is finite because all coefficients sit in a nilpotent ideal.  BCH
products are evaluated by computing log(exp X exp Y) in the length-truncated
free associative algebra and applying the Dynkin bracketing word by word, so
no hand-coded coefficient table is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .chain import COCHAIN, Complex, GradedSpace
from .errors import (DegreeMismatch, NotClosed, NotMaurerCartan,
                     RingNotSquareZero, ShapeError, TruncationTooSmall)
from .linalg import Matrix, Q0, Q1, HALF, Subquotient, span_matrix
from .poly import Poly
from .rings import ArtinianCdga, SmallExtension

# -- scalar-generic sparse vectors (Fraction or Poly entries) -----------------

def gvec_add(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def gvec_scale(u: dict, c) -> dict:
    if not c:
        return {}
    return {k: a * c for k, a in u.items() if a * c}


def gvec_sub(u: dict, v: dict) -> dict:
    return gvec_add(u, gvec_scale(v, -1))


def gvec_is_zero(u: dict) -> bool:
    return all(not c for c in u.values())


# -- DGLA interface -------------------------------------------------------------

class DglaBase:
    """Shared derived operations; subclasses provide `basis()`, `degree(key)`,
    `d_key(key)` and `bracket_keys(k1, k2)` returning sparse vectors."""

    def basis_of_degree(self, i: int) -> list:
        return [k for k in self.basis() if self.degree(k) == i]

    def d_vec(self, v: dict) -> dict:
        out = {}
        for k, c in v.items():
            if not c:
                continue
            for k2, w in self.d_key(k).items():
                s = out.get(k2, 0) + c * w
                if s:
                    out[k2] = s
                else:
                    out.pop(k2, None)
        return out

    def bracket_vec(self, u: dict, v: dict) -> dict:
        out = {}
        for k1, c1 in u.items():
            if not c1:
                continue
            for k2, c2 in v.items():
                if not c2:
                    continue
                cell = self.bracket_keys(k1, k2)
                if not cell:
                    continue
                c = c1 * c2
                for k3, w in cell.items():
                    s = out.get(k3, 0) + c * w
                    if s:
                        out[k3] = s
                    else:
                        out.pop(k3, None)
        return out

    def degree_of_vec(self, v: dict) -> int | None:
        degs = {self.degree(k) for k, c in v.items() if c}
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeMismatch(f"inhomogeneous element, degrees {degs}")
        return degs.pop()

    def complex(self) -> Complex:
        """Underlying cochain complex, with key<->position lookups attached."""
        cached = getattr(self, "_complex_cache", None)
        if cached is not None:
            return cached
        keys = list(self.basis())
        by_deg: dict = {}
        for k in keys:
            by_deg.setdefault(self.degree(k), []).append(k)
        dims = {-i: len(ks) for i, ks in by_deg.items()}
        labels = {-i: tuple(f"b{i}_{p}" for p in range(len(ks)))
                  for i, ks in by_deg.items()}
        pos = {}
        for i, ks in by_deg.items():
            for p, k in enumerate(ks):
                pos[k] = (i, p)
        diff = {}
        for i, ks in by_deg.items():
            tgt = by_deg.get(i + 1, [])
            if not tgt:
                continue
            tpos = {k: p for p, k in enumerate(tgt)}
            ent = {}
            for col, k in enumerate(ks):
                for k2, c in self.d_key(k).items():
                    row = tpos.get(k2)
                    if row is None:
                        raise ShapeError("differential leaves the expected degree")
                    ent[(row, col)] = c
            if ent:
                # stored chain degree -i maps to -i-1
                diff[-i] = Matrix(len(tgt), len(ks), ent)
        cx = Complex(GradedSpace(dims, labels), diff, COCHAIN)
        self._complex_cache = cx
        self._key_pos = pos
        self._pos_key = {(i, p): k for k, (i, p) in pos.items()}
        return cx

    def key_position(self, key) -> tuple:
        """(cochain degree, index) of a basis key in `complex()`."""
        self.complex()
        return self._key_pos[key]

    def vec_to_component(self, v: dict, i: int) -> dict:
        """Sparse vector over the degree-i component positions."""
        self.complex()
        out = {}
        for k, c in v.items():
            if not c:
                continue
            deg, p = self._key_pos[k]
            if deg != i:
                raise DegreeMismatch(f"coordinate of degree {deg}, expected {i}")
            out[p] = c
        return out

    def component_to_vec(self, w: dict, i: int) -> dict:
        self.complex()
        return {self._pos_key[(i, p)]: c for p, c in w.items() if c}

    # -- validation helpers -----------------------------------------------------

    def check_antisymmetry(self, keys=None):
        keys = list(self.basis()) if keys is None else keys
        for k1 in keys:
            for k2 in keys:
                sign = -1 if (self.degree(k1) * self.degree(k2)) % 2 else 1
                lhs = self.bracket_keys(k1, k2)
                rhs = gvec_scale(self.bracket_keys(k2, k1), -sign)
                if not gvec_is_zero(gvec_sub(lhs, rhs)):
                    raise ShapeError(f"antisymmetry fails on ({k1}, {k2})")

    def check_jacobi(self, triples):
        for k1, k2, k3 in triples:
            x = {k1: Q1}
            lhs = self.bracket_vec(x, self.bracket_keys(k2, k3))
            rhs = self.bracket_vec(self.bracket_keys(k1, k2), {k3: Q1})
            sign = -1 if (self.degree(k1) * self.degree(k2)) % 2 else 1
            rhs = gvec_add(rhs, gvec_scale(
                self.bracket_vec({k2: Q1}, self.bracket_keys(k1, k3)), sign))
            if not gvec_is_zero(gvec_sub(lhs, rhs)):
                raise ShapeError(f"Jacobi fails on ({k1}, {k2}, {k3})")

    def check_derivation(self, keys=None):
        keys = list(self.basis()) if keys is None else keys
        for k1 in keys:
            for k2 in keys:
                lhs = self.d_vec(self.bracket_keys(k1, k2))
                rhs = self.bracket_vec(self.d_key(k1), {k2: Q1})
                sign = -1 if self.degree(k1) % 2 else 1
                rhs = gvec_add(rhs, gvec_scale(
                    self.bracket_vec({k1: Q1}, self.d_key(k2)), sign))
                if not gvec_is_zero(gvec_sub(lhs, rhs)):
                    raise ShapeError(f"derivation fails on ({k1}, {k2})")

    def check_d_squared(self, keys=None):
        keys = list(self.basis()) if keys is None else keys
        for k in keys:
            if not gvec_is_zero(self.d_vec(self.d_key(k))):
                raise ShapeError(f"d^2 != 0 on {k}")


class TableDgla(DglaBase):
    """DGLA given by explicit structure constants on a flat basis."""

    def __init__(self, names, degrees, d_table: dict, bracket_table: dict,
                 check: bool = True):
        self.names = tuple(names)
        self.degrees_list = tuple(int(d) for d in degrees)
        self.dim = len(self.names)
        self.d_table = {}
        for k, v in d_table.items():
            vv = {k2: Fraction(c) for k2, c in v.items() if c}
            if vv:
                self.d_table[k] = vv
        self.bracket_table = {}
        for pair, v in bracket_table.items():
            vv = {k2: Fraction(c) for k2, c in v.items() if c}
            if vv:
                self.bracket_table[pair] = vv
        if check:
            self.validate()

    def basis(self):
        return range(self.dim)

    def degree(self, key):
        return self.degrees_list[key]

    def d_key(self, key):
        return self.d_table.get(key, {})

    def bracket_keys(self, k1, k2):
        return self.bracket_table.get((k1, k2), {})

    def validate(self):
        for k, v in self.d_table.items():
            for k2 in v:
                if self.degrees_list[k2] != self.degrees_list[k] + 1:
                    raise ShapeError(f"d({self.names[k]}) has wrong degree")
        for (k1, k2), v in self.bracket_table.items():
            for k3 in v:
                if self.degrees_list[k3] != \
                        self.degrees_list[k1] + self.degrees_list[k2]:
                    raise ShapeError(
                        f"[{self.names[k1]},{self.names[k2]}] has wrong degree")
        self.check_d_squared()
        self.check_antisymmetry()
        self.check_derivation()
        keys = list(self.basis())
        self.check_jacobi((a, b, c) for a in keys for b in keys for c in keys)
        return self


def abelian_dgla(c: Complex) -> TableDgla:
    """Zero bracket on a cochain complex."""
    if c.orientation != COCHAIN:
        raise ShapeError("abelian_dgla expects a cochain-flagged complex")
    names = []
    degrees = []
    index = {}
    for n in c.degrees():          # stored degree n = cochain -n
        for p in range(c.dim(n)):
            index[(n, p)] = len(names)
            names.append(f"a{-n}_{p}")
            degrees.append(-n)
    d_table = {}
    for n in c.degrees():
        dm = c.d(n)  # stored n -> n-1 is cochain -n -> -n+1
        for (r, col), coeff in dm.entries.items():
            d_table.setdefault(index[(n, col)], {})[index[(n - 1, r)]] = coeff
    return TableDgla(names, degrees, d_table, {})


class EndDgla(TableDgla):
    """Endomorphism DGLA of a chain complex: Hom(V,V) with the commutator
    bracket [f,g] = f o g - (-1)^{|f||g|} g o f."""

    def __init__(self, v: Complex):
        from .chain import hom_complex, hom_to_map, map_to_hom
        self.source = v
        h = hom_complex(v, v)
        self.hom = h
        names = []
        degrees = []
        index = {}
        for i in h.degrees_co():
            for p in range(h.dim_co(i)):
                index[(i, p)] = len(names)
                names.append(f"E{i}_{p}")
                degrees.append(i)
        # differential from the Hom complex matrices
        d_table = {}
        for i in h.degrees_co():
            dm = h.d_co(i)
            for (r, col), coeff in dm.entries.items():
                d_table.setdefault(index[(i, col)], {})[index[(i + 1, r)]] = coeff
        # bracket via composition of matrix units
        bracket = {}
        maps = {}
        for i in h.degrees_co():
            for p in range(h.dim_co(i)):
                maps[(i, p)] = hom_to_map(h, i, {p: Q1}, v, v)
        for (i1, p1), f in maps.items():
            for (i2, p2), g in maps.items():
                fg = f.compose(g)
                gf = g.compose(f)
                sign = -1 if (i1 * i2) % 2 else 1
                comb = fg.sub(gf.scale(sign))
                if comb.is_zero():
                    continue
                _, vecd = map_to_hom(h, comb)
                key = (index[(i1, p1)], index[(i2, p2)])
                bracket[key] = {index[(i1 + i2, q)]: c
                                for q, c in vecd.items()}
        self._index = index
        super().__init__(names, degrees, d_table, bracket, check=False)
        # structural validity: spot-check instead of the O(dim^3) full sweep
        self.check_d_squared()

    def element_to_map(self, vec: dict):
        """Degree-homogeneous element -> ChainMap on the source complex."""
        from .chain import hom_to_map
        i = self.degree_of_vec(vec)
        if i is None:
            return None
        comp = {}
        for k, c in vec.items():
            deg, p = self.key_position(k)
            comp[p] = c
        return hom_to_map(self.hom, i, comp, self.source, self.source)

    def map_to_element(self, f) -> dict:
        from .chain import map_to_hom
        i, comp = map_to_hom(self.hom, f)
        return self.component_to_vec(comp, i)


# -- coefficient algebras ----------------------------------------------------------

class IdealCoefficients:
    """The maximal ideal of an Artinian cdga, in a basis adapted to the
    m-adic filtration.  Keys are indices; `level(key)` is the largest n with
    the basis vector in m^n."""

    def __init__(self, ring: ArtinianCdga):
        self.ring = ring
        adapted = ring.adapted_ideal_basis()
        self.vectors = [v for v, _ in adapted]
        self.levels = [lvl for _, lvl in adapted]
        self.nilpotency = ring.nilpotency
        self._span = span_matrix(self.vectors, ring.dim)
        self._prod_cache = {}
        self._d_cache = {}

    def keys(self):
        return range(len(self.vectors))

    def chain_degree(self, key) -> int:
        return self.ring.degree_of(self.vectors[key])

    def level(self, key) -> int:
        return self.levels[key]

    def to_adapted(self, ring_vec: dict) -> dict:
        """Express a ring vector lying in m in adapted coordinates."""
        if not ring_vec:
            return {}
        sol = self._span.solve(ring_vec)
        if sol is None:
            raise ShapeError("vector is not in the maximal ideal")
        return sol

    def from_adapted(self, v: dict) -> dict:
        out = {}
        for k, c in v.items():
            for i, w in self.vectors[k].items():
                s = out.get(i, Q0) + c * w
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def product(self, k1, k2) -> dict:
        key = (k1, k2)
        if key not in self._prod_cache:
            p = self.ring.product(self.vectors[k1], self.vectors[k2])
            self._prod_cache[key] = self.to_adapted(p) if p else {}
        return self._prod_cache[key]

    def d(self, key) -> dict:
        if key not in self._d_cache:
            dv = self.ring.differential(self.vectors[key])
            self._d_cache[key] = self.to_adapted(dv) if dv else {}
        return self._d_cache[key]


class KernelCoefficients:
    """The kernel I of a small extension as a coefficient module: products
    vanish identically (I*I <= I*m = 0), the differential is inherited."""

    def __init__(self, ext: SmallExtension):
        self.ext = ext
        self.ring = ext.total
        self.vectors = list(ext.kernel_basis)
        self.nilpotency = 2
        self._span = span_matrix(self.vectors, self.ring.dim)

    def keys(self):
        return range(len(self.vectors))

    def chain_degree(self, key) -> int:
        return self.ring.degree_of(self.vectors[key])

    def level(self, key) -> int:
        return 1

    def to_adapted(self, ring_vec: dict) -> dict:
        sol = self._span.solve(ring_vec)
        if sol is None:
            raise ShapeError("vector is not in the kernel ideal")
        return sol

    def product(self, k1, k2) -> dict:
        return {}

    def d(self, key) -> dict:
        dv = self.ring.differential(self.vectors[key])
        return self.to_adapted(dv) if dv else {}


class PolyFormsLine:
    """Polynomial de Rham forms on the line, truncated in t-degree.

    Basis: ("t", e) of chain degree 0 and ("tdt", e) of chain degree -1 for
    0 <= e <= bound; products that would exceed the bound raise
    TruncationTooSmall rather than silently truncating.  d(t^e) = e t^{e-1} dt.
    """

    def __init__(self, bound: int):
        if bound < 0:
            raise ShapeError("negative truncation bound")
        self.bound = bound
        self.nilpotency = None  # not nilpotent; never used alone as m

    def keys(self):
        return [("t", e) for e in range(self.bound + 1)] + \
            [("tdt", e) for e in range(self.bound + 1)]

    def chain_degree(self, key) -> int:
        return 0 if key[0] == "t" else -1

    def level(self, key) -> int:
        return 0

    def product(self, k1, k2) -> dict:
        (f1, e1), (f2, e2) = k1, k2
        if f1 == "tdt" and f2 == "tdt":
            return {}
        e = e1 + e2
        if e > self.bound:
            raise TruncationTooSmall(
                f"t-degree {e} exceeds the declared bound {self.bound}")
        kind = "tdt" if "tdt" in (f1, f2) else "t"
        return {(kind, e): Q1}

    def d(self, key) -> dict:
        kind, e = key
        if kind == "t" and e >= 1:
            return {("tdt", e - 1): Fraction(e)}
        return {}


class TensorCoefficients:
    """Tensor product of two coefficient algebras, with Koszul signs on
    products: (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'.

    The left factor's product is consulted first, so zero products (for
    instance by nilpotency) short-circuit before the right factor can raise a
    truncation error."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.nilpotency = left.nilpotency

    def keys(self):
        return [(a, b) for a in self.left.keys() for b in self.right.keys()]

    def chain_degree(self, key) -> int:
        return self.left.chain_degree(key[0]) + \
            self.right.chain_degree(key[1])

    def level(self, key) -> int:
        return self.left.level(key[0]) + self.right.level(key[1])

    def product(self, k1, k2) -> dict:
        (a1, b1), (a2, b2) = k1, k2
        pa = self.left.product(a1, a2)
        if not pa:
            return {}
        sign = -1 if (self.right.chain_degree(b1) *
                      self.left.chain_degree(a2)) % 2 else 1
        pb = self.right.product(b1, b2)
        if not pb:
            return {}
        out = {}
        for ka, ca in pa.items():
            for kb, cb in pb.items():
                out[(ka, kb)] = sign * ca * cb
        return out

    def d(self, key) -> dict:
        a, b = key
        out = {}
        for ka, c in self.left.d(a).items():
            out[(ka, b)] = c
        sign = -1 if self.left.chain_degree(a) % 2 else 1
        for kb, c in self.right.d(b).items():
            out[(a, kb)] = out.get((a, kb), Q0) + sign * c
        return {k: c for k, c in out.items() if c}


class TensorDgla(DglaBase):
    """L (x) A for a DGLA L and a coefficient algebra A; nilpotent whenever
    A is.  Keys are pairs (l_key, a_key); structure constants are produced
    lazily so that zero ring products short-circuit."""

    def __init__(self, lie, coeff):
        self.lie = lie
        self.coeff = coeff
        self._basis = [(lk, ak) for lk in lie.basis() for ak in coeff.keys()]

    def basis(self):
        return self._basis

    def degree(self, key):
        lk, ak = key
        return self.lie.degree(lk) - self.coeff.chain_degree(ak)

    def level(self, key) -> int:
        return self.coeff.level(key[1])

    def d_key(self, key):
        lk, ak = key
        out = {}
        for lk2, c in self.lie.d_key(lk).items():
            out[(lk2, ak)] = c
        sign = -1 if self.lie.degree(lk) % 2 else 1
        for ak2, c in self.coeff.d(ak).items():
            k = (lk, ak2)
            s = out.get(k, Q0) + sign * c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def bracket_keys(self, k1, k2):
        (l1, a1), (l2, a2) = k1, k2
        # coefficient product first: nilpotency kills most pairs cheaply
        pa = self.coeff.product(a1, a2)
        if not pa:
            return {}
        cell = self.lie.bracket_keys(l1, l2)
        if not cell:
            return {}
        sign = -1 if (self.coeff.chain_degree(a1) *
                      self.lie.degree(l2)) % 2 else 1
        out = {}
        for l3, cl in cell.items():
            for a3, ca in pa.items():
                c = sign * cl * ca
                if c:
                    out[(l3, a3)] = c
        return out

    def nilpotency_class(self) -> int:
        n = getattr(self.coeff, "nilpotency", None)
        if n is None:
            raise ShapeError("coefficients are not nilpotent")
        return max(n - 1, 0)

    def element(self, parts: dict) -> dict:
        """Coordinates of sum_l l (x) r_l given ring vectors r_l in flat
        ring coordinates (each lying in the coefficient ideal)."""
        out = {}
        for lk, ring_vec in parts.items():
            for ak, c in self.coeff.to_adapted(ring_vec).items():
                key = (lk, ak)
                s = out.get(key, Q0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def ring_coefficients(self, v: dict) -> dict:
        """Inverse direction: l_key -> flat ring vector."""
        out: dict = {}
        for (lk, ak), c in v.items():
            if not c:
                continue
            acc = out.setdefault(lk, {})
            for i, w in self.coeff.vectors[ak].items():
                s = acc.get(i, Q0) + c * w
                if s:
                    acc[i] = s
                else:
                    acc.pop(i, None)
        return {lk: vv for lk, vv in out.items() if vv}

    def project_below_level(self, v: dict, level: int) -> dict:
        """Reduce mod m^level: drop coordinates of m-adic level >= level."""
        return {k: c for k, c in v.items() if self.level(k) < level and c}


def nilpotent_dgla(lie, ring: ArtinianCdga) -> TensorDgla:
    """L (x) m(R)."""
    return TensorDgla(lie, IdealCoefficients(ring))


# -- Maurer-Cartan, gauges, BCH -----------------------------------------------------

def mc_residual(t: TensorDgla | DglaBase, omega: dict) -> dict:
    """d(w) + (1/2)[w,w]; the caller tests vanishing."""
    deg = t.degree_of_vec(omega)
    if deg is not None and deg != 1:
        raise DegreeMismatch(f"MC candidate has degree {deg}, expected 1")
    return gvec_add(t.d_vec(omega),
                    gvec_scale(t.bracket_vec(omega, omega), HALF))


def is_mc(t, omega: dict) -> bool:
    return gvec_is_zero(mc_residual(t, omega))


@dataclass
class McElement:
    ambient: TensorDgla
    coeffs: dict

    def __post_init__(self):
        if not gvec_is_zero(mc_residual(self.ambient, self.coeffs)):
            raise NotMaurerCartan("nonzero Maurer-Cartan residual")


@dataclass
class GaugeElement:
    ambient: TensorDgla
    coeffs: dict

    def __post_init__(self):
        deg = self.ambient.degree_of_vec(self.coeffs)
        if deg is not None and deg != 0:
            raise DegreeMismatch("gauge parameters live in degree 0")


def _ad_series_apply(t, alpha: dict, target: dict, denominators) -> dict:
    """sum_n c_n ad_alpha^n(target) with c_n = denominators(n); finite by
    nilpotency."""
    out = {}
    term = dict(target)
    n = 0
    bound = t.nilpotency_class() + 2
    while term and n <= bound:
        out = gvec_add(out, gvec_scale(term, denominators(n)))
        term = t.bracket_vec(alpha, term)
        n += 1
    if term and n > bound:
        raise ShapeError("ad series failed to terminate; not nilpotent?")
    return out


def gauge_act(t: TensorDgla, alpha: dict, omega: dict) -> dict:
    """exp(ad_a)(w) - sum_{n>=0} ad_a^n(da)/(n+1)!.

    Preserves the MC set exactly and is a left action for the BCH product.
    """
    dega = t.degree_of_vec(alpha)
    if dega is not None and dega != 0:
        raise DegreeMismatch("gauge parameter must have degree 0")
    dego = t.degree_of_vec(omega)
    if dego is not None and dego != 1:
        raise DegreeMismatch("MC element must have degree 1")
    part1 = _ad_series_apply(t, alpha, omega,
                             lambda n: Fraction(1, factorial(n)))
    da = t.d_vec(alpha)
    part2 = _ad_series_apply(t, alpha, da,
                             lambda n: Fraction(1, factorial(n + 1)))
    return gvec_sub(part1, part2)


def _free_mul(u: dict, v: dict, bound: int) -> dict:
    out = {}
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            if len(w1) + len(w2) > bound:
                continue
            w = w1 + w2
            s = out.get(w, Q0) + c1 * c2
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def _free_exp(letter: int, bound: int) -> dict:
    out = {(): Q1}
    word = ()
    for n in range(1, bound + 1):
        word = word + (letter,)
        out[word] = Fraction(1, factorial(n))
    return out


def _free_log(u: dict, bound: int) -> dict:
    x = dict(u)
    x.pop((), None)   # u = 1 + x
    out = {}
    power = {(): Q1}
    for k in range(1, bound + 1):
        power = _free_mul(power, x, bound)
        sign = Fraction((-1) ** (k + 1), k)
        for w, c in power.items():
            s = out.get(w, Q0) + sign * c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return out


def bch(t: TensorDgla, alpha: dict, beta: dict) -> dict:
    """Campbell-Baker-Hausdorff product of degree-0 elements, exact up to the
    nilpotency class: log(exp X exp Y) in the truncated free algebra, then
    Dynkin bracketing   word w_1...w_m  ->  [w_1,[...,w_m]] / m."""
    for v in (alpha, beta):
        deg = t.degree_of_vec(v)
        if deg is not None and deg != 0:
            raise DegreeMismatch("BCH inputs must have degree 0")
    bound = t.nilpotency_class()
    if bound <= 0:
        return {}
    z = _free_log(_free_mul(_free_exp(0, bound), _free_exp(1, bound), bound),
                  bound)
    letters = {0: alpha, 1: beta}
    out = {}
    for word, c in z.items():
        m = len(word)
        if m == 0 or not c:
            continue
        val = dict(letters[word[-1]])
        for letter in reversed(word[:-1]):
            val = t.bracket_vec(letters[letter], val)
            if not val:
                break
        if val:
            out = gvec_add(out, gvec_scale(val, c * Fraction(1, m)))
    return out


# -- obstruction lifting ---------------------------------------------------------

@dataclass
class ObstructionClass:
    """A nonzero class in H^2(L (x) I): the residual cocycle (in L (x) I
    coordinates), the homology presentation, and the class coordinates."""

    subquotient: Subquotient
    cocycle: dict
    coordinates: list

    def is_zero(self) -> bool:
        return all(not c for c in self.coordinates)


@dataclass
class Lifted:
    value: dict


@dataclass
class Obstructed:
    obstruction: ObstructionClass


class KernelContext:
    """L (x) I for the kernel of a small extension, with conversion to and
    from L (x) m(total) coordinates."""

    def __init__(self, lie, ext: SmallExtension,
                 total_tensor: TensorDgla | None = None):
        self.lie = lie
        self.ext = ext
        self.tensor = TensorDgla(lie, KernelCoefficients(ext))
        self.total = total_tensor or nilpotent_dgla(lie, ext.total)

    def embed(self, v: dict) -> dict:
        """L (x) I -> L (x) m(total) coordinates."""
        mcoeff = self.total.coeff
        out = {}
        for (lk, ik), c in v.items():
            ring_vec = self.tensor.coeff.vectors[ik]
            for mk, w in mcoeff.to_adapted(ring_vec).items():
                key = (lk, mk)
                s = out.get(key, Q0) + c * w
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def restrict(self, v: dict) -> dict:
        """L (x) m(total) -> L (x) I coordinates; raises if not in L (x) I."""
        mcoeff = self.total.coeff
        by_l: dict = {}
        for (lk, mk), c in v.items():
            if c:
                ring_vec = mcoeff.vectors[mk]
                acc = by_l.setdefault(lk, {})
                for i, w in ring_vec.items():
                    s = acc.get(i, Q0) + c * w
                    if s:
                        acc[i] = s
                    else:
                        acc.pop(i, None)
        out = {}
        span = self.tensor.coeff._span
        for lk, ring_vec in by_l.items():
            if not ring_vec:
                continue
            sol = span.solve(ring_vec)
            if sol is None:
                raise ShapeError("vector does not lie in L (x) I")
            for ik, c in sol.items():
                if c:
                    out[(lk, ik)] = c
        return out

    def homology(self, degree: int) -> Subquotient:
        cx = self.tensor.complex()
        from .chain import homology_co
        return homology_co(cx, degree)


def lift_mc(lie, ext: SmallExtension, omega_bar: dict,
            section_tweak: dict | None = None):
    """Lift an MC element along a small extension, or report the obstruction
    class in H^2(L (x) I).

    `section_tweak` optionally perturbs the linear lift by an arbitrary map
    into L (x) I (used to verify independence of the obstruction class).
    """
    t_quot = nilpotent_dgla(lie, ext.quotient)
    if not gvec_is_zero(mc_residual(t_quot, omega_bar)):
        raise NotMaurerCartan("input is not MC over the quotient")
    t_tot = nilpotent_dgla(lie, ext.total)
    ctx = KernelContext(lie, ext, t_tot)
    # linear lift through the section, coefficientwise
    lifted = {}
    quot_coeff = t_quot.coeff
    tot_coeff = t_tot.coeff
    for (lk, qk), c in omega_bar.items():
        ring_vec = quot_coeff.vectors[qk]
        tot_vec = ext.section.apply(ring_vec)
        for mk, w in tot_coeff.to_adapted(tot_vec).items():
            key = (lk, mk)
            s = lifted.get(key, Q0) + c * w
            if s:
                lifted[key] = s
            else:
                lifted.pop(key, None)
    if section_tweak:
        lifted = gvec_add(lifted, ctx.embed(section_tweak))
    residual = mc_residual(t_tot, lifted)
    res_kernel = ctx.restrict(residual)   # raises if not in L (x) I
    h2 = ctx.homology(2)
    cx = ctx.tensor.complex()
    comp = ctx.tensor.vec_to_component(res_kernel, 2)
    coords = h2.coordinates(comp)
    if coords is None:
        raise ShapeError("MC residual is not closed in L (x) I")
    if any(coords):
        return Obstructed(ObstructionClass(h2, res_kernel, coords))
    # solve d(eta) = -residual inside L (x) I at cochain degree 1
    sol = cx.d_co(1).solve({p: -c for p, c in comp.items()})
    if sol is None:
        raise ShapeError("trivial class but no primitive found")
    eta = ctx.tensor.component_to_vec(sol, 1)
    corrected = gvec_add(lifted, ctx.embed(eta))
    if not gvec_is_zero(mc_residual(t_tot, corrected)):
        raise ShapeError("corrected lift fails MC; smallness violated?")
    return Lifted(corrected)


def lift_torsor_action(lie, ext: SmallExtension, lift: dict, z: dict) -> dict:
    """Act on a lift by a degree-1 cocycle z of L (x) I; the result is again
    a lift of the same reduction."""
    ctx = KernelContext(lie, ext)
    if not gvec_is_zero(ctx.tensor.d_vec(z)):
        raise NotClosed("torsor direction is not a cocycle of L (x) I")
    return gvec_add(lift, ctx.embed(z))


# -- square-zero tangent space ----------------------------------------------------

@dataclass
class TangentSpace:
    ambient: TensorDgla
    subquotient: Subquotient

    @property
    def dimension(self) -> int:
        return self.subquotient.dimension

    def basis_vectors(self) -> list:
        return [self.ambient.component_to_vec(rep, 1)
                for rep in self.subquotient.representatives]


def tangent_defs(lie, ring: ArtinianCdga) -> TangentSpace:
    """Deformation tangent space over a square-zero ring: the MC set equals
    the degree-1 cocycles of L (x) m and gauge orbits are shifts by exact
    elements, so the space is Z^1/d((L (x) m)^0)."""
    if ring.nilpotency > 2:
        raise RingNotSquareZero(
            f"nilpotency {ring.nilpotency} > 2: tangent computation needs "
            "m^2 = 0")
    t = nilpotent_dgla(lie, ring)
    cx = t.complex()
    d1 = cx.d_co(1)
    d0 = cx.d_co(0)
    cycles = d1.nullspace()
    boundaries = [d0.col(j) for j in range(d0.ncols)]
    return TangentSpace(t, Subquotient(cycles, boundaries, cx.dim_co(1)))


# -- gauge equivalence search ------------------------------------------------------

@dataclass
class Equivalent:
    witness: dict


@dataclass
class Inequivalent:
    stage: int
    certificate: dict = field(default_factory=dict)


@dataclass
class Undecided:
    stage: int
    reason: str = ""


def gauge_equivalent(lie, ring: ArtinianCdga, omega: dict, omega_prime: dict):
    """Stagewise search for a gauge transforming omega into omega_prime.

    A generic gauge parameter with one variable per degree-0 coordinate is
    pushed through the gauge action with polynomial scalars; at each m-adic
    stage the new equations are solved when affine, cutting the family down.
    Infeasibility of an affine stage is a sound inequivalence certificate
    (any exact witness would satisfy every stage equation); a non-affine
    stage yields Undecided after a cheap exact spot check.
    """
    t = nilpotent_dgla(lie, ring)
    for w in (omega, omega_prime):
        if not gvec_is_zero(mc_residual(t, w)):
            raise NotMaurerCartan("gauge_equivalent needs two MC elements")
    keys0 = t.basis_of_degree(0)
    nvars = len(keys0)
    # affine family: alpha(t) = a0 + sum_j t_j * dir_j, begins fully generic
    particular = {k: Q0 for k in keys0}
    directions = [{k: Q1} for k in keys0]
    nilp = getattr(ring, "nilpotency", None) or t.coeff.nilpotency

    def family_vector():
        av = {}
        for k in keys0:
            p = Poly.const(particular.get(k, Q0))
            for j, direction in enumerate(directions):
                c = direction.get(k)
                if c:
                    p = p + Poly.var(j) * c
            if p:
                av[k] = p
        return av

    omega_poly = {k: Poly.const(c) for k, c in omega.items()}
    omega_prime_poly = {k: Poly.const(c) for k, c in omega_prime.items()}

    for stage in range(1, nilp):
        alpha = family_vector()
        g = gauge_act(t, alpha, omega_poly)
        disc = gvec_sub(g, omega_prime_poly)
        # coordinates below the current stage must already vanish
        for k, p in disc.items():
            if t.level(k) < stage and p:
                raise ShapeError("stage invariant violated in gauge search")
        stage_eqs = [p for k, p in disc.items()
                     if t.level(k) == stage and p]
        if not stage_eqs:
            continue
        if any(not p.is_affine() for p in stage_eqs):
            # cheap exact spot check at the particular point
            cand = {k: p.eval({j: Q0 for j in range(len(directions))})
                    for k, p in alpha.items()}
            cand = {k: c for k, c in cand.items() if c}
            if gvec_is_zero(gvec_sub(gauge_act(t, cand, omega), omega_prime)):
                return Equivalent(cand)
            return Undecided(stage, "stage equations are not affine")
        rows = {}
        rhs = {}
        for r, p in enumerate(stage_eqs):
            rhs[r] = -p.constant()
            for j in range(len(directions)):
                c = p.linear_coeff(j)
                if c:
                    rows[(r, j)] = c
        amat = Matrix(len(stage_eqs), len(directions), rows)
        sol = amat.solve_full({r: c for r, c in rhs.items() if c})
        if sol is None:
            return Inequivalent(stage, {
                "equations": len(stage_eqs),
                "parameters": len(directions),
            })
        part_t, null_t = sol
        # substitute the solved family back into the parameters
        new_particular = dict(particular)
        for j, c in part_t.items():
            for k, w in directions[j].items():
                s = new_particular.get(k, Q0) + c * w
                new_particular[k] = s
        new_directions = []
        for nv in null_t:
            nd = {}
            for j, c in nv.items():
                for k, w in directions[j].items():
                    s = nd.get(k, Q0) + c * w
                    if s:
                        nd[k] = s
                    else:
                        nd.pop(k, None)
            if nd:
                new_directions.append(nd)
        particular = new_particular
        directions = new_directions
    witness = {k: c for k, c in particular.items() if c}
    if not gvec_is_zero(gvec_sub(gauge_act(t, witness, omega), omega_prime)):
        raise ShapeError("gauge family endpoint fails exact verification")
    return Equivalent(witness)


# -- gauge paths over polynomial forms ----------------------------------------------

@dataclass
class GaugePath:
    """MC element over (L (x) forms) (x) m restricting to the endpoints of a
    gauge orbit segment: component `a_part[e]` is the t^e coefficient (an
    element of (L (x) m)^1), `b_part[e]` the t^e dt coefficient (degree 0)."""

    ambient: TensorDgla          # L (x) (m (x) forms)
    base: TensorDgla             # L (x) m
    a_part: dict
    b_part: dict

    def coefficients(self) -> dict:
        out = {}
        for e, v in self.a_part.items():
            for (lk, mk), c in v.items():
                out[(lk, (mk, ("t", e)))] = c
        for e, v in self.b_part.items():
            for (lk, mk), c in v.items():
                out[(lk, (mk, ("tdt", e)))] = c
        return out

    def at(self, tval) -> dict:
        tval = Fraction(tval)
        out = {}
        for e, v in self.a_part.items():
            c = tval ** e
            if c:
                out = gvec_add(out, gvec_scale(v, c))
        return out


def gauge_to_path(lie, ring: ArtinianCdga, alpha: dict, omega: dict,
                  bound: int) -> GaugePath:
    """Polynomial path w(t) = gauge_act(t*alpha, w) with the dt-component
    eta = -alpha, satisfying the full MC equation over truncated polynomial
    forms.  (The sign of eta is forced by the fixed Koszul conventions; the
    verification below is exact.)"""
    t_base = nilpotent_dgla(lie, ring)
    if not gvec_is_zero(mc_residual(t_base, omega)):
        raise NotMaurerCartan("gauge_to_path needs an MC start point")
    cls = t_base.nilpotency_class()
    if bound < cls:
        raise TruncationTooSmall(
            f"bound {bound} below the nilpotency class {cls}")
    alpha_t = {k: Poly.var(0) * c for k, c in alpha.items() if c}
    omega_poly = {k: Poly.const(c) for k, c in omega.items()}
    path = gauge_act(t_base, alpha_t, omega_poly)
    a_part: dict = {}
    for k, p in path.items():
        for mono, c in p.terms.items():
            e = mono[0][1] if mono else 0
            if e > bound:
                raise TruncationTooSmall(
                    f"path coefficient of t-degree {e} exceeds bound {bound}")
            a_part.setdefault(e, {})[k] = c
    b_part = {0: gvec_scale(alpha, -1)} if alpha else {}
    forms = PolyFormsLine(bound)
    ambient = TensorDgla(lie, TensorCoefficients(IdealCoefficients(ring),
                                                 forms))
    gp = GaugePath(ambient, t_base, a_part, b_part)
    res = mc_residual(ambient, gp.coefficients())
    if not gvec_is_zero(res):
        raise ShapeError("gauge path fails the MC equation over forms")
    # endpoint checks (exact)
    if not gvec_is_zero(gvec_sub(gp.at(0), omega)):
        raise ShapeError("path does not start at omega")
    target = gauge_act(t_base, alpha, omega)
    if not gvec_is_zero(gvec_sub(gp.at(1), target)):
        raise ShapeError("path does not end at the gauge transform")
    return gp


# -- serialization ------------------------------------------------------------------

def dgla_to_json(l: TableDgla) -> dict:
    def fmt(v):
        return [[l.names[k], str(c)] for k, c in sorted(v.items())]
    return {
        "basis": [{"name": n, "degree": d}
                  for n, d in zip(l.names, l.degrees_list)],
        "differential": [{"of": l.names[k], "result": fmt(v)}
                         for k, v in sorted(l.d_table.items())],
        "bracket": [{"left": l.names[i], "right": l.names[j],
                     "result": fmt(v)}
                    for (i, j), v in sorted(l.bracket_table.items())],
    }


def dgla_from_json(data: dict) -> TableDgla:
    names = [b["name"] for b in data["basis"]]
    degrees = [int(b["degree"]) for b in data["basis"]]
    pos = {n: i for i, n in enumerate(names)}

    def parse(pairs):
        return {pos[n]: Fraction(c) for n, c in pairs}

    d_table = {pos[e["of"]]: parse(e["result"])
               for e in data.get("differential", [])}
    bracket = {(pos[e["left"]], pos[e["right"]]): parse(e["result"])
               for e in data.get("bracket", [])}
    return TableDgla(names, degrees, d_table, bracket)
