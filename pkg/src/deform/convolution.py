"""Arity-truncated convolution dg Lie algebras for the associative family.

The degree bookkeeping works on the suspension sA = shift(A, -1): the arity-n
component is Hom((sA)^{(x)n}, sA), where an n-ary map of internal degree n-2
(an A-infinity structure map) becomes a uniform cochain-degree-1 element.
The bracket is the commutator of the pre-Lie insertion product

    (F o G)(x_1 ... x_{p+q-1}) =
        sum_i (-1)^{|G| (|x_1|+...+|x_{i-1}|)} F(x_1,...,G(x_i,...),...),

with all Koszul signs delegated to the generic tensor machinery of chain.py,
so the same fixed convention governs here as everywhere else.  Compositions
whose arity exceeds the cutoff are dropped; this is a quotient DGLA, and
cohomology queries state the cutoff for which the answer is truncation-exact.

Conversions between unshifted structure maps m_n : A^{(x)n} -> A and their
suspended avatars go through explicit suspension isomorphisms, never through
hand-written sign rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chain import (ChainMap, Complex, GradedSpace, hom_complex, hom_to_map,
                    homology_co, map_to_hom, shift, tensor_power)
from .dgla import DglaBase, gvec_add, gvec_is_zero, gvec_scale, gvec_sub, \
    mc_residual
from .errors import (CutoffTooSmall, DegreeMismatch, NotMaurerCartan,
                     ShapeError)
from .linalg import Matrix, Q0, Q1


@dataclass(frozen=True)
class TruncatedCooperadSlot:
    """Arity window and suspension bookkeeping for the associative family.

    The n-ary cogenerator is placed so that Hom(A^{(x)n}, A) in internal
    degree -p contributes convolution degree n-1+p; `arities` lists the
    arities included (with or without the co-unit summand = arity 1)."""

    cutoff: int
    augmented: bool
    family: str = "assoc"

    def __post_init__(self):
        if self.cutoff < 2:
            raise CutoffTooSmall(f"cutoff {self.cutoff} < 2")
        if self.family != "assoc":
            raise ShapeError("only the associative family is supported")

    @property
    def arities(self) -> list:
        return list(range(1 if self.augmented else 2, self.cutoff + 1))

    def with_counit(self) -> "TruncatedCooperadSlot":
        return TruncatedCooperadSlot(self.cutoff, True, self.family)


class ConvolutionDgla(DglaBase):
    """prod_n Hom((sA)^{(x)n}, sA) with the insertion commutator bracket.

    Basis keys are (arity, cochain degree, index)."""

    def __init__(self, base: Complex, slot: TruncatedCooperadSlot):
        self.base = base
        self.slot = slot
        self.cutoff = slot.cutoff
        self.sA = shift(base, -1)
        self._powers = {}
        self._homs = {}
        for n in slot.arities:
            self._powers[n] = tensor_power(self.sA, n) \
                if self.sA.total_dim() else None
            self._homs[n] = hom_complex(self._powers[n], self.sA) \
                if self._powers[n] is not None else None
        self._basis = []
        for n in slot.arities:
            h = self._homs[n]
            if h is None:
                continue
            for i in h.degrees_co():
                for p in range(h.dim_co(i)):
                    self._basis.append((n, i, p))
        self._bracket_cache = {}
        self._insertion_cache = {}
        # suspension isomorphisms A <-> sA (identity matrices across degrees)
        self._s = ChainMap(base, self.sA, 1,
                           {n: Matrix.identity(base.dim(n))
                            for n in base.degrees()})
        self._sigma = ChainMap(self.sA, base, -1,
                               {n: Matrix.identity(self.sA.dim(n))
                                for n in self.sA.degrees()})
        self._apowers = {}

    # -- complexes ---------------------------------------------------------------

    def power(self, n: int) -> Complex:
        p = self._powers.get(n)
        if p is None:
            raise CutoffTooSmall(f"arity {n} outside the slot")
        return p

    def hom(self, n: int) -> Complex:
        h = self._homs.get(n)
        if h is None:
            raise CutoffTooSmall(f"arity {n} outside the slot")
        return h

    def a_power(self, n: int) -> Complex:
        if n not in self._apowers:
            self._apowers[n] = tensor_power(self.base, n)
        return self._apowers[n]

    # -- DGLA interface -----------------------------------------------------------

    def basis(self):
        return self._basis

    def degree(self, key):
        return key[1]

    def d_key(self, key):
        n, i, p = key
        h = self.hom(n)
        out = {}
        for p2, c in h.d_co(i).apply({p: Q1}).items():
            out[(n, i + 1, p2)] = c
        return out

    def key_to_map(self, key) -> ChainMap:
        n, i, p = key
        return hom_to_map(self.hom(n), i, {p: Q1}, self.power(n), self.sA)

    def vec_to_maps(self, v: dict) -> dict:
        """Coordinates -> {arity: ChainMap}; requires per-arity homogeneity."""
        by_arity: dict = {}
        for (n, i, p), c in v.items():
            if c:
                by_arity.setdefault(n, {}).setdefault(i, {})[p] = c
        out = {}
        for n, comps in by_arity.items():
            if len(comps) != 1:
                raise DegreeMismatch("arity component is not homogeneous")
            (i, vec), = comps.items()
            out[n] = hom_to_map(self.hom(n), i, vec, self.power(n), self.sA)
        return out

    def map_to_vec(self, n: int, f: ChainMap) -> dict:
        i, vec = map_to_hom(self.hom(n), f)
        return {(n, i, p): c for p, c in vec.items()}

    def _insertion(self, gkey, p: int, pos: int) -> ChainMap:
        """id^{(pos-1)} (x) G (x) id^{(p-pos)} : power(p+q-1) -> power(p) for
        the basis element G = gkey of arity q."""
        ck = (gkey, p, pos)
        if ck in self._insertion_cache:
            return self._insertion_cache[ck]
        q = gkey[0]
        g = self.key_to_map(gkey)
        src = self.power(p + q - 1)
        tgt = self.power(p)
        gdeg = g.degree
        mats = {}
        qpow = self.power(q)
        for n in src.degrees():
            ent = {}
            tgt_pos = tgt.positions(n + gdeg)
            for col, lab in enumerate(src.labels(n)):
                before = lab[:pos - 1]
                mid = lab[pos - 1:pos - 1 + q]
                after = lab[pos - 1 + q:]
                mid_deg = sum(d for d, _ in mid)
                mid_col = qpow.positions(mid_deg).get(mid)
                if mid_col is None:
                    continue
                gcol = g.mat(mid_deg).col(mid_col)
                if not gcol:
                    continue
                sign = Q1
                if gdeg % 2 == 1 and sum(d for d, _ in before) % 2 == 1:
                    sign = -Q1
                for srow, c in gcol.items():
                    newlab = before + ((mid_deg + gdeg, srow),) + after
                    row = tgt_pos.get(newlab)
                    if row is None:
                        raise ShapeError("insertion image outside target")
                    s = ent.get((row, col), Q0) + sign * c
                    if s:
                        ent[(row, col)] = s
                    else:
                        ent.pop((row, col), None)
            if ent:
                mats[n] = Matrix(tgt.dim(n + gdeg), src.dim(n), ent)
        result = ChainMap(src, tgt, gdeg, mats)
        self._insertion_cache[ck] = result
        return result

    def _compose_keys(self, fkey, gkey) -> dict:
        """Pre-Lie product F o G of two basis elements, as coordinates."""
        p, q = fkey[0], gkey[0]
        if p + q - 1 > self.cutoff:
            return {}
        fmap = self.key_to_map(fkey)
        total = None
        for pos in range(1, p + 1):
            ins = self._insertion(gkey, p, pos)
            term = fmap.compose(ins)
            total = term if total is None else total.add(term)
        if total is None or total.is_zero():
            return {}
        return self.map_to_vec(p + q - 1, total)

    def bracket_keys(self, k1, k2):
        ck = (k1, k2)
        if ck in self._bracket_cache:
            return self._bracket_cache[ck]
        fg = self._compose_keys(k1, k2)
        gf = self._compose_keys(k2, k1)
        sign = -1 if (k1[1] * k2[1]) % 2 else 1
        out = gvec_sub(fg, gvec_scale(gf, sign))
        self._bracket_cache[ck] = out
        return out

    # -- suspension conversions ------------------------------------------------------

    def sigma_power(self, n: int) -> ChainMap:
        """(s^{-1})^{(x)n} : (sA)^{(x)n} -> A^{(x)n} with Koszul signs."""
        from .chain import tensor_product_map
        return tensor_product_map([self._sigma] * n, self.power(n),
                                  self.a_power(n))

    def s_power(self, n: int) -> ChainMap:
        from .chain import tensor_product_map
        return tensor_product_map([self._s] * n, self.a_power(n),
                                  self.power(n))

    def suspend_structure_map(self, n: int, m_n: ChainMap) -> ChainMap:
        """m_n : A^{(x)n} -> A  |->  s o m_n o (s^{-1})^{(x)n}."""
        return self._s.compose(m_n).compose(self.sigma_power(n))

    def unsuspend_structure_map(self, n: int, f_n: ChainMap) -> ChainMap:
        return self._sigma.compose(f_n).compose(self.s_power(n))

    # -- validation --------------------------------------------------------------------

    def validate_within_cutoff(self, max_total_dim: int | None = None):
        """d^2, antisymmetry, derivation, and Jacobi on every basis triple
        whose composite arity stays within the cutoff."""
        keys = list(self.basis())
        if max_total_dim is not None and len(keys) > max_total_dim:
            raise ShapeError("validation request exceeds the stated bound")
        self.check_d_squared(keys)
        pairs = [(a, b) for a in keys for b in keys
                 if a[0] + b[0] - 1 <= self.cutoff]
        for a, b in pairs:
            sign = -1 if (self.degree(a) * self.degree(b)) % 2 else 1
            lhs = self.bracket_keys(a, b)
            rhs = gvec_scale(self.bracket_keys(b, a), -sign)
            if not gvec_is_zero(gvec_sub(lhs, rhs)):
                raise ShapeError(f"antisymmetry fails on ({a}, {b})")
            lhsd = self.d_vec(self.bracket_keys(a, b))
            rhsd = self.bracket_vec(self.d_key(a), {b: Q1})
            sgn = -1 if self.degree(a) % 2 else 1
            rhsd = gvec_add(rhsd, gvec_scale(
                self.bracket_vec({a: Q1}, self.d_key(b)), sgn))
            if not gvec_is_zero(gvec_sub(lhsd, rhsd)):
                raise ShapeError(f"derivation fails on ({a}, {b})")
        triples = [(a, b, c) for a in keys for b in keys for c in keys
                   if a[0] + b[0] + c[0] - 2 <= self.cutoff]
        self.check_jacobi(triples)
        return self


def build_convolution(base: Complex, cutoff: int,
                      augmented: bool) -> ConvolutionDgla:
    slot = TruncatedCooperadSlot(cutoff, augmented)
    return ConvolutionDgla(base, slot)


def build_convolution_from_slot(base: Complex,
                                slot: TruncatedCooperadSlot) -> ConvolutionDgla:
    """Constructor taking the slot directly: the co-unit-extended reduced
    slot produces bit-identical structure constants to `augmented=True`."""
    return ConvolutionDgla(base, slot)


class TwistedDgla(DglaBase):
    """Any DGLA with differential d + [gamma, -] for an MC element gamma."""

    def __init__(self, inner: DglaBase, gamma: dict, check: bool = True):
        self.inner = inner
        self.gamma = dict(gamma)
        if check:
            if not gvec_is_zero(mc_residual(inner, gamma)):
                raise NotMaurerCartan("twist element fails the MC equation")
        self._dcache = {}

    def basis(self):
        return self.inner.basis()

    def degree(self, key):
        return self.inner.degree(key)

    def d_key(self, key):
        if key not in self._dcache:
            self._dcache[key] = gvec_add(
                self.inner.d_key(key),
                self.inner.bracket_vec(self.gamma, {key: Q1}))
        return self._dcache[key]

    def bracket_keys(self, k1, k2):
        return self.inner.bracket_keys(k1, k2)


def twist_by_structure(conv: DglaBase, gamma: dict) -> TwistedDgla:
    """Same graded object with differential d + [gamma, -]; the square-zero
    property follows from the MC equation and is re-checked on the basis."""
    tw = TwistedDgla(conv, gamma)
    tw.check_d_squared()
    return tw


# -- A-infinity structures ----------------------------------------------------------

@dataclass
class AInftyStructure:
    """Family m_n : A^{(x)n} -> A (internal degree n-2) for 1 <= n <= cutoff.

    With `fold_m1` set, m_1 is the differential already carried by `base`
    and must not appear in `ms`; otherwise `base` is taken with zero
    differential and m_1 is part of the family."""

    base: Complex
    ms: dict
    fold_m1: bool = True

    def __post_init__(self):
        for n, f in self.ms.items():
            if self.fold_m1 and n == 1:
                raise ShapeError("fold_m1 structures must not carry m_1")
            if f.degree != n - 2:
                raise DegreeMismatch(
                    f"m_{n} has stored degree {f.degree}, expected {n - 2}")


def stripped(base: Complex) -> Complex:
    """base with zero differential (for unfolded structures)."""
    return Complex(base.space, {}, base.orientation, check=False)


def structure_conv(struct: AInftyStructure, cutoff: int) -> ConvolutionDgla:
    carrier = struct.base if struct.fold_m1 else stripped(struct.base)
    return build_convolution(carrier, cutoff, augmented=True)


def structure_to_element(conv: ConvolutionDgla,
                         struct: AInftyStructure) -> dict:
    """The degree-1 convolution element assembled from a structure family:
    the bijection between Stasheff families and MC candidates."""
    out = {}
    for n, m_n in struct.ms.items():
        if n > conv.cutoff:
            raise CutoffTooSmall(f"m_{n} exceeds cutoff {conv.cutoff}")
        f_n = conv.suspend_structure_map(n, m_n)
        out.update(conv.map_to_vec(n, f_n))
    return {k: c for k, c in out.items() if c}


def element_to_structure(conv: ConvolutionDgla, v: dict,
                         fold_m1: bool = True) -> AInftyStructure:
    maps = conv.vec_to_maps(v)
    ms = {}
    for n, f_n in maps.items():
        ms[n] = conv.unsuspend_structure_map(n, f_n)
    return AInftyStructure(conv.base, ms, fold_m1)


@dataclass
class Valid:
    pass


@dataclass
class Violation:
    arity: int
    residual: dict


def ainfty_check(struct: AInftyStructure, cutoff: int):
    """Maurer-Cartan residual of the assembled element, reported arity by
    arity: Valid iff every arity at or below the cutoff vanishes
    (equivalently the Stasheff identities hold there)."""
    conv = structure_conv(struct, cutoff)
    elt = structure_to_element(conv, struct)
    res = mc_residual(conv, elt)
    if gvec_is_zero(res):
        return Valid()
    arities = sorted({k[0] for k, c in res.items() if c})
    bad = arities[0]
    return Violation(bad, {k: c for k, c in res.items()
                           if c and k[0] == bad})


def strict_algebra_structure(base: Complex, m2: ChainMap) -> AInftyStructure:
    """dg algebra as an A-infinity structure: m_2 only, m_1 folded."""
    return AInftyStructure(base, {2: m2}, fold_m1=True)


def multiplication_map(base: Complex, table: dict) -> ChainMap:
    """Build m_2 : A (x) A -> A from a basis-level table
    {((deg_a, idx_a), (deg_b, idx_b)): {(deg_c, idx_c): coeff}}."""
    p2 = tensor_power(base, 2)
    mats = {}
    for (la, lb), result in table.items():
        n = la[0] + lb[0]
        col = p2.positions(n)[(la, lb)]
        for (dc, ic), coeff in result.items():
            if dc != n:
                raise DegreeMismatch("multiplication is not degree 0")
            ent = mats.setdefault(n, {})
            ent[(ic, col)] = ent.get((ic, col), Q0) + Fraction(coeff)
    built = {n: Matrix(base.dim(n), p2.dim(n), ent)
             for n, ent in mats.items()}
    return ChainMap(p2, base, 0, built)


# -- cohomology of the twisted complex -----------------------------------------------

def is_cutoff_exact(conv: ConvolutionDgla, degree: int) -> bool:
    """True when arities above the cutoff contribute nothing to convolution
    degrees degree-1, degree, degree+1, so the truncated cohomology at
    `degree` equals the untruncated one."""
    sdegs = conv.sA.degrees()
    if not sdegs:
        return True
    lo = min(sdegs)
    if lo <= 0:
        return False
    hi = max(sdegs)
    n = conv.cutoff + 1
    while True:
        rng = (n * lo - hi, n * hi - lo)
        if rng[0] > degree + 1:
            return True
        if rng[0] <= degree + 1 and rng[1] >= degree - 1:
            return False
        n += 1


def hochschild(base: Complex, m2: ChainMap, degree: int, cutoff: int):
    """Deformation cohomology of a strict dg algebra in one convolution
    degree, computed from the twisted augmented convolution complex.

    Requires the cutoff to make the requested degree truncation-exact
    (CutoffTooSmall otherwise).  For an algebra concentrated in chain degree
    0 this is Hochschild cohomology HH^{degree+1} under the regrading
    arity = degree + 1."""
    struct = strict_algebra_structure(base, m2)
    check = ainfty_check(struct, cutoff)
    if not isinstance(check, Valid):
        raise ShapeError(
            f"input is not a strict dg algebra: arity {check.arity} fails")
    conv = structure_conv(struct, cutoff)
    if not is_cutoff_exact(conv, degree):
        raise CutoffTooSmall(
            f"degree {degree} is not truncation-exact at cutoff {cutoff}")
    gamma = structure_to_element(conv, struct)
    tw = twist_by_structure(conv, gamma)
    cx = tw.complex()
    sq = homology_co(cx, degree)
    reps = [tw.component_to_vec(r, degree) for r in sq.representatives]
    return sq.dimension, reps, sq


def reduced_vs_augmented(base: Complex, struct: AInftyStructure, cutoff: int):
    """Inclusion of the reduced complex into the augmented one; the
    complementary quotient is the arity-1 component Hom(sA, sA).

    Returns (augmented twisted DGLA, reduced twisted DGLA, summary dict)."""
    conv_aug = structure_conv(struct, cutoff)
    gamma = structure_to_element(conv_aug, struct)
    conv_red = build_convolution(
        conv_aug.base if struct.fold_m1 else stripped(struct.base),
        cutoff, augmented=False)
    gamma_red = {k: c for k, c in gamma.items() if k[0] >= 2}
    if set(gamma) != set(gamma_red):
        raise ShapeError(
            "structure has an arity-1 component: fold it into the "
            "differential before splitting off the reduced complex")
    tw_aug = twist_by_structure(conv_aug, gamma)
    tw_red = twist_by_structure(conv_red, gamma_red)
    dims_aug = {}
    dims_red = {}
    dims_end = {}
    for key in tw_aug.basis():
        dims_aug[key[1]] = dims_aug.get(key[1], 0) + 1
        if key[0] == 1:
            dims_end[key[1]] = dims_end.get(key[1], 0) + 1
    for key in tw_red.basis():
        dims_red[key[1]] = dims_red.get(key[1], 0) + 1
    for g in dims_aug:
        if dims_aug[g] != dims_red.get(g, 0) + dims_end.get(g, 0):
            raise ShapeError("augmented != reduced + arity-1 in degree "
                             f"{g}")
    return tw_aug, tw_red, {
        "dims_augmented": dims_aug,
        "dims_reduced": dims_red,
        "dims_endomorphism": dims_end,
    }
