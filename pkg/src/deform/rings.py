"""Local Artinian dg coefficient rings.

A ring is presented by a finite total basis over Q with chain degrees, a
multiplication table on basis pairs, a differential, and an augmentation to
the ground field.  Validation checks every axiom exactly (graded
commutativity, associativity, Leibniz, unit, dg augmentation) and computes
the nilpotency index of the maximal ideal by iterating ideal powers.

All ideal-theoretic subspaces here are homogeneous, so plain echelon bases
stay degree-homogeneous automatically (vectors of different degrees have
disjoint support).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chain import CHAIN, Complex, GradedSpace
from .errors import (AugmentationNotDg, NotAssociative, NotCommutative,
                     NotLeibniz, NotNilpotent, ShapeError)
from .linalg import (Matrix, Q0, Q1, span_basis, span_matrix, vec_add,
                     vec_is_zero, vec_scale, vec_sub)


class ArtinianCdga:
    """Graded-commutative dg algebra, augmented to Q, with nilpotent
    finite-dimensional maximal ideal.  Basis is flat; `degs[i]` is the chain
    degree of basis element i."""

    def __init__(self, names, degs, unit: dict, mult: dict, dmat: dict,
                 aug: dict, check: bool = True):
        self.names = tuple(names)
        self.degs = tuple(int(d) for d in degs)
        if len(self.names) != len(self.degs):
            raise ShapeError("names/degrees length mismatch")
        if len(set(self.names)) != len(self.names):
            raise ShapeError("duplicate basis names")
        self.dim = len(self.names)
        self.unit = {i: Fraction(c) for i, c in unit.items() if c}
        self.mult = {}
        for (i, j), v in mult.items():
            vv = {k: Fraction(c) for k, c in v.items() if c}
            if vv:
                self.mult[(i, j)] = vv
        self.dmat = {}
        for i, v in dmat.items():
            vv = {k: Fraction(c) for k, c in v.items() if c}
            if vv:
                self.dmat[i] = vv
        self.aug = {i: Fraction(c) for i, c in aug.items() if c}
        self._powers = None
        if check:
            self.validate()

    # -- elementwise operations ------------------------------------------------

    def product(self, u: dict, v: dict) -> dict:
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                cell = self.mult.get((i, j))
                if not cell:
                    continue
                c = a * b
                for k, w in cell.items():
                    s = out.get(k, Q0) + c * w
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def differential(self, u: dict) -> dict:
        out = {}
        for i, a in u.items():
            for k, w in self.dmat.get(i, {}).items():
                s = out.get(k, Q0) + a * w
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    def augment(self, u: dict) -> Fraction:
        return sum((a * self.aug.get(i, Q0) for i, a in u.items()), Q0)

    def degree_of(self, v: dict) -> int | None:
        """Common chain degree of a homogeneous vector (None for 0)."""
        degs = {self.degs[i] for i in v if v[i]}
        if not degs:
            return None
        if len(degs) > 1:
            raise ShapeError(f"vector is not homogeneous: degrees {degs}")
        return degs.pop()

    def basis_vector(self, i: int) -> dict:
        return {i: Q1}

    def by_degree(self) -> dict:
        out = {}
        for i, d in enumerate(self.degs):
            out.setdefault(d, []).append(i)
        return out

    def underlying_complex(self) -> Complex:
        by = self.by_degree()
        dims = {d: len(ix) for d, ix in by.items()}
        labels = {d: tuple(self.names[i] for i in ix) for d, ix in by.items()}
        pos = {}
        for d, ix in by.items():
            for p, i in enumerate(ix):
                pos[i] = (d, p)
        diff = {}
        for i, v in self.dmat.items():
            d, p = pos[i]
            ent = diff.setdefault(d, {})
            for k, c in v.items():
                d2, p2 = pos[k]
                if d2 != d - 1:
                    raise ShapeError("differential is not degree -1")
                ent[(p2, p)] = c
        dm = {d: Matrix(dims.get(d - 1, 0), dims[d], ent)
              for d, ent in diff.items()}
        return Complex(GradedSpace(dims, labels), dm, CHAIN)

    # -- validation --------------------------------------------------------------

    def validate(self) -> "ArtinianCdga":
        names = self.names
        # degree homogeneity of the structure maps
        for (i, j), v in self.mult.items():
            for k in v:
                if self.degs[k] != self.degs[i] + self.degs[j]:
                    raise ShapeError(
                        f"product {names[i]}*{names[j]} not homogeneous")
        for i, v in self.dmat.items():
            for k in v:
                if self.degs[k] != self.degs[i] - 1:
                    raise ShapeError(f"d({names[i]}) not of degree -1")
        for i in self.aug:
            if self.degs[i] != 0 and self.aug[i]:
                raise AugmentationNotDg(
                    f"augmentation nonzero on {names[i]} of degree "
                    f"{self.degs[i]}")
        # unit
        for i in range(self.dim):
            e = self.basis_vector(i)
            if not vec_is_zero(vec_sub(self.product(self.unit, e), e)) or \
                    not vec_is_zero(vec_sub(self.product(e, self.unit), e)):
                raise ShapeError(f"unit fails on {names[i]}")
        if self.augment(self.unit) != Q1:
            raise AugmentationNotDg("augmentation of the unit is not 1")
        # graded commutativity
        for i in range(self.dim):
            for j in range(self.dim):
                left = self.product(self.basis_vector(i), self.basis_vector(j))
                right = self.product(self.basis_vector(j), self.basis_vector(i))
                if (self.degs[i] * self.degs[j]) % 2 == 1:
                    right = vec_scale(right, -1)
                if not vec_is_zero(vec_sub(left, right)):
                    raise NotCommutative(f"({names[i]}, {names[j]})")
        # associativity
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.product(self.basis_vector(i), self.basis_vector(j))
                for k in range(self.dim):
                    jk = self.product(self.basis_vector(j),
                                      self.basis_vector(k))
                    left = self.product(ij, self.basis_vector(k))
                    right = self.product(self.basis_vector(i), jk)
                    if not vec_is_zero(vec_sub(left, right)):
                        raise NotAssociative(
                            f"({names[i]}, {names[j]}, {names[k]})")
        # d^2 = 0 and Leibniz
        for i in range(self.dim):
            if not vec_is_zero(self.differential(
                    self.differential(self.basis_vector(i)))):
                raise NotLeibniz(f"d^2 != 0 on {names[i]}")
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = self.differential(
                    self.product(self.basis_vector(i), self.basis_vector(j)))
                rhs = self.product(self.differential(self.basis_vector(i)),
                                   self.basis_vector(j))
                second = self.product(self.basis_vector(i),
                                      self.differential(self.basis_vector(j)))
                if self.degs[i] % 2 == 1:
                    second = vec_scale(second, -1)
                rhs = vec_add(rhs, second)
                if not vec_is_zero(vec_sub(lhs, rhs)):
                    raise NotLeibniz(f"({names[i]}, {names[j]})")
        # augmentation is a dg ring map
        for i in range(self.dim):
            if self.augment(self.differential(self.basis_vector(i))):
                raise AugmentationNotDg(f"aug(d {names[i]})) != 0")
            for j in range(self.dim):
                prod_aug = self.augment(
                    self.product(self.basis_vector(i), self.basis_vector(j)))
                if prod_aug != self.augment(self.basis_vector(i)) * \
                        self.augment(self.basis_vector(j)):
                    raise AugmentationNotDg(
                        f"aug not multiplicative on ({names[i]}, {names[j]})")
        # nilpotency of the maximal ideal
        self._powers = None
        self.ideal_powers()
        return self

    # -- maximal ideal and powers ---------------------------------------------

    def maximal_ideal(self) -> list:
        """Echelon basis of m = ker(augmentation)."""
        row = Matrix(1, self.dim, {(0, i): c for i, c in self.aug.items()})
        return span_basis(row.nullspace(), self.dim)

    def ideal_powers(self) -> list:
        """[m^1 basis, m^2 basis, ...] down to the first zero power.

        The nilpotency index N (m^N = 0, m^{N-1} != 0) is len(powers)+1 ...
        stored as `self.nilpotency`; for the ground field N = 1.
        """
        if self._powers is not None:
            return self._powers
        m1 = self.maximal_ideal()
        powers = []
        current = m1
        steps = 0
        while current:
            powers.append(current)
            steps += 1
            if steps > self.dim + 1:
                raise NotNilpotent("maximal ideal power chain does not reach 0")
            nxt = []
            for x in m1:
                for y in current:
                    p = self.product(x, y)
                    if p:
                        nxt.append(p)
            current = span_basis(nxt, self.dim)
        self._powers = powers
        self.nilpotency = len(powers) + 1
        return powers

    def power_basis(self, n: int) -> list:
        """Echelon basis of m^n (n >= 1); empty once n reaches nilpotency."""
        powers = self.ideal_powers()
        if n <= 0:
            raise ShapeError("power_basis needs n >= 1")
        return powers[n - 1] if n - 1 < len(powers) else []

    def adapted_ideal_basis(self) -> list:
        """Basis of m adapted to the m-adic filtration: list of (vector,
        level) with level = largest n such that the vector lies in m^n."""
        powers = self.ideal_powers()
        out = []
        current: list = []
        for level in range(len(powers), 0, -1):
            from .linalg import extend_basis
            ext = extend_basis(current, powers[level - 1], self.dim)
            out.extend((v, level) for v in ext)
            current = current + ext
        return out

    # -- quotients ---------------------------------------------------------------

    def reduce_mod(self, ideal_basis: list, v: dict) -> dict:
        """Reduce v modulo the span of an echelon basis (kill pivot coords)."""
        out = dict(v)
        for row in ideal_basis:
            piv = min(row)
            c = out.get(piv)
            if c:
                f = c / row[piv]
                for k, w in row.items():
                    s = out.get(k, Q0) - f * w
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def quotient_by_ideal(self, ideal_vectors: list):
        """Quotient dg ring R/J for a homogeneous dg ideal J <= m.

        Returns (quotient ring, projection Matrix (flat coords), section
        Matrix).  The section sends a quotient basis element to the original
        basis element of the same name.
        """
        J = span_basis(ideal_vectors, self.dim)
        # closure checks: d(J) <= J, R*J <= J, J <= ker aug
        jmat = span_matrix(J, self.dim)
        for v in J:
            if self.augment(v):
                raise ShapeError("ideal is not contained in the maximal ideal")
            dv = self.differential(v)
            if dv and jmat.solve(dv) is None:
                raise ShapeError("ideal is not closed under the differential")
            for i in range(self.dim):
                p = self.product(self.basis_vector(i), v)
                if p and jmat.solve(p) is None:
                    raise ShapeError("subspace is not an ideal")
        pivots = sorted(min(row) for row in J)
        keep = [i for i in range(self.dim) if i not in set(pivots)]
        old_to_new = {i: t for t, i in enumerate(keep)}

        def push(v: dict) -> dict:
            red = self.reduce_mod(J, v)
            return {old_to_new[i]: c for i, c in red.items()}

        names = [self.names[i] for i in keep]
        degs = [self.degs[i] for i in keep]
        unit = push(self.unit)
        mult = {}
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                p = push(self.product(self.basis_vector(i),
                                      self.basis_vector(j)))
                if p:
                    mult[(a, b)] = p
        dmat = {}
        for a, i in enumerate(keep):
            dv = push(self.differential(self.basis_vector(i)))
            if dv:
                dmat[a] = dv
        aug = {a: self.aug.get(i, Q0) for a, i in enumerate(keep)
               if self.aug.get(i, Q0)}
        quot = ArtinianCdga(names, degs, unit, mult, dmat, aug)
        proj = Matrix(len(keep), self.dim,
                      {(r, i): c for i in range(self.dim)
                       for r, c in push(self.basis_vector(i)).items()})
        sect = Matrix(self.dim, len(keep),
                      {(i, a): Q1 for a, i in enumerate(keep)})
        return quot, proj, sect

    def quotient_by_power(self, n: int):
        """R/m^n with projection and section (n >= 1)."""
        return self.quotient_by_ideal(self.power_basis(n))


@dataclass
class SmallExtension:
    """Surjection total -> quotient of Artinian cdgas with kernel I killed by
    the maximal ideal (I * m(total) = 0)."""

    total: ArtinianCdga
    quotient: ArtinianCdga
    projection: Matrix       # flat coords: total -> quotient
    section: Matrix          # flat coords: quotient -> total (linear, graded)
    kernel_basis: list       # echelon basis of I inside total

    def validate(self) -> "SmallExtension":
        t, q = self.total, self.quotient
        # projection is a surjective dg ring map
        if self.projection.rank() != q.dim:
            raise ShapeError("projection is not surjective")
        pu = self.projection.apply(t.unit)
        if not vec_is_zero(vec_sub(pu, q.unit)):
            raise ShapeError("projection does not preserve the unit")
        for i in range(t.dim):
            ei = t.basis_vector(i)
            lhs = self.projection.apply(t.differential(ei))
            rhs = q.differential(self.projection.apply(ei))
            if not vec_is_zero(vec_sub(lhs, rhs)):
                raise ShapeError("projection does not commute with d")
            for j in range(t.dim):
                ej = t.basis_vector(j)
                lhs = self.projection.apply(t.product(ei, ej))
                rhs = q.product(self.projection.apply(ei),
                                self.projection.apply(ej))
                if not vec_is_zero(vec_sub(lhs, rhs)):
                    raise ShapeError("projection is not multiplicative")
        # kernel of projection equals span(I)
        null = span_basis(self.projection.nullspace(), t.dim)
        mine = span_basis(self.kernel_basis, t.dim)
        if len(null) != len(mine) or \
                len(span_basis(null + mine, t.dim)) != len(null):
            raise ShapeError("kernel basis does not match ker(projection)")
        # smallness: I * m = 0
        for v in self.kernel_basis:
            for w in t.maximal_ideal():
                if t.product(v, w) or t.product(w, v):
                    raise ShapeError("I * m != 0: extension is not small")
        # section is a graded linear section
        comp = self.projection * self.section
        if comp != Matrix.identity(q.dim):
            raise ShapeError("section is not a section of the projection")
        return self

    def lift_vector(self, v: dict) -> dict:
        return self.section.apply(v)

    def kernel_complex(self) -> Complex:
        """The kernel I as a chain complex with its echelon basis."""
        t = self.total
        by_deg = {}
        for v in self.kernel_basis:
            d = t.degree_of(v)
            by_deg.setdefault(d, []).append(v)
        dims = {d: len(vs) for d, vs in by_deg.items()}
        labels = {d: tuple(f"i{d}_{k}" for k in range(len(vs)))
                  for d, vs in by_deg.items()}
        # differential of I in its own coordinates
        diff = {}
        for d, vs in by_deg.items():
            tgt = by_deg.get(d - 1, [])
            if not tgt:
                continue
            tmat = span_matrix(tgt, t.dim)
            ent = {}
            for col, v in enumerate(vs):
                dv = t.differential(v)
                if not dv:
                    continue
                sol = tmat.solve(dv)
                if sol is None:
                    raise ShapeError("kernel not closed under d")
                for r, c in sol.items():
                    ent[(r, col)] = c
            if ent:
                diff[d] = Matrix(len(tgt), len(vs), ent)
        return Complex(GradedSpace(dims, labels), diff, CHAIN)

    def kernel_vectors_by_degree(self) -> dict:
        t = self.total
        by_deg = {}
        for v in self.kernel_basis:
            by_deg.setdefault(t.degree_of(v), []).append(v)
        return by_deg


def small_extension(r: ArtinianCdga, ideal_vectors: list) -> SmallExtension:
    """Quotient by a dg ideal I with I*m = 0, validated."""
    quot, proj, sect = r.quotient_by_ideal(ideal_vectors)
    ext = SmallExtension(r, quot, proj, sect,
                         span_basis(ideal_vectors, r.dim))
    return ext.validate()


def madic_tower(r: ArtinianCdga) -> list:
    """Small extensions R/m^{n+1} -> R/m^n for n = 1..N-1, ordered from the
    bottom (quotient k) to the top (total R).  Empty for the ground field.

    Compositions of the step projections agree with the direct quotient maps
    R/m^{n+1} -> R/m^n induced by reduction, because every stage reduces
    against nested echelon bases of the m-adic filtration.
    """
    r.ideal_powers()
    nilp = r.nilpotency
    if nilp == 1:
        return []
    quots = {}
    for n in range(1, nilp):
        quots[n] = r.quotient_by_power(n)
    quots[nilp] = (r, Matrix.identity(r.dim), Matrix.identity(r.dim))
    steps = []
    for n in range(1, nilp):
        total, proj_t, sect_t = quots[n + 1]
        quotient, proj_q, sect_q = quots[n]
        # projection total -> quotient: reduce a total representative mod m^n
        ent = {}
        for a in range(total.dim):
            rep = sect_t.apply({a: Q1})
            img = proj_q.apply(rep)
            for i, c in img.items():
                ent[(i, a)] = c
        step_proj = Matrix(quotient.dim, total.dim, ent)
        # section quotient -> total
        ent = {}
        for b in range(quotient.dim):
            rep = sect_q.apply({b: Q1})
            img = proj_t.apply(rep)
            for i, c in img.items():
                ent[(i, b)] = c
        step_sect = Matrix(total.dim, quotient.dim, ent)
        kernel = [proj_t.apply(v) for v in r.power_basis(n)]
        kernel = [v for v in kernel if v]
        ext = SmallExtension(total, quotient, step_proj, step_sect,
                             span_basis(kernel, total.dim))
        steps.append(ext.validate())
    return steps


# -- constructors -----------------------------------------------------------------

def ground_field() -> ArtinianCdga:
    return ArtinianCdga(("1",), (0,), {0: Q1}, {(0, 0): {0: Q1}}, {},
                        {0: Q1})


def truncated_polynomial(n: int, var: str = "t") -> ArtinianCdga:
    """k[t]/t^n with t in chain degree 0 (n >= 1)."""
    if n < 1:
        raise ShapeError("need n >= 1")
    names = ["1"] + [f"{var}^{k}" if k > 1 else var for k in range(1, n)]
    degs = [0] * n
    mult = {}
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[(i, j)] = {i + j: Q1}
    return ArtinianCdga(names, degs, {0: Q1}, mult, {}, {0: Q1})


def square_zero(degrees, differential: dict | None = None,
                names: list | None = None) -> ArtinianCdga:
    """k (+) V with V*V = 0.  `degrees` lists the chain degree of each
    V-basis element; `differential` optionally maps V-index -> vector over
    V-indices (degree -1)."""
    degrees = list(degrees)
    k = len(degrees)
    if names is None:
        names = [f"v{i}" for i in range(k)]
    all_names = ["1"] + list(names)
    degs = [0] + degrees
    mult = {(0, 0): {0: Q1}}
    for i in range(1, k + 1):
        mult[(0, i)] = {i: Q1}
        mult[(i, 0)] = {i: Q1}
    dmat = {}
    for i, v in (differential or {}).items():
        dmat[i + 1] = {j + 1: Fraction(c) for j, c in v.items() if c}
    return ArtinianCdga(all_names, degs, {0: Q1}, mult, dmat, {0: Q1})


def fat_point() -> ArtinianCdga:
    """k[x,y]/(x^2, xy, y^2)."""
    return square_zero([0, 0], names=["x", "y"])


def dual_numbers_odd(degree: int = 1) -> ArtinianCdga:
    """k[eps]/eps^2 with eps in the given chain degree, d(eps) = 0."""
    return square_zero([degree], names=["eps"])


def acyclic_cone_ring() -> ArtinianCdga:
    """Non-negatively graded dg ring k<x, e> with |x| = 0, |e| = 1, d e = x,
    x^2 = xe = e^2 = 0.  Smallest ring with a nonzero differential."""
    names = ("1", "x", "e")
    degs = (0, 0, 1)
    mult = {(0, 0): {0: Q1}, (0, 1): {1: Q1}, (1, 0): {1: Q1},
            (0, 2): {2: Q1}, (2, 0): {2: Q1}}
    dmat = {2: {1: Q1}}
    return ArtinianCdga(names, degs, {0: Q1}, mult, dmat, {0: Q1})


def ring_tensor(r1: ArtinianCdga, r2: ArtinianCdga) -> ArtinianCdga:
    """Tensor product ring with Koszul signs:
    (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'."""
    names = []
    degs = []
    index = {}
    for i, ni in enumerate(r1.names):
        for j, nj in enumerate(r2.names):
            index[(i, j)] = len(names)
            names.append(f"{ni}(x){nj}")
            degs.append(r1.degs[i] + r2.degs[j])

    def emb(u: dict, v: dict, sign=Q1) -> dict:
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                k = index[(i, j)]
                s = out.get(k, Q0) + sign * a * b
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return out

    unit = emb(r1.unit, r2.unit)
    mult = {}
    for (i, j), k1 in list(index.items()):
        for (p, q), k2 in list(index.items()):
            sign = -Q1 if (r2.degs[j] * r1.degs[p]) % 2 == 1 else Q1
            prod = emb(r1.product({i: Q1}, {p: Q1}),
                       r2.product({j: Q1}, {q: Q1}), sign)
            if prod:
                mult[(k1, k2)] = prod
    dmat = {}
    for (i, j), k1 in index.items():
        v = emb(r1.differential({i: Q1}), {j: Q1})
        sign = -Q1 if r1.degs[i] % 2 == 1 else Q1
        v = vec_add(v, vec_scale(emb({i: Q1}, r2.differential({j: Q1})), sign))
        if v:
            dmat[k1] = v
    aug = {}
    for (i, j), k1 in index.items():
        c = r1.aug.get(i, Q0) * r2.aug.get(j, Q0)
        if c:
            aug[k1] = c
    return ArtinianCdga(names, degs, unit, mult, dmat, aug)


_NAMED = {
    "k": ground_field,
    "fat-point": fat_point,
    "acyclic-cone": acyclic_cone_ring,
}


def named_ring(spec: str) -> ArtinianCdga:
    """Built-in constructors: "k", "k[t]/t^n", "square-zero(d1,d2,...)",
    "fat-point", "acyclic-cone"."""
    spec = spec.strip()
    if spec in _NAMED:
        return _NAMED[spec]()
    if spec.startswith("k[t]/t^"):
        return truncated_polynomial(int(spec[len("k[t]/t^"):]))
    if spec.startswith("square-zero(") and spec.endswith(")"):
        inner = spec[len("square-zero("):-1].strip()
        degrees = [int(x) for x in inner.split(",")] if inner else []
        return square_zero(degrees)
    raise ShapeError(f"unknown ring constructor {spec!r}")


# -- serialization -----------------------------------------------------------------

def ring_to_json(r: ArtinianCdga) -> dict:
    def fmt_vec(v):
        return [[r.names[i], str(c)] for i, c in sorted(v.items())]
    return {
        "basis": [{"name": n, "degree": d}
                  for n, d in zip(r.names, r.degs)],
        "unit": fmt_vec(r.unit),
        "multiplication": [
            {"left": r.names[i], "right": r.names[j], "result": fmt_vec(v)}
            for (i, j), v in sorted(r.mult.items())],
        "differential": [{"of": r.names[i], "result": fmt_vec(v)}
                         for i, v in sorted(r.dmat.items())],
        "augmentation": fmt_vec(r.aug),
    }


def ring_from_json(data: dict) -> ArtinianCdga:
    if isinstance(data, str):
        return named_ring(data)
    if "constructor" in data:
        return named_ring(data["constructor"])
    names = [b["name"] for b in data["basis"]]
    degs = [int(b["degree"]) for b in data["basis"]]
    pos = {n: i for i, n in enumerate(names)}

    def parse_vec(pairs):
        return {pos[n]: Fraction(c) for n, c in pairs}

    mult = {}
    for entry in data.get("multiplication", []):
        mult[(pos[entry["left"]], pos[entry["right"]])] = \
            parse_vec(entry["result"])
    dmat = {}
    for entry in data.get("differential", []):
        dmat[pos[entry["of"]]] = parse_vec(entry["result"])
    return ArtinianCdga(names, degs, parse_vec(data["unit"]), mult, dmat,
                        parse_vec(data["augmentation"]))
