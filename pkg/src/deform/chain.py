"""Complexes of finite-dimensional Q-vector spaces, with one sign convention.

Storage is always homological: a Complex keeps components at integer degrees
with differentials d_n : C_n -> C_{n-1}.  Cochain objects carry the
orientation flag "cochain" and are read through the involution u, under which
the cochain degree i component sits at stored degree -i.  Since u changes
neither components nor matrices, applying u just flips the flag.

Fixed conventions, inherited by every other module:

  * Hom complex:  Hom(M,N)^i = { f : M_j -> N_{j-i} for all j },
    with differential  df = d_N o f - (-1)^i f o d_M.
  * Tensor:  d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy   (stored degrees).
  * Map evaluation:  (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y).
  * Shift:  (M_[i])_m = M_{i+m}  with differential scaled by (-1)^i.
  * Cone of f : M -> N:  C_n = M_{n-1} (+) N_n,  d(m, x) = (-dm, dx - f m).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeMismatch, ShapeError
from .linalg import Matrix, Q0, Q1, Subquotient, vec_add, vec_scale

CHAIN = "chain"
COCHAIN = "cochain"


class GradedSpace:
    """Finite-support graded vector space with ordered basis labels."""

    __slots__ = ("dims", "labels")

    def __init__(self, dims: dict, labels: dict | None = None):
        self.dims = {int(n): int(d) for n, d in dims.items() if d}
        for n, d in self.dims.items():
            if d < 0:
                raise ShapeError(f"negative dimension {d} in degree {n}")
        self.labels = {}
        labels = labels or {}
        for n, d in self.dims.items():
            given = labels.get(n)
            if given is None:
                self.labels[n] = tuple(f"e{n}_{k}" for k in range(d))
            else:
                given = tuple(given)
                if len(given) != d or len(set(given)) != d:
                    raise ShapeError(f"bad labels in degree {n}")
                self.labels[n] = given

    def degrees(self) -> list:
        return sorted(self.dims)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __eq__(self, other):
        return (isinstance(other, GradedSpace) and self.dims == other.dims
                and self.labels == other.labels)


class Complex:
    """Chain complex, possibly flagged as a cochain object (see module doc)."""

    def __init__(self, space: GradedSpace, diff: dict | None = None,
                 orientation: str = CHAIN, check: bool = True):
        if orientation not in (CHAIN, COCHAIN):
            raise ShapeError(f"bad orientation {orientation!r}")
        self.space = space
        self.orientation = orientation
        self.diff = {}
        diff = diff or {}
        for n, m in diff.items():
            n = int(n)
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(m)
            expected = (self.space.dim(n - 1), self.space.dim(n))
            if (m.nrows, m.ncols) != expected:
                raise ShapeError(
                    f"differential at degree {n} has shape "
                    f"{m.nrows}x{m.ncols}, expected {expected[0]}x{expected[1]}")
            if m.entries:
                self.diff[n] = m
        if check:
            self.validate()

    # -- basic access ----------------------------------------------------------

    def degrees(self) -> list:
        return self.space.degrees()

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def total_dim(self) -> int:
        return self.space.total_dim()

    def labels(self, n: int):
        return self.space.labels.get(n, ())

    def d(self, n: int) -> Matrix:
        m = self.diff.get(n)
        if m is None:
            m = Matrix.zero(self.dim(n - 1), self.dim(n))
        return m

    def validate(self):
        for n in list(self.diff):
            prod = self.d(n - 1) * self.d(n)
            if not prod.is_zero():
                raise ShapeError(f"d o d != 0 from degree {n}")

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return False
        if self.orientation != other.orientation:
            return False
        if self.space.dims != other.space.dims:
            return False
        return all(self.d(n) == other.d(n)
                   for n in set(self.diff) | set(other.diff))

    def __repr__(self):
        dims = {n: self.dim(n) for n in self.degrees()}
        return f"Complex({self.orientation}, dims={dims})"

    # -- cochain access --------------------------------------------------------

    def dim_co(self, i: int) -> int:
        return self.dim(-i)

    def labels_co(self, i: int):
        return self.labels(-i)

    def d_co(self, i: int) -> Matrix:
        """Matrix of the cochain differential from cochain degree i."""
        return self.d(-i)

    def degrees_co(self) -> list:
        return sorted(-n for n in self.degrees())

    def positions(self, n: int) -> dict:
        """label -> index lookup for the degree-n basis."""
        cache = getattr(self, "_positions", None)
        if cache is None:
            cache = self._positions = {}
        if n not in cache:
            cache[n] = {lab: k for k, lab in enumerate(self.labels(n))}
        return cache[n]


def u(c: Complex) -> Complex:
    """Rewrite a chain complex as a cochain complex or back: flips the flag,
    components and matrices are unchanged (cochain degree i = stored -i)."""
    flipped = COCHAIN if c.orientation == CHAIN else CHAIN
    return Complex(c.space, c.diff, orientation=flipped, check=False)


def zero_complex(orientation: str = CHAIN) -> Complex:
    return Complex(GradedSpace({}), {}, orientation)


def point(degree: int = 0, orientation: str = CHAIN,
          label: str = "k") -> Complex:
    """The ground field in a single degree."""
    return Complex(GradedSpace({degree: 1}, {degree: (label,)}), {},
                   orientation)


def direct_sum(a: Complex, b: Complex) -> Complex:
    if a.orientation != b.orientation:
        raise ShapeError("direct sum needs matching orientations")
    dims = {}
    labels = {}
    for n in set(a.degrees()) | set(b.degrees()):
        dims[n] = a.dim(n) + b.dim(n)
        labels[n] = tuple(("L", lab) for lab in a.labels(n)) + \
            tuple(("R", lab) for lab in b.labels(n))
    diff = {}
    for n in set(a.diff) | set(b.diff):
        da, db = a.d(n), b.d(n)
        ent = dict(da.entries)
        for (i, j), cval in db.entries.items():
            ent[(i + a.dim(n - 1), j + a.dim(n))] = cval
        diff[n] = Matrix(dims.get(n - 1, a.dim(n - 1) + b.dim(n - 1)),
                         dims.get(n, a.dim(n) + b.dim(n)), ent)
    return Complex(GradedSpace(dims, labels), diff, a.orientation)


def shift(c: Complex, i: int) -> Complex:
    """(M_[i])_m = M_{i+m}, differential scaled by (-1)^i.

    For cochain-flagged objects the cochain shift M^[j] is shift(c, -j).
    """
    dims = {n - i: c.dim(n) for n in c.degrees()}
    labels = {n - i: c.labels(n) for n in c.degrees()}
    sign = Q1 if i % 2 == 0 else -Q1
    diff = {n - i: c.d(n).scale(sign) for n in c.diff}
    return Complex(GradedSpace(dims, labels), diff, c.orientation, check=False)


def shift_co(c: Complex, j: int) -> Complex:
    """Cochain-indexed shift M^[j]; equals shift by -j on stored degrees."""
    return shift(c, -j)


class ChainMap:
    """Graded map of complexes, stored degree r: components C_n -> D_{n+r}.

    A ChainMap is just a collection of matrices (an element of the Hom
    complex); closedness is a property, tested via `hom_d`.
    """

    def __init__(self, source: Complex, target: Complex, degree: int = 0,
                 mats: dict | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        self.mats = {}
        for n, m in (mats or {}).items():
            n = int(n)
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(m)
            expected = (target.dim(n + degree), source.dim(n))
            if (m.nrows, m.ncols) != expected:
                raise ShapeError(
                    f"map component at degree {n}: shape {m.nrows}x{m.ncols},"
                    f" expected {expected[0]}x{expected[1]}")
            if m.entries:
                self.mats[n] = m

    def mat(self, n: int) -> Matrix:
        m = self.mats.get(n)
        if m is None:
            m = Matrix.zero(self.target.dim(n + self.degree),
                            self.source.dim(n))
        return m

    @staticmethod
    def identity(c: Complex) -> "ChainMap":
        return ChainMap(c, c, 0,
                        {n: Matrix.identity(c.dim(n)) for n in c.degrees()})

    @staticmethod
    def zero(source: Complex, target: Complex, degree: int = 0) -> "ChainMap":
        return ChainMap(source, target, degree, {})

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        if other.target is not self.source and \
                other.target.space.dims != self.source.space.dims:
            raise ShapeError("composition mismatch")
        mats = {}
        for n in other.source.degrees():
            m = self.mat(n + other.degree) * other.mat(n)
            if not m.is_zero():
                mats[n] = m
        return ChainMap(other.source, self.target,
                        self.degree + other.degree, mats)

    def add(self, other: "ChainMap") -> "ChainMap":
        if self.degree != other.degree:
            raise DegreeMismatch("adding maps of different degrees")
        mats = {}
        for n in set(self.mats) | set(other.mats):
            mats[n] = self.mat(n) + other.mat(n)
        return ChainMap(self.source, self.target, self.degree, mats)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, self.degree,
                        {n: m.scale(c) for n, m in self.mats.items()})

    def sub(self, other: "ChainMap") -> "ChainMap":
        return self.add(other.scale(-1))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def __eq__(self, other):
        if not isinstance(other, ChainMap) or self.degree != other.degree:
            return False
        return all(self.mat(n) == other.mat(n)
                   for n in set(self.mats) | set(other.mats))

    def apply(self, n: int, v: dict) -> dict:
        """Apply to a sparse vector in source degree n."""
        return self.mat(n).apply(v)

    def is_chain_map(self) -> bool:
        """Closedness in the Hom complex: d_N f = (-1)^r f d_M."""
        return hom_d(self).is_zero()


def hom_d(f: ChainMap) -> ChainMap:
    """Hom-complex differential of f (as a map of stored degree r = -i):
    df = d_N o f - (-1)^i f o d_M with i = -r."""
    r = f.degree
    sign = Q1 if (-r) % 2 == 0 else -Q1
    mats = {}
    degs = set(f.source.degrees())
    for n in degs:
        m = f.target.d(n + r) * f.mat(n) - (f.mat(n - 1) * f.source.d(n)).scale(sign)
        if not m.is_zero():
            mats[n] = m
    return ChainMap(f.source, f.target, r - 1, mats)


def cone(f: ChainMap) -> Complex:
    """Mapping cone of a degree-0 map: C_n = M_{n-1} (+) N_n,
    d(m, x) = (-d m, d x - f m)."""
    if f.degree != 0:
        raise DegreeMismatch("cone needs a degree-0 map")
    msrc, mtgt = f.source, f.target
    dims, labels = {}, {}
    degs = set()
    for n in msrc.degrees():
        degs.add(n + 1)
    degs.update(mtgt.degrees())
    for n in degs:
        dims[n] = msrc.dim(n - 1) + mtgt.dim(n)
        labels[n] = tuple(("M", lab) for lab in msrc.labels(n - 1)) + \
            tuple(("N", lab) for lab in mtgt.labels(n))
    diff = {}
    for n in degs:
        rows = dims.get(n - 1, msrc.dim(n - 2) + mtgt.dim(n - 1))
        cols = dims[n]
        ent = {}
        dm = msrc.d(n - 1)
        for (i, j), c in dm.entries.items():
            ent[(i, j)] = -c
        fm = f.mat(n - 1)
        for (i, j), c in fm.entries.items():
            ent[(i + msrc.dim(n - 2), j)] = -c
        dn = mtgt.d(n)
        for (i, j), c in dn.entries.items():
            ent[(i + msrc.dim(n - 2), j + msrc.dim(n - 1))] = c
        diff[n] = Matrix(rows, cols, ent)
    return Complex(GradedSpace(dims, labels), diff, msrc.orientation)


def cone_of_identity(c: Complex) -> Complex:
    return cone(ChainMap.identity(c))


def shift_cone(c: Complex, kind) -> Complex:
    """Spec-surface dispatcher: kind = ("shift", i) or "cone" (cone of id)."""
    if kind == "cone":
        return cone_of_identity(c)
    if isinstance(kind, tuple) and len(kind) == 2 and kind[0] == "shift":
        return shift(c, int(kind[1]))
    raise ShapeError(f"unknown shift_cone kind {kind!r}")


# -- tensor products ----------------------------------------------------------

def tensor_product(factors: list) -> Complex:
    """Total tensor complex with flat basis labels: a degree-n basis element
    is a tuple ((d_1, a_1), ..., (d_k, a_k)) of per-factor (degree, index)."""
    if not factors:
        raise ShapeError("empty tensor product")
    orientation = factors[0].orientation
    for f in factors:
        if f.orientation != orientation:
            raise ShapeError("tensor of mixed orientations")
    # enumerate label tuples factor by factor, keyed by total degree
    basis = {0: [()]}
    for f in factors:
        nxt = {}
        for total, labs in basis.items():
            for n in f.degrees():
                for idx in range(f.dim(n)):
                    for lab in labs:
                        nxt.setdefault(total + n, []).append(lab + ((n, idx),))
        basis = nxt
    dims = {n: len(v) for n, v in basis.items()}
    lab_dict = {n: tuple(v) for n, v in basis.items()}
    space = GradedSpace(dims, lab_dict)
    # differential: sum over slots with Koszul sign of preceding degrees
    diff = {}
    for n, labs in lab_dict.items():
        tgt = lab_dict.get(n - 1, ())
        pos = {lab: k for k, lab in enumerate(tgt)}
        ent = {}
        for col, lab in enumerate(labs):
            for slot, (dgr, idx) in enumerate(lab):
                dmat = factors[slot].d(dgr)
                if dmat.is_zero():
                    continue
                sgn = Q1 if sum(p[0] for p in lab[:slot]) % 2 == 0 else -Q1
                for (i2, j2), c in dmat.entries.items():
                    if j2 != idx:
                        continue
                    newlab = lab[:slot] + ((dgr - 1, i2),) + lab[slot + 1:]
                    row = pos[newlab]
                    s = ent.get((row, col), Q0) + sgn * c
                    if s:
                        ent[(row, col)] = s
                    else:
                        ent.pop((row, col), None)
        if ent:
            diff[n] = Matrix(len(tgt), len(labs), ent)
    return Complex(space, diff, orientation)


def tensor(a: Complex, b: Complex) -> Complex:
    """Binary tensor product (flat two-slot labels)."""
    return tensor_product([a, b])


def tensor_power(c: Complex, n: int) -> Complex:
    if n < 1:
        raise ShapeError("tensor power needs n >= 1")
    return tensor_product([c] * n)


def tensor_product_map(maps: list, source: Complex, target: Complex) -> ChainMap:
    """f_1 (x) ... (x) f_k on flat tensor complexes, with Koszul signs
    (-1)^{ sum_j |f_j| * (|x_1| + ... + |x_{j-1}|) }."""
    degree = sum(f.degree for f in maps)
    mats = {}
    for n in source.degrees():
        labs = source.labels(n)
        tgt_pos = target.positions(n + degree)
        ent = {}
        for col, lab in enumerate(labs):
            if len(lab) != len(maps):
                raise ShapeError("label arity mismatch in tensor map")
            # image of each slot, with Koszul sign (-1)^{|f_j| * prefix degree}
            prefix_deg = 0
            images = []
            ok = True
            for slot, (dgr, idx) in enumerate(lab):
                f = maps[slot]
                colvec = f.mat(dgr).col(idx)
                if f.degree % 2 == 1 and prefix_deg % 2 == 1:
                    colvec = {i: -c for i, c in colvec.items()}
                if not colvec:
                    ok = False
                    break
                images.append((dgr + f.degree, colvec))
                prefix_deg += dgr
            if not ok:
                continue
            # expand the product of images
            terms = [((), Q1)]
            for slot, (tdgr, colvec) in enumerate(images):
                nxt = []
                for labp, coeff in terms:
                    for i2, c in colvec.items():
                        nxt.append((labp + ((tdgr, i2),), coeff * c))
                terms = nxt
            for newlab, coeff in terms:
                row = tgt_pos.get(newlab)
                if row is None:
                    raise ShapeError("image label missing in target complex")
                s = ent.get((row, col), Q0) + coeff
                if s:
                    ent[(row, col)] = s
                else:
                    ent.pop((row, col), None)
        if ent:
            mats[n] = Matrix(target.dim(n + degree), source.dim(n), ent)
    return ChainMap(source, target, degree, mats)


# -- Hom complexes -------------------------------------------------------------

def hom_complex(m: Complex, n: Complex) -> Complex:
    """Cochain-flagged complex with Hom^i = maps M_j -> N_{j-i} and
    differential df = d_N o f - (-1)^i f o d_M.  Basis labels (j, a, b)."""
    degrees_i = set()
    for j in m.degrees():
        for jn in n.degrees():
            degrees_i.add(j - jn)
    dims, labels = {}, {}
    for i in degrees_i:
        labs = []
        for j in m.degrees():
            for a in range(m.dim(j)):
                for b in range(n.dim(j - i)):
                    labs.append((j, a, b))
        if labs:
            dims[-i] = len(labs)
            labels[-i] = tuple(labs)
    space = GradedSpace(dims, labels)
    diff = {}
    for i in sorted(degrees_i):
        # stored chain degree -i; matrix maps stored -i -> stored -i-1,
        # i.e. cochain degree i -> i+1
        src = labels.get(-i, ())
        tgt = labels.get(-i - 1, ())
        if not src or not tgt:
            continue
        pos = {lab: k for k, lab in enumerate(tgt)}
        sign = Q1 if i % 2 == 0 else -Q1
        ent = {}
        for col, (j, a, b) in enumerate(src):
            for (c2, b2), coeff in n.d(j - i).entries.items():
                if b2 != b:
                    continue
                row = pos.get((j, a, c2))
                if row is not None:
                    s = ent.get((row, col), Q0) + coeff
                    if s:
                        ent[(row, col)] = s
                    else:
                        ent.pop((row, col), None)
            for (a2, a3), coeff in m.d(j + 1).entries.items():
                if a2 != a:
                    continue
                row = pos.get((j + 1, a3, b))
                if row is not None:
                    s = ent.get((row, col), Q0) - sign * coeff
                    if s:
                        ent[(row, col)] = s
                    else:
                        ent.pop((row, col), None)
        if ent:
            diff[-i] = Matrix(len(tgt), len(src), ent)
    return Complex(space, diff, COCHAIN)


def hom_to_map(h: Complex, i: int, v: dict, m: Complex, n: Complex) -> ChainMap:
    """Convert a vector in Hom^i (stored degree -i of h) into a ChainMap of
    stored degree -i from m to n."""
    labs = h.labels(-i)
    mats = {}
    for idx, coeff in v.items():
        j, a, b = labs[idx]
        mat = mats.setdefault(j, {})
        key = (b, a)
        mat[key] = mat.get(key, Q0) + coeff
    built = {}
    for j, ent in mats.items():
        built[j] = Matrix(n.dim(j - i), m.dim(j), ent)
    return ChainMap(m, n, -i, built)


def map_to_hom(h: Complex, f: ChainMap) -> tuple[int, dict]:
    """Inverse of hom_to_map; returns (cochain degree i, sparse vector)."""
    i = -f.degree
    pos = h.positions(-i)
    v = {}
    for j, mat in f.mats.items():
        for (b, a), coeff in mat.entries.items():
            v[pos[(j, a, b)]] = coeff
    return i, v


def hom_element_compose(h_gf: Complex, hg: Complex, hf: Complex,
                        g: tuple, f: tuple,
                        mid: Complex, src: Complex, tgt: Complex) -> dict:
    """Compose Hom-complex elements g in Hom(mid,tgt)^p, f in Hom(src,mid)^q
    to Hom(src,tgt)^{p+q}; inputs/outputs are (degree, vector) pairs."""
    (p, gv), (q, fv) = g, f
    gmap = hom_to_map(hg, p, gv, mid, tgt)
    fmap = hom_to_map(hf, q, fv, src, mid)
    comp = gmap.compose(fmap)
    return map_to_hom(h_gf, comp)[1]


# -- homology -------------------------------------------------------------------

def homology(c: Complex, n: int) -> Subquotient:
    """H_n = ker(d_n)/im(d_{n+1}) with explicit cycle representatives and a
    class-membership test (stored degree n)."""
    dn = c.d(n)
    dn1 = c.d(n + 1)
    cycles = dn.nullspace()
    boundaries = [dn1.col(j) for j in range(dn1.ncols)]
    return Subquotient(cycles, boundaries, c.dim(n))


def homology_dim(c: Complex, n: int) -> int:
    return homology(c, n).dimension


def homology_co(c: Complex, i: int) -> Subquotient:
    """Cohomology in cochain degree i of a cochain-flagged complex."""
    return homology(c, -i)


def is_acyclic(c: Complex) -> bool:
    return all(homology(c, n).dimension == 0 for n in c.degrees())


# -- serialization ---------------------------------------------------------------

def complex_to_json(c: Complex) -> dict:
    def fmt(m: Matrix):
        return [[str(x) for x in row] for row in m.rows()]
    return {
        "orientation": c.orientation,
        "dims": {str(n): c.dim(n) for n in c.degrees()},
        "labels": {str(n): [str(lab) for lab in c.labels(n)]
                   for n in c.degrees()},
        "d": {str(n): fmt(c.d(n)) for n in sorted(c.diff)},
    }


def complex_from_json(data: dict) -> Complex:
    dims = {int(n): d for n, d in data.get("dims", {}).items()}
    labels = None
    if "labels" in data:
        labels = {int(n): tuple(v) for n, v in data["labels"].items()}
    diff = {}
    for n, rows in data.get("d", {}).items():
        diff[int(n)] = Matrix.from_rows(
            [[Fraction(x) for x in row] for row in rows])
    return Complex(GradedSpace(dims, labels), diff,
                   data.get("orientation", CHAIN))
