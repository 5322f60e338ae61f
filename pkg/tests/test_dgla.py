"""Maurer-Cartan calculus: residuals, gauges, BCH, lifting, tangent spaces."""

from fractions import Fraction
from random import Random

import pytest

from deform.chain import hom_d, homology_co, tensor, u
from deform.dgla import (EndDgla, Equivalent, GaugePath, Inequivalent,
                         KernelContext, Lifted, Obstructed, TableDgla,
                         TensorDgla, Undecided, abelian_dgla, bch, gauge_act,
                         gauge_equivalent, gauge_to_path, gvec_is_zero,
                         gvec_sub, is_mc, lift_mc, lift_torsor_action,
                         mc_residual, nilpotent_dgla, tangent_defs)
from deform.errors import (DegreeMismatch, NotMaurerCartan, RingNotSquareZero,
                           ShapeError, TruncationTooSmall)
from deform.linalg import Matrix, Q1, vec_eq
from deform.rings import (ArtinianCdga, acyclic_cone_ring, fat_point,
                          ground_field, madic_tower, square_zero,
                          truncated_polynomial)
from deform.sampling import (quadratic_cone_dgla, random_complex, random_dgla,
                             random_gauge, random_mc, random_ring,
                             random_square_zero_ring)


def kt(n):
    return truncated_polynomial(n)


def test_quadratic_cone_validates():
    quadratic_cone_dgla()  # constructor runs the full validator


def test_end_dgla_structure():
    rng = Random(1)
    for _ in range(5):
        l = EndDgla(random_complex(rng, max_dim=3, lo=-1, hi=1))
        keys = list(l.basis())[:6]
        l.check_antisymmetry(keys)
        l.check_derivation(keys)
        l.check_jacobi((a, b, c) for a in keys for b in keys for c in keys)


def test_mc_residual_trivial():
    l = quadratic_cone_dgla()
    t = nilpotent_dgla(l, kt(3))
    assert mc_residual(t, {}) == {}
    # abelian: any closed degree-1 element is MC
    rng = Random(2)
    la = abelian_dgla(u(random_complex(rng)))
    ta = nilpotent_dgla(la, kt(3))
    cx = ta.complex()
    for v in cx.d_co(1).nullspace():
        w = ta.component_to_vec(v, 1)
        assert is_mc(ta, w)


def test_mc_residual_quadratic_cone_example():
    # omega = t*x over k[t]/t^3: residual is t^2 * y; over k[t]/t^2 it is 0
    l = quadratic_cone_dgla()
    r3 = kt(3)
    t3 = nilpotent_dgla(l, r3)
    omega = t3.element({0: {1: Q1}})          # x (x) t
    res = mc_residual(t3, omega)
    expected = t3.element({1: {2: Q1}})       # y (x) t^2
    assert gvec_is_zero(gvec_sub(res, expected))
    t2 = nilpotent_dgla(l, kt(2))
    omega2 = t2.element({0: {1: Q1}})
    assert is_mc(t2, omega2)


def test_mc_degree_check():
    l = quadratic_cone_dgla()
    t = nilpotent_dgla(l, kt(2))
    bad = t.element({1: {1: Q1}})  # y has degree 2
    with pytest.raises(DegreeMismatch):
        mc_residual(t, bad)


def test_gauge_trivial_and_square_zero():
    rng = Random(3)
    for _ in range(10):
        l = random_dgla(rng)
        r = random_square_zero_ring(rng)
        t = nilpotent_dgla(l, r)
        omega = random_mc(rng, t)
        assert gauge_act(t, {}, omega) == omega
        alpha = random_gauge(rng, t)
        # m^2 = 0: action reduces to omega - d(alpha)
        expected = gvec_sub(omega, t.d_vec(alpha))
        assert gvec_is_zero(gvec_sub(gauge_act(t, alpha, omega), expected))


def test_gauge_abelian_any_ring():
    rng = Random(4)
    for _ in range(8):
        la = abelian_dgla(u(random_complex(rng)))
        r = random_ring(rng)
        t = nilpotent_dgla(la, r)
        omega = random_mc(rng, t)
        alpha = random_gauge(rng, t)
        expected = gvec_sub(omega, t.d_vec(alpha))
        assert gvec_is_zero(gvec_sub(gauge_act(t, alpha, omega), expected))


def test_gauge_preserves_mc_and_action_property():
    rng = Random(5)
    for _ in range(25):
        l = random_dgla(rng)
        r = random_ring(rng)
        t = nilpotent_dgla(l, r)
        omega = random_mc(rng, t)
        assert is_mc(t, omega)
        a = random_gauge(rng, t)
        b = random_gauge(rng, t)
        assert is_mc(t, gauge_act(t, a, omega))
        lhs = gauge_act(t, bch(t, a, b), omega)
        rhs = gauge_act(t, a, gauge_act(t, b, omega))
        assert gvec_is_zero(gvec_sub(lhs, rhs))


def test_bch_unit_inverse_abelian():
    rng = Random(6)
    l = random_dgla(rng)
    t = nilpotent_dgla(l, kt(4))
    a = random_gauge(rng, t)
    assert gvec_is_zero(gvec_sub(bch(t, a, {}), a))
    assert gvec_is_zero(gvec_sub(bch(t, {}, a), a))
    assert gvec_is_zero(bch(t, a, {k: -c for k, c in a.items()}))
    la = abelian_dgla(u(random_complex(rng)))
    ta = nilpotent_dgla(la, kt(4))
    x = random_gauge(rng, ta)
    y = random_gauge(rng, ta)
    s = dict(x)
    for k, c in y.items():
        s[k] = s.get(k, 0) + c
    s = {k: c for k, c in s.items() if c}
    assert gvec_is_zero(gvec_sub(bch(ta, x, y), s))


def test_bch_m_cubed_zero_formula():
    # m^3 = 0: bch(a, b) = a + b + [a,b]/2 exactly
    rng = Random(7)
    for _ in range(10):
        l = random_dgla(rng)
        t = nilpotent_dgla(l, kt(3))
        a = random_gauge(rng, t)
        b = random_gauge(rng, t)
        manual = dict(a)
        for k, c in b.items():
            manual[k] = manual.get(k, 0) + c
        half = t.bracket_vec(a, b)
        for k, c in half.items():
            manual[k] = manual.get(k, 0) + Fraction(1, 2) * c
        manual = {k: c for k, c in manual.items() if c}
        assert gvec_is_zero(gvec_sub(bch(t, a, b), manual))


def test_bch_associative_up_to_class():
    rng = Random(8)
    for _ in range(8):
        l = random_dgla(rng)
        t = nilpotent_dgla(l, random_ring(rng))
        a, b, c = (random_gauge(rng, t, 1) for _ in range(3))
        lhs = bch(t, bch(t, a, b), c)
        rhs = bch(t, a, bch(t, b, c))
        assert gvec_is_zero(gvec_sub(lhs, rhs))


# -- faithful-representation cross-check ---------------------------------------

def matrix_rep(t: TensorDgla, l: EndDgla, ring: ArtinianCdga, v: dict,
               vr, positions):
    """Element of End(V) (x) m as a ChainMap on V (x) R."""
    from deform.chain import ChainMap
    deg = t.degree_of_vec(v)
    if deg is None:
        return None
    mats = {}
    for (lk, ak), coeff in v.items():
        fmap = l.element_to_map({lk: Q1})
        ring_vec = t.coeff.vectors[ak]
        rdeg = ring.degree_of(ring_vec)
        for n in l.source.degrees():
            fm = fmap.mat(n)
            if fm.is_zero():
                continue
            for (b, a), fc in fm.entries.items():
                for i, rc in ring_vec.items():
                    for j, rj in enumerate(ring.names):
                        prod = ring.product({i: Q1}, {j: Q1})
                        if not prod:
                            continue
                        sign = -1 if (rdeg * n) % 2 else 1
                        jdeg = ring.degs[j]
                        col = positions[(n, a, jdeg, j)]
                        for k2, pc in prod.items():
                            k2deg = ring.degs[k2]
                            row = positions[(n + fmap.degree, b, k2deg, k2)]
                            key = (n + jdeg, row, col)
                            mats.setdefault(n + jdeg, {})[(row, col)] = \
                                mats.get(n + jdeg, {}).get((row, col), 0) + \
                                sign * coeff * fc * rc * pc
    built = {}
    for n, ent in mats.items():
        ent = {k: c for k, c in ent.items() if c}
        if ent:
            built[n] = Matrix(vr.dim(n + deg * -1), vr.dim(n), ent)
    return ChainMap(vr, vr, -deg, built)


def build_vr(l: EndDgla, ring: ArtinianCdga):
    """V (x) R as a complex, with positions (vdeg, vidx, rdeg, ridx) -> index."""
    rc = ring.underlying_complex()
    vr = tensor(l.source, rc)
    by_deg = ring.by_degree()
    flat_pos = {}
    for d, idxs in by_deg.items():
        for p, i in enumerate(idxs):
            flat_pos[i] = (d, p)
    positions = {}
    for n in vr.degrees():
        for q, lab in enumerate(vr.labels(n)):
            (vd, vi), (rd, ri_local) = lab
            ridx = by_deg[rd][ri_local]
            positions[(vd, vi, rd, ridx)] = None
    # positions keyed by (vdeg, vidx, rdeg, flat ring index) -> row in degree
    positions = {}
    for n in vr.degrees():
        for q, lab in enumerate(vr.labels(n)):
            (vd, vi), (rd, ri_local) = lab
            ridx = by_deg[rd][ri_local]
            positions[(vd, vi, rd, ridx)] = q
    return vr, positions


def test_gauge_matches_enveloping_formula():
    # the paper-style formula g w g^{-1} - (dg) g^{-1} evaluated with honest
    # matrices on V (x) R agrees with the operator-series gauge action
    rng = Random(9)
    checked = 0
    while checked < 8:
        v = random_complex(rng, max_dim=2, lo=0, hi=1)
        if v.total_dim() == 0:
            continue
        l = EndDgla(v)
        ring = random_ring(rng, max_nilpotency=3)
        t = nilpotent_dgla(l, ring)
        omega = random_mc(rng, t, height=1)
        alpha = random_gauge(rng, t, height=1)
        if not omega and not alpha:
            continue
        vr, positions = build_vr(l, ring)
        from deform.chain import ChainMap
        rep = lambda x: matrix_rep(t, l, ring, x, vr, positions)
        alpha_hat = rep(alpha)
        if alpha_hat is None:
            alpha_hat = ChainMap.zero(vr, vr, 0)
        # g = exp(alpha_hat), g_inv = exp(-alpha_hat): nilpotent, finite sums
        g = ChainMap.identity(vr)
        ginv = ChainMap.identity(vr)
        term = ChainMap.identity(vr)
        k = 1
        while not term.is_zero() and k < 12:
            term = alpha_hat.compose(term).scale(Fraction(1, k))
            g = g.add(term)
            ginv = ginv.add(term.scale((-1) ** k))
            k += 1
        omega_hat = rep(omega)
        if omega_hat is None:
            omega_hat = ChainMap.zero(vr, vr, -1)
        dg = hom_d(g)
        formula = g.compose(omega_hat).compose(ginv).sub(dg.compose(ginv))
        acted = gauge_act(t, alpha, omega)
        acted_hat = rep(acted)
        if acted_hat is None:
            acted_hat = ChainMap.zero(vr, vr, -1)
        assert formula == acted_hat
        checked += 1


# -- lifting -------------------------------------------------------------------

def test_lift_trivial():
    l = quadratic_cone_dgla()
    tower = madic_tower(kt(3))
    res = lift_mc(l, tower[1], {})
    assert isinstance(res, Lifted)
    assert res.value == {}


def test_lift_obstructed_example():
    # omega_bar = t*x over k[t]/t^2 is MC; lifting to k[t]/t^3 hits the
    # obstruction class [y (x) t^2] != 0 (d = 0, so nothing is exact)
    l = quadratic_cone_dgla()
    tower = madic_tower(kt(3))
    step = tower[1]          # k[t]/t^2 <- k[t]/t^3
    t_quot = nilpotent_dgla(l, step.quotient)
    omega_bar = t_quot.element({0: {1: Q1}})
    res = lift_mc(l, step, omega_bar)
    assert isinstance(res, Obstructed)
    assert not res.obstruction.is_zero()
    # the cocycle is y (x) t^2 in L (x) I coordinates
    ctx = KernelContext(l, step)
    emb = ctx.embed(res.obstruction.cocycle)
    t_tot = nilpotent_dgla(l, step.total)
    expected = t_tot.element({1: {2: Q1}})
    assert gvec_is_zero(gvec_sub(emb, expected))


def test_lift_unobstructed_when_h2_zero():
    # abelian DGLA concentrated in degree 1 with zero differential has
    # H^2(L (x) I) = 0, so every MC element lifts
    rng = Random(10)
    from deform.chain import Complex, GradedSpace
    la = abelian_dgla(Complex(GradedSpace({-1: 2}), {}, "cochain"))
    for r in (kt(3), kt(4)):
        tower = madic_tower(r)
        for step in tower:
            t_quot = nilpotent_dgla(la, step.quotient)
            for _ in range(3):
                omega = random_mc(rng, t_quot)
                res = lift_mc(la, step, omega)
                assert isinstance(res, Lifted)


def test_lift_class_independent_of_section():
    rng = Random(11)
    l = quadratic_cone_dgla()
    tower = madic_tower(kt(3))
    step = tower[1]
    t_quot = nilpotent_dgla(l, step.quotient)
    omega_bar = t_quot.element({0: {1: Q1}})
    base = lift_mc(l, step, omega_bar)
    assert isinstance(base, Obstructed)
    ctx = KernelContext(l, step)
    # perturb the linear lift by arbitrary degree-1 elements of L (x) I
    keys1 = ctx.tensor.basis_of_degree(1)
    for _ in range(6):
        tweak = {}
        for k in keys1:
            c = rng.randint(-2, 2)
            if c:
                tweak[k] = Fraction(c)
        res = lift_mc(l, step, omega_bar, section_tweak=tweak)
        assert isinstance(res, Obstructed)
        assert res.obstruction.coordinates == base.obstruction.coordinates


def test_lift_torsor():
    # when a lift exists, adding any degree-1 cocycle of L (x) I gives
    # another lift, and any two lifts differ by such a cocycle
    rng = Random(12)
    la = abelian_dgla(u(random_complex(rng, max_dim=3)))
    tower = madic_tower(kt(3))
    step = tower[1]
    t_quot = nilpotent_dgla(la, step.quotient)
    t_tot = nilpotent_dgla(la, step.total)
    omega = random_mc(rng, t_quot)
    res = lift_mc(la, step, omega)
    assert isinstance(res, Lifted)
    ctx = KernelContext(la, step)
    cx = ctx.tensor.complex()
    for zc in cx.d_co(1).nullspace():
        z = ctx.tensor.component_to_vec(zc, 1)
        other = lift_torsor_action(la, step, res.value, z)
        assert is_mc(t_tot, other)
        diff = ctx.restrict(gvec_sub(other, res.value))
        assert gvec_is_zero(ctx.tensor.d_vec(diff))


# -- gauge equivalence -----------------------------------------------------------

def test_gauge_equivalent_reflexive():
    rng = Random(13)
    l = random_dgla(rng)
    t = nilpotent_dgla(l, kt(3))
    omega = random_mc(rng, t)
    res = gauge_equivalent(l, kt(3), omega, omega)
    assert isinstance(res, Equivalent)
    assert gvec_is_zero(gvec_sub(gauge_act(t, res.witness, omega), omega))


def test_gauge_equivalent_square_zero_positive():
    rng = Random(14)
    found = 0
    while found < 6:
        l = random_dgla(rng)
        r = random_square_zero_ring(rng)
        t = nilpotent_dgla(l, r)
        omega = random_mc(rng, t)
        alpha = random_gauge(rng, t)
        omega2 = gauge_act(t, alpha, omega)
        res = gauge_equivalent(l, r, omega, omega2)
        assert isinstance(res, Equivalent)
        assert gvec_is_zero(
            gvec_sub(gauge_act(t, res.witness, omega), omega2))
        found += 1


def test_gauge_equivalent_square_zero_negative():
    # abelian DGLA with zero differential: orbits are singletons, distinct
    # closed elements are inequivalent with a stage-1 certificate
    from deform.chain import Complex, GradedSpace
    la = abelian_dgla(Complex(GradedSpace({-1: 1}), {}, "cochain"))
    r = kt(2)
    t = nilpotent_dgla(la, r)
    omega = t.element({0: {1: Q1}})
    res = gauge_equivalent(la, r, {}, omega)
    assert isinstance(res, Inequivalent)
    assert res.stage == 1


def test_gauge_equivalent_deeper_ring():
    rng = Random(15)
    done = 0
    while done < 5:
        l = random_dgla(rng)
        r = rng.choice([kt(3), fat_point(), acyclic_cone_ring()])
        t = nilpotent_dgla(l, r)
        omega = random_mc(rng, t, height=1)
        alpha = random_gauge(rng, t, height=1)
        omega2 = gauge_act(t, alpha, omega)
        res = gauge_equivalent(l, r, omega, omega2)
        # the search is sound: whenever it decides, the verdict is verified
        if isinstance(res, Equivalent):
            assert gvec_is_zero(
                gvec_sub(gauge_act(t, res.witness, omega), omega2))
            done += 1
        else:
            assert isinstance(res, Undecided)


def test_gauge_equivalent_requires_mc():
    l = quadratic_cone_dgla()
    r = kt(3)
    t = nilpotent_dgla(l, r)
    omega = t.element({0: {1: Q1}})  # not MC over k[t]/t^3
    with pytest.raises(NotMaurerCartan):
        gauge_equivalent(l, r, omega, omega)


# -- tangent space ----------------------------------------------------------------

def test_tangent_square_zero_guard():
    l = quadratic_cone_dgla()
    with pytest.raises(RingNotSquareZero):
        tangent_defs(l, kt(3))


def test_tangent_abelian_matches_h1():
    rng = Random(16)
    for _ in range(6):
        c = u(random_complex(rng))
        la = abelian_dgla(c)
        ts = tangent_defs(la, kt(2))
        assert ts.dimension == homology_co(c, 1).dimension


def test_tangent_sum_formula():
    # tangent dim = sum_j dim H^{1+j}(L) * dim H_j(m): Kunneth for the
    # square-zero complex L (x) m; with d = 0 on m this is the usual
    # sum over the m-basis degrees
    rng = Random(17)
    for _ in range(8):
        l = random_dgla(rng)
        r = random_square_zero_ring(rng)
        cx = l.complex()
        from deform.dgla import IdealCoefficients
        from deform.chain import Complex, GradedSpace, homology_dim
        coeff = IdealCoefficients(r)
        by_deg = {}
        for k in coeff.keys():
            by_deg.setdefault(coeff.chain_degree(k), []).append(k)
        dims = {d: len(ks) for d, ks in by_deg.items()}
        diff = {}
        for d, ks in by_deg.items():
            tgt = by_deg.get(d - 1, [])
            ent = {}
            for col, k in enumerate(ks):
                for k2, c in coeff.d(k).items():
                    ent[(tgt.index(k2), col)] = c
            if ent:
                diff[d] = Matrix(len(tgt), len(ks), ent)
        mcomplex = Complex(GradedSpace(dims), diff)
        expected = sum(homology_co(cx, 1 + j).dimension *
                       homology_dim(mcomplex, j)
                       for j in mcomplex.degrees())
        assert tangent_defs(l, r).dimension == expected


def test_mc_set_equals_cycles_at_square_zero():
    rng = Random(18)
    for _ in range(6):
        l = random_dgla(rng)
        r = random_square_zero_ring(rng)
        t = nilpotent_dgla(l, r)
        cx = t.complex()
        for zc in cx.d_co(1).nullspace():
            z = t.component_to_vec(zc, 1)
            assert is_mc(t, z)


# -- gauge paths -------------------------------------------------------------------

def test_gauge_path_constant():
    l = quadratic_cone_dgla()
    r = kt(3)
    t = nilpotent_dgla(l, r)
    omega = random_mc(Random(19), t)
    gp = gauge_to_path(l, r, {}, omega, bound=3)
    assert gvec_is_zero(gvec_sub(gp.at(0), omega))
    assert gvec_is_zero(gvec_sub(gp.at(1), omega))
    assert gp.b_part == {}


def test_gauge_path_endpoints_and_mc():
    rng = Random(20)
    done = 0
    while done < 6:
        l = random_dgla(rng)
        r = random_ring(rng, max_nilpotency=3)
        t = nilpotent_dgla(l, r)
        omega = random_mc(rng, t, height=1)
        alpha = random_gauge(rng, t, height=1)
        gp = gauge_to_path(l, r, alpha, omega, bound=t.nilpotency_class())
        # construction self-verifies MC and endpoints; re-check endpoints
        assert gvec_is_zero(gvec_sub(gp.at(0), omega))
        assert gvec_is_zero(
            gvec_sub(gp.at(1), gauge_act(t, alpha, omega)))
        done += 1


def test_gauge_path_abelian_linear():
    rng = Random(21)
    la = abelian_dgla(u(random_complex(rng)))
    r = kt(3)
    t = nilpotent_dgla(la, r)
    omega = random_mc(rng, t)
    alpha = random_gauge(rng, t)
    gp = gauge_to_path(la, r, alpha, omega, bound=2)
    # abelian: w(t) = w - t * d(alpha): a-part has degree <= 1 in t
    assert set(gp.a_part) <= {0, 1}
    if 1 in gp.a_part:
        expected = {k: -c for k, c in t.d_vec(alpha).items()}
        assert gvec_is_zero(gvec_sub(gp.a_part[1], expected))


def test_gauge_path_truncation_guard():
    l = quadratic_cone_dgla()
    r = kt(4)
    t = nilpotent_dgla(l, r)
    with pytest.raises(TruncationTooSmall):
        gauge_to_path(l, r, {}, {}, bound=t.nilpotency_class() - 1)


# -- nilpotent tensor structure ------------------------------------------------------

def test_tensor_dgla_invariants():
    rng = Random(22)
    for _ in range(6):
        l = random_dgla(rng, max_dim=2)
        r = random_ring(rng)
        t = nilpotent_dgla(l, r)
        keys = list(t.basis())
        sample = keys[: min(len(keys), 5)]
        t.check_d_squared(sample)
        t.check_antisymmetry(sample[:4])
        t.check_jacobi((a, b, c) for a in sample[:3] for b in sample[:3]
                       for c in sample[:3])
        # m-adic filtration respected by d and bracket
        for k in sample:
            lvl = t.level(k)
            for k2, c in t.d_key(k).items():
                assert t.level(k2) >= lvl
            for kk in sample:
                for k3, c in t.bracket_keys(k, kk).items():
                    assert t.level(k3) >= lvl + t.level(kk)


def test_iterated_brackets_vanish_at_nilpotency():
    rng = Random(23)
    for _ in range(4):
        l = random_dgla(rng, max_dim=2)
        r = random_ring(rng)
        t = nilpotent_dgla(l, r)
        n = r.nilpotency
        keys = list(t.basis())
        if not keys:
            continue
        for _ in range(5):
            vecs = [ {rng.choice(keys): Q1} for _ in range(n) ]
            acc = vecs[0]
            for v in vecs[1:]:
                acc = t.bracket_vec(acc, v)
            assert gvec_is_zero(acc)


def test_layer_quotient_matches_square_zero_base_change():
    # (L (x) m)/(L (x) m^2) is L (x) m/m^2, realized by explicit matrices:
    # projecting the level-1 adapted coordinates along R -> R/m^2 is a chain
    # isomorphism onto the complex of L (x) m(R/m^2).
    rng = Random(24)
    for _ in range(4):
        l = random_dgla(rng, max_dim=2)
        r = random_ring(rng)
        if r.nilpotency < 2:
            continue
        t = nilpotent_dgla(l, r)
        quot, proj, _ = r.quotient_by_power(2)
        tq = nilpotent_dgla(l, quot)
        # map: level-1 keys of t -> coordinates of tq via the ring projection
        for (lk, ak) in t.basis():
            if t.level((lk, ak)) != 1:
                continue
            img_ring = proj.apply(t.coeff.vectors[ak])
            img = tq.element({lk: img_ring})
            assert img  # level-1 classes survive
            # d commutes with the projection on the layer
            d_then_project = {}
            for (lk2, ak2), c in t.d_key((lk, ak)).items():
                if t.level((lk2, ak2)) == 1:
                    pr = proj.apply(t.coeff.vectors[ak2])
                    for kk, cc in tq.element({lk2: pr}).items():
                        d_then_project[kk] = d_then_project.get(kk, 0) + c * cc
            d_then_project = {k: c for k, c in d_then_project.items() if c}
            project_then_d = tq.d_vec(img)
            assert gvec_is_zero(gvec_sub(d_then_project, project_then_d))


def test_element_roundtrip():
    l = quadratic_cone_dgla()
    t = nilpotent_dgla(l, kt(3))
    v = t.element({0: {1: Q1, 2: Fraction(5)}})
    rc = t.ring_coefficients(v)
    assert rc == {0: {1: Q1, 2: Fraction(5)}}
