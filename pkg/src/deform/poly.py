"""Sparse multivariate polynomials over Q, used as parametric scalars.

The gauge-equivalence search propagates affine families of gauge parameters
through the polynomial gauge action, and the gauge-path construction tracks
one formal variable t.  Vector/bracket code is generic over the scalar, so
these polynomials only need ring operations plus affinity tests.

Monomial keys are tuples of (variable index, exponent) pairs, sorted, with
zero exponents omitted; the constant monomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import Q0, Q1

CONST = ()


def _mul_keys(k1, k2):
    d = dict(k1)
    for v, e in k2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


class Poly:
    """Polynomial in finitely many variables with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        if terms:
            for k, c in terms.items():
                c = Fraction(c) if not isinstance(c, Fraction) else c
                if c:
                    self.terms[k] = c

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({CONST: c}) if c else Poly()

    @staticmethod
    def var(i: int) -> "Poly":
        return Poly({((i, 1),): Q1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        return self.terms == Poly.const(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Q0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) + (-self)

    def __mul__(self, other):
        other = other if isinstance(other, Poly) else Poly.const(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _mul_keys(k1, k2)
                s = out.get(k, Q0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Poly(out)

    __rmul__ = __mul__

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e for _, e in k) for k in self.terms)

    def is_affine(self) -> bool:
        return self.degree() <= 1

    def constant(self) -> Fraction:
        return self.terms.get(CONST, Q0)

    def linear_coeff(self, var: int) -> Fraction:
        return self.terms.get(((var, 1),), Q0)

    def variables(self) -> set:
        vs = set()
        for k in self.terms:
            for v, _ in k:
                vs.add(v)
        return vs

    def substitute(self, values: dict) -> "Poly":
        """Substitute Poly or Fraction values for some variables."""
        out = Poly()
        for k, c in self.terms.items():
            term = Poly.const(c)
            for v, e in k:
                base = values.get(v)
                if base is None:
                    base = Poly.var(v)
                elif not isinstance(base, Poly):
                    base = Poly.const(base)
                for _ in range(e):
                    term = term * base
            out = out + term
        return out

    def eval(self, values: dict) -> Fraction:
        res = self.substitute(values)
        if res.variables():
            raise ValueError("unbound variables %s" % res.variables())
        return res.constant()

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k, c in sorted(self.terms.items()):
            mono = "*".join(f"t{v}^{e}" if e > 1 else f"t{v}" for v, e in k)
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)
