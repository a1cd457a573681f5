"""Rational functions over GF(2^m) with exact local expansions.

A RatFunc is a reduced fraction num/den with monic denominator; all
consumers rely on that canonical form (pole orders are read off the
denominator, gcd-freeness makes them honest).  Local data at a place is
computed adically: synthetic division by (s + c) at a finite point, and
the substitution s -> 1/s at infinity, so extracting a few leading
coefficients costs O(deg) rather than a full Taylor shift.

The degree-3 twist rho acts on functions by (rho f)(s) = f(zeta s); the
trace to the fixed field k(s^3) is f + rho f + rho^2 f.
"""

from __future__ import annotations

import math

from .gf import FieldSpec, FieldElement, _pmulmod, _ppowmod


def _mask_mul(spec: FieldSpec, a: int, b: int) -> int:
    return _pmulmod(a, b, spec.modulus)


def _mask_inv(spec: FieldSpec, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    return _ppowmod(a, spec.order - 2, spec.modulus)


class Poly:
    """Polynomial over GF(2^m); coeffs are masks, lowest degree first.

    Invariant: no trailing zero coefficients (zero polynomial = empty tuple).
    """

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs):
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        self.spec = spec
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_elements(cls, spec: FieldSpec, elems) -> "Poly":
        return cls(spec, [e.mask for e in elems])

    @classmethod
    def x(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, (0, 1))

    @classmethod
    def const(cls, spec: FieldSpec, mask: int) -> "Poly":
        return cls(spec, (mask,))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, m in enumerate(b):
            out[i] ^= m
        return Poly(self.spec, out)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(self.spec, ())
        spec = self.spec
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] ^= _mask_mul(spec, a, b)
        return Poly(spec, out)

    def scale(self, mask: int) -> "Poly":
        """Multiply by a nonzero constant."""
        spec = self.spec
        return Poly(spec, [_mask_mul(spec, c, mask) for c in self.coeffs])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(_mask_inv(self.spec, self.leading()))

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        spec = self.spec
        rem = list(self.coeffs)
        dd = other.degree
        lead_inv = _mask_inv(spec, other.leading())
        q = [0] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            if rem[i] == 0:
                continue
            f = _mask_mul(spec, rem[i], lead_inv)
            q[i - dd] = f
            for j, b in enumerate(other.coeffs):
                if b:
                    rem[i - dd + j] ^= _mask_mul(spec, f, b)
        return Poly(spec, q), Poly(spec, rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def eval(self, mask: int) -> int:
        """Horner evaluation; returns a mask."""
        spec = self.spec
        acc = 0
        for c in reversed(self.coeffs):
            acc = _mask_mul(spec, acc, mask) ^ c
        return acc

    def div_linear(self, c: int):
        """Quotient and remainder for division by (s + c); O(deg)."""
        spec = self.spec
        q = [0] * max(0, len(self.coeffs) - 1)
        acc = 0
        for i in range(len(self.coeffs) - 1, -1, -1):
            acc = _mask_mul(spec, acc, c) ^ self.coeffs[i]
            if i > 0:
                q[i - 1] = acc
        return Poly(spec, q), acc

    def adic_coeffs(self, c: int, count: int) -> list[int]:
        """First `count` coefficients of the (s + c)-adic expansion."""
        out = []
        p = self
        for _ in range(count):
            p, r = p.div_linear(c)
            out.append(r)
        return out

    def valuation(self, c: int) -> int:
        """Multiplicity of the root c (0 if not a root); inf for 0."""
        if self.is_zero():
            return math.inf
        v = 0
        p = self
        while True:
            q, r = p.div_linear(c)
            if r != 0:
                return v
            v += 1
            p = q

    def reversed_coeffs(self) -> "Poly":
        return Poly(self.spec, tuple(reversed(self.coeffs)))

    def compose_scale(self, mask: int) -> "Poly":
        """p(mask * s): multiply coefficient i by mask^i."""
        spec = self.spec
        out = []
        power = 1
        for c in self.coeffs:
            out.append(_mask_mul(spec, c, power))
            power = _mask_mul(spec, power, mask)
        return Poly(spec, out)

    def derivative_is_zero(self) -> bool:
        """True iff all odd-degree coefficients vanish (p = q(s^2))."""
        return all(c == 0 for c in self.coeffs[1::2])

    def sqrt_of_even(self) -> "Poly":
        """For p = q(s)^2 (equivalently p = r(s^2)), return q."""
        if not self.derivative_is_zero():
            raise ValueError("polynomial is not a square")
        spec = self.spec
        out = []
        for c in self.coeffs[0::2]:
            out.append(spec.element(c).sqrt().mask if c else 0)
        return Poly(spec, out)

    def elements(self):
        return [self.spec.element(c) for c in self.coeffs]

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c:#x}*s^{i}" if c != 1 else f"s^{i}")
        return "Poly(" + " + ".join(terms) + ")"


# ---------------------------------------------------------------------------

class Place:
    """A closed point of the projective s-line: infinity or a field value."""

    __slots__ = ("kind", "value")

    def __init__(self, kind: str, value: FieldElement | None = None):
        if kind not in ("inf", "finite"):
            raise ValueError(f"unknown place kind {kind!r}")
        if (kind == "finite") != (value is not None):
            raise ValueError("finite places carry a value, infinity does not")
        self.kind = kind
        self.value = value

    @classmethod
    def infinity(cls) -> "Place":
        return cls("inf")

    @classmethod
    def finite(cls, value: FieldElement) -> "Place":
        return cls("finite", value)

    @classmethod
    def zero(cls, spec: FieldSpec) -> "Place":
        return cls("finite", spec.zero())

    def is_infinity(self) -> bool:
        return self.kind == "inf"

    def is_zero(self) -> bool:
        return self.kind == "finite" and self.value.mask == 0

    def key(self) -> str:
        """Serialization key: 'inf' or the decimal mask."""
        return "inf" if self.kind == "inf" else str(self.value.mask)

    @classmethod
    def from_key(cls, spec: FieldSpec, key: str) -> "Place":
        if key == "inf":
            return cls.infinity()
        return cls.finite(spec.element(int(key)))

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self.kind == other.kind and self.value == other.value

    def __hash__(self):
        return hash((self.kind, None if self.value is None else self.value.mask))

    def __repr__(self):
        return "Place(inf)" if self.kind == "inf" else f"Place({self.value!r})"


class LaurentChunk:
    """Leading Laurent data at a place.

    order is the valuation; coeffs[i] is the coefficient of pi^(order+i)
    in the local uniformizer pi (s + c at a finite point c, 1/s at
    infinity).  coeffs[0] is nonzero unless the function was zero.
    """

    __slots__ = ("place", "order", "coeffs")

    def __init__(self, place: Place, order: int, coeffs):
        self.place = place
        self.order = order
        self.coeffs = tuple(coeffs)

    def coeff(self, i: int) -> FieldElement:
        """Coefficient of pi^(order+i)."""
        return self.coeffs[i]

    def __repr__(self):
        return (f"LaurentChunk({self.place!r}, order={self.order}, "
                f"coeffs={[c.mask for c in self.coeffs]})")


# ---------------------------------------------------------------------------

def _series_inv(spec: FieldSpec, v: list[int], count: int) -> list[int]:
    # Power series inverse of v (v[0] != 0), count terms.
    v0inv = _mask_inv(spec, v[0])
    out = [v0inv]
    for k in range(1, count):
        acc = 0
        for j in range(1, min(k, len(v) - 1) + 1):
            if v[j] and out[k - j]:
                acc ^= _mask_mul(spec, v[j], out[k - j])
        out.append(_mask_mul(spec, acc, v0inv))
    return out


def _series_mul(spec: FieldSpec, a: list[int], b: list[int], count: int):
    out = [0] * count
    for i, x in enumerate(a):
        if x == 0 or i >= count:
            continue
        for j, y in enumerate(b):
            if i + j >= count:
                break
            if y:
                out[i + j] ^= _mask_mul(spec, x, y)
    return out


class RatFunc:
    """Canonical rational function: gcd-reduced, monic denominator."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, num: Poly, den: Poly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        spec = num.spec
        if num.is_zero():
            num, den = Poly(spec, ()), Poly(spec, (1,))
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead_inv = _mask_inv(spec, den.leading())
            num = num.scale(lead_inv)
            den = den.scale(lead_inv)
        self.spec = spec
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec) -> "RatFunc":
        return cls(Poly(spec, ()), Poly(spec, (1,)))

    @classmethod
    def constant(cls, value: FieldElement) -> "RatFunc":
        return cls(Poly(value.spec, (value.mask,)),
                   Poly(value.spec, (1,)))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p, Poly(p.spec, (1,)))

    @classmethod
    def monomial(cls, spec: FieldSpec, e: int) -> "RatFunc":
        """s^e for any integer e."""
        if e >= 0:
            return cls(Poly(spec, (0,) * e + (1,)), Poly(spec, (1,)))
        return cls(Poly(spec, (1,)), Poly(spec, (0,) * (-e) + (1,)))

    @classmethod
    def from_coeff_masks(cls, spec: FieldSpec, num, den) -> "RatFunc":
        return cls(Poly(spec, num), Poly(spec, den))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __sub__ = __add__

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def scale(self, value: FieldElement) -> "RatFunc":
        return RatFunc(self.num.scale(value.mask), self.den)

    def square(self) -> "RatFunc":
        return self * self

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> FieldElement:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.spec.element(self.num.coeffs[0] if self.num.coeffs else 0)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        # canonical form makes structural equality semantic equality
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def eval_at(self, value: FieldElement) -> FieldElement:
        d = self.den.eval(value.mask)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        n = self.num.eval(value.mask)
        return self.spec.element(_mask_mul(self.spec, n, _mask_inv(self.spec, d)))

    # -- local data --------------------------------------------------------

    def ord_at(self, place: Place):
        """Valuation at the place; +inf for the zero function."""
        if self.is_zero():
            return math.inf
        if place.is_infinity():
            return self.den.degree - self.num.degree
        c = place.value.mask
        return self.num.valuation(c) - self.den.valuation(c)

    def laurent_at(self, place: Place, count: int) -> LaurentChunk:
        """Leading `count` Laurent coefficients at the place."""
        if count <= 0:
            raise ValueError("count must be positive")
        if self.is_zero():
            raise ValueError("no Laurent expansion of the zero function")
        spec = self.spec
        if place.is_infinity():
            num, den = self.num.reversed_coeffs(), self.den.reversed_coeffs()
            base = self.den.degree - self.num.degree
            n_coeffs = num.adic_coeffs(0, num.degree + 1 + count)
            d_coeffs = den.adic_coeffs(0, den.degree + 1 + count)
        else:
            c = place.value.mask
            vn = self.num.valuation(c)
            vd = self.den.valuation(c)
            base = vn - vd
            n_coeffs = self.num.adic_coeffs(c, vn + count)
            d_coeffs = self.den.adic_coeffs(c, vd + count)
        # strip the shared uniformizer power, then series-divide
        while n_coeffs and n_coeffs[0] == 0:
            n_coeffs.pop(0)
        while d_coeffs and d_coeffs[0] == 0:
            d_coeffs.pop(0)
        inv = _series_inv(spec, d_coeffs, count)
        series = _series_mul(spec, n_coeffs, inv, count)
        return LaurentChunk(place, base,
                            [spec.element(mask) for mask in series])

    # -- the rho twist -----------------------------------------------------

    def rho_pullback(self) -> "RatFunc":
        """(rho f)(s) = f(zeta s)."""
        z = self.spec.zeta().mask
        return RatFunc(self.num.compose_scale(z), self.den.compose_scale(z))

    def substitute_inverse(self) -> "RatFunc":
        """f(1/s), as a rational function of s."""
        dn, dd = self.num.degree, self.den.degree
        num_r = self.num.reversed_coeffs()
        den_r = self.den.reversed_coeffs()
        shift = dd - dn
        if shift >= 0:
            return RatFunc(num_r * Poly(self.spec, (0,) * shift + (1,)), den_r)
        return RatFunc(num_r, den_r * Poly(self.spec, (0,) * (-shift) + (1,)))

    # -- pole structure ----------------------------------------------------

    def poles(self) -> dict[Place, int]:
        """Pole orders; requires every finite pole to split over the field."""
        out: dict[Place, int] = {}
        if self.is_zero():
            return out
        deficit = self.num.degree - self.den.degree
        if deficit > 0:
            out[Place.infinity()] = deficit
        for mask, mult in poly_roots(self.den).items():
            out[Place.finite(self.spec.element(mask))] = mult
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"num": list(self.num.coeffs), "den": list(self.den.coeffs)}

    @classmethod
    def from_json(cls, spec: FieldSpec, obj: dict) -> "RatFunc":
        return cls(Poly(spec, obj["num"]), Poly(spec, obj["den"]))

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"


# ---------------------------------------------------------------------------

def poly_roots(p: Poly, context: str = "pole") -> dict[int, int]:
    """All roots of p in its field, with multiplicities.

    Raises ValueError ("<context> not split over working field") if p has
    an irreducible factor of degree > 1.
    """
    if p.is_zero():
        raise ValueError("root-finding on the zero polynomial")
    p = p.monic()
    return {mask: p.valuation(mask) for mask in _distinct_roots(p, context)}


def _formal_derivative(p: Poly) -> Poly:
    # char 2: only odd-degree terms survive, shifted down.
    out = [0] * max(0, p.degree)
    for i in range(1, len(p.coeffs)):
        if i % 2 == 1:
            out[i - 1] = p.coeffs[i]
    return Poly(p.spec, out)


def _distinct_roots(p: Poly, context: str) -> set[int]:
    if p.degree <= 0:
        return set()
    if p.derivative_is_zero():
        # p = q(s)^2; same root set as q.
        return _distinct_roots(p.sqrt_of_even().monic(), context)
    g = p.gcd(_formal_derivative(p))
    sf = p.divmod(g)[0].monic()
    return _roots_squarefree(sf, context) | _distinct_roots(g.monic(), context)


def _roots_squarefree(p: Poly, context: str) -> set[int]:
    """Roots of a squarefree monic p; raises if p does not split."""
    spec = p.spec
    if p.degree <= 0:
        return set()
    # the split part of p is gcd(p, s^(2^m) + s)
    frob = Poly(spec, (0, 1))
    for _ in range(spec.m):
        frob = (frob * frob) % p
    linear_part = p.gcd(frob + Poly.x(spec))
    if linear_part.degree < p.degree:
        nonsplit = p.divmod(linear_part if linear_part.degree > 0
                            else Poly(spec, (1,)))[0]
        raise ValueError(
            f"{context} not split over working field: irreducible factor of "
            f"degree {nonsplit.degree} with coeff masks "
            f"{list(nonsplit.monic().coeffs)}")
    out: set[int] = set()
    _trace_split(linear_part, out)
    return out


def _trace_split(p: Poly, out: set[int]):
    """Deterministic trace-based splitting of a split squarefree monic p."""
    spec = p.spec
    if p.degree <= 0:
        return
    if p.degree == 1:
        out.add(p.coeffs[0])  # the root of s + c is c
        return
    for bit in range(spec.m):
        beta = 1 << bit
        # T(beta s) = sum_{i<m} (beta s)^(2^i) mod p takes values in GF(2)
        # on the roots; some basis element beta separates any two of them.
        term = Poly(spec, (0, beta)) % p
        acc = Poly(spec, ())
        for _ in range(spec.m):
            acc = acc + term
            term = (term * term) % p
        g = p.gcd(acc)
        if 0 < g.degree < p.degree:
            _trace_split(g, out)
            _trace_split(p.divmod(g)[0].monic(), out)
            return
    raise AssertionError("trace splitting failed on a squarefree input")


# ---------------------------------------------------------------------------

def rho_pullback(f: RatFunc) -> RatFunc:
    """(rho f)(s) = f(zeta s)."""
    return f.rho_pullback()


def trace_K_over_J(f: RatFunc) -> RatFunc:
    """Trace of f to the degree-3 fixed field: f + rho f + rho^2 f.

    The result is verified to be rho-invariant, i.e. a function of s^3.
    """
    rf = f.rho_pullback()
    t = f + rf + rf.rho_pullback()
    if t.rho_pullback() != t:
        raise AssertionError("trace left the fixed field")
    if not t.is_zero():
        # canonical form of a rho-invariant function uses only exponents
        # divisible by 3
        for poly in (t.num, t.den):
            for i, c in enumerate(poly.coeffs):
                if c and i % 3 != 0:
                    raise AssertionError("trace left the fixed field")
    return t
