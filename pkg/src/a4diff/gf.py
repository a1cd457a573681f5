"""Binary field arithmetic GF(2^m) in polynomial basis.

Elements are bit masks: bit i holds the coefficient of x^i, so the mask's
integer value doubles as the canonical ordering of field elements.  All
arithmetic is carry-less polynomial arithmetic reduced by an irreducible
modulus; no discrete-log tables are built, which keeps construction O(m)
and lets m grow to 32 without precomputation blowups.

The degree m must be even so that GF(4), and with it a primitive cube root
of unity zeta, embeds in the field.  zeta is chosen deterministically as
the smaller of the two roots of x^2 + x + 1 in the mask ordering.
"""

from __future__ import annotations


# ---------------------------------------------------------------------------
# GF(2)[x] on plain ints: bit i of p is the coefficient of x^i.

def _pdeg(p: int) -> int:
    """Degree of p, with deg 0 = -1."""
    return p.bit_length() - 1


def _pmul(a: int, b: int) -> int:
    """Carry-less product in GF(2)[x]."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _pmod(a: int, f: int) -> int:
    """Remainder of a modulo f in GF(2)[x]."""
    df = _pdeg(f)
    da = _pdeg(a)
    while da >= df:
        a ^= f << (da - df)
        da = _pdeg(a)
    return a


def _pmulmod(a: int, b: int, f: int) -> int:
    return _pmod(_pmul(a, b), f)


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _ppowmod(base: int, e: int, f: int) -> int:
    acc = 1
    while e:
        if e & 1:
            acc = _pmulmod(acc, base, f)
        base = _pmulmod(base, base, f)
        e >>= 1
    return acc


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_gf2(f: int) -> bool:
    """Rabin irreducibility test for f in GF(2)[x]."""
    n = _pdeg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    if not f & 1:
        return False  # divisible by x
    # x^(2^n) == x mod f, and x^(2^(n/p)) - x coprime to f for prime p | n.
    x = 2
    h = x
    for _ in range(n):
        h = _pmulmod(h, h, f)
    if h != x:
        return False
    for p in _prime_factors(n):
        h = x
        for _ in range(n // p):
            h = _pmulmod(h, h, f)
        if _pgcd(h ^ x, f) != 1:
            return False
    return True


def default_modulus(m: int) -> int:
    """Smallest irreducible degree-m modulus in the mask ordering."""
    for tail in range(1, 1 << m, 2):
        f = (1 << m) | tail
        if is_irreducible_gf2(f):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {m}")


# ---------------------------------------------------------------------------

class FieldSpec:
    """An even-degree binary field GF(2^m) with a pinned modulus.

    Two specs compare equal iff (m, modulus) agree; elements of different
    specs never mix.  Invariant: modulus is irreducible of degree m, m even.
    """

    __slots__ = ("m", "modulus", "_zeta_mask", "_inv_frob_rows")

    def __init__(self, m: int = 8, modulus: int | None = None):
        if m <= 0 or m % 2 != 0:
            raise ValueError(
                f"field degree must be even and positive to contain a cube "
                f"root of unity, got m={m}")
        if m > 32:
            raise ValueError(f"field degree {m} exceeds the supported bound 32")
        if modulus is None:
            modulus = default_modulus(m)
        if _pdeg(modulus) != m:
            raise ValueError(
                f"modulus degree {_pdeg(modulus)} does not match m={m}")
        if not is_irreducible_gf2(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible")
        self.m = m
        self.modulus = modulus
        self._zeta_mask = None
        self._inv_frob_rows = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self.m == other.m and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.m, self.modulus))

    def __repr__(self):
        return f"FieldSpec(m={self.m}, modulus={self.modulus:#x})"

    @property
    def order(self) -> int:
        return 1 << self.m

    # -- element construction ---------------------------------------------

    def element(self, mask: int) -> "FieldElement":
        """Element from a coefficient bit mask."""
        if not 0 <= mask < (1 << self.m):
            raise ValueError(f"mask {mask} out of range for GF(2^{self.m})")
        return FieldElement(self, mask)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def zeta(self) -> "FieldElement":
        """The canonical primitive cube root of unity."""
        if self._zeta_mask is None:
            self._zeta_mask = self._solve_zeta()
        return FieldElement(self, self._zeta_mask)

    def _solve_zeta(self) -> int:
        # zeta^2 + zeta = 1 is GF(2)-linear in the mask bits because
        # squaring is linear; solve (F + I) z = 1 where F is the Frobenius
        # matrix, then take the smaller of the two solutions z, z + 1.
        m = self.m
        cols = []
        for i in range(m):
            basis = 1 << i
            col = _pmulmod(basis, basis, self.modulus) ^ basis
            cols.append(col)
        # Gaussian elimination on the m x m GF(2) system cols * z = 1.
        rows = [[(cols[j] >> i) & 1 for j in range(m)] + [1 if i == 0 else 0]
                for i in range(m)]
        piv = []
        r = 0
        for c in range(m):
            sel = None
            for rr in range(r, m):
                if rows[rr][c]:
                    sel = rr
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            for rr in range(m):
                if rr != r and rows[rr][c]:
                    rows[rr] = [x ^ y for x, y in zip(rows[rr], rows[r])]
            piv.append(c)
            r += 1
        z = 0
        for idx, c in enumerate(piv):
            if rows[idx][m]:
                z |= 1 << c
        if _pmulmod(z, z, self.modulus) ^ z != 1:
            raise AssertionError("cube root of unity solve failed")
        return min(z, z ^ 1)

    def artin_schreier_root(self, c: "FieldElement") -> "FieldElement | None":
        """A root of x^2 + x = c, or None when c is not in the image.

        The map x -> x^2 + x is F2-linear with kernel {0, 1}, so its image
        is an index-two subgroup; solvability is decided by elimination.
        """
        if c.spec != self:
            raise ValueError("element from a different field")
        pivots: dict[int, tuple[int, int]] = {}
        for j in range(self.m):
            e = 1 << j
            v, combo = _pmulmod(e, e, self.modulus) ^ e, e
            while v:
                lead = v.bit_length() - 1
                if lead not in pivots:
                    pivots[lead] = (v, combo)
                    break
                pv, pc = pivots[lead]
                v ^= pv
                combo ^= pc
        t, combo = c.mask, 0
        while t:
            lead = t.bit_length() - 1
            if lead not in pivots:
                return None
            pv, pc = pivots[lead]
            t ^= pv
            combo ^= pc
        root = self.element(combo)
        assert root * root + root == c
        return root

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        """JSON form: modulus as a bit list, lowest degree first."""
        bits = [(self.modulus >> i) & 1 for i in range(self.m + 1)]
        return {"m": self.m, "modulus": bits}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        bits = obj["modulus"]
        modulus = 0
        for i, b in enumerate(bits):
            if b:
                modulus |= 1 << i
        return cls(m=obj["m"], modulus=modulus)


class FieldElement:
    """An element of a FieldSpec field.

    Invariant: 0 <= mask < 2^m.  Immutable and hashable; ordering by mask
    is the canonical element ordering used everywhere representatives are
    chosen.
    """

    __slots__ = ("spec", "mask")

    def __init__(self, spec: FieldSpec, mask: int):
        self.spec = spec
        self.mask = mask

    def _check(self, other: "FieldElement"):
        if self.spec != other.spec:
            raise ValueError("elements from different fields")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        """Addition (= subtraction in characteristic 2)."""
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        return FieldElement(self.spec, self.mask ^ other.mask)

    __sub__ = __add__

    def __mul__(self, other):
        """Multiplication."""
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        return FieldElement(
            self.spec, _pmulmod(self.mask, other.mask, self.spec.modulus))

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(
            self.spec, _ppowmod(self.mask, e, self.spec.modulus))

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse; raises on zero."""
        if self.mask == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^m)")
        # a^(2^m - 2) = a^-1
        return FieldElement(
            self.spec,
            _ppowmod(self.mask, self.spec.order - 2, self.spec.modulus))

    def sqrt(self) -> "FieldElement":
        """The unique square root (Frobenius inverse)."""
        return sqrt_frobenius(self)

    # -- predicates, ordering, hashing ------------------------------------

    def __bool__(self):
        return self.mask != 0

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.mask == other.mask

    def __hash__(self):
        return hash((self.spec.m, self.spec.modulus, self.mask))

    def __lt__(self, other):
        self._check(other)
        return self.mask < other.mask

    def __le__(self, other):
        self._check(other)
        return self.mask <= other.mask

    def __repr__(self):
        return f"<{self.mask:#x} in GF(2^{self.spec.m})>"


def sqrt_frobenius(a: FieldElement) -> FieldElement:
    """Square root via x -> x^(2^(m-1)); exact inverse of squaring.

    Every element of GF(2^m) has exactly one square root, so the map is a
    field automorphism and sqrt(a + b) = sqrt(a) + sqrt(b) holds; tests
    rely on that linearity.
    """
    mask = a.mask
    f = a.spec.modulus
    for _ in range(a.spec.m - 1):
        mask = _pmulmod(mask, mask, f)
    return FieldElement(a.spec, mask)


def cube_roots_of_unity(spec: FieldSpec):
    """(1, zeta, zeta^2) with zeta the canonical primitive cube root."""
    z = spec.zeta()
    return spec.one(), z, z * z


def all_elements(spec: FieldSpec):
    """Iterator over the field in canonical (mask) order.  Small m only."""
    for mask in range(spec.order):
        yield FieldElement(spec, mask)
