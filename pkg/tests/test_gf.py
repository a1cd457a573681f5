import pytest
from hypothesis import given, settings, strategies as st

from a4diff.gf import (
    FieldSpec, FieldElement, sqrt_frobenius, cube_roots_of_unity,
    all_elements, is_irreducible_gf2, default_modulus,
)

F4 = FieldSpec(m=2)          # modulus x^2 + x + 1
F256 = FieldSpec(m=8)


def test_default_modulus_smallest():
    # x^2+x+1 = 0b111, and for m=8 the smallest irreducible is x^8+x^4+x^3+x+1.
    assert F4.modulus == 0b111
    assert F256.modulus == 0x11B


def test_odd_degree_rejected():
    with pytest.raises(ValueError):
        FieldSpec(m=3)
    with pytest.raises(ValueError):
        FieldSpec(m=0)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(m=4, modulus=0b10101)  # (x^2+x+1)^2
    with pytest.raises(ValueError):
        FieldSpec(m=4, modulus=0b111)    # degree mismatch


def test_gf4_multiplication_table():
    # Hand table for GF(4) = {0, 1, w, w+1} with w^2 = w + 1.
    z, o = F4.zero(), F4.one()
    w, w1 = F4.element(2), F4.element(3)
    assert w * w == w1
    assert w * w1 == o
    assert w1 * w1 == w
    assert w + w1 == o
    assert (w + w) == z


def test_zeta_is_primitive_cube_root():
    for spec in (F4, FieldSpec(m=4), FieldSpec(m=6), F256, FieldSpec(m=12)):
        one, zeta, zeta2 = cube_roots_of_unity(spec)
        assert zeta != one and zeta2 != one and zeta2 != zeta
        assert zeta * zeta == zeta2
        assert zeta * zeta2 == one
        assert zeta + zeta2 == one  # 1 + zeta + zeta^2 = 0
        # canonical: the smaller root of x^2 + x + 1
        assert zeta.mask < (zeta + one).mask


def test_inverse_and_division_exhaustive_gf16():
    spec = FieldSpec(m=4)
    for a in all_elements(spec):
        if not a:
            with pytest.raises(ZeroDivisionError):
                a.inverse()
            continue
        assert a * a.inverse() == spec.one()
        assert (a / a) == spec.one()


def test_sqrt_exhaustive_gf16():
    spec = FieldSpec(m=4)
    for a in all_elements(spec):
        r = sqrt_frobenius(a)
        assert r * r == a
        assert a.sqrt() == r


masks = st.integers(min_value=0, max_value=255)


@settings(max_examples=300, deadline=None)
@given(masks, masks, masks)
def test_field_axioms_random(a, b, c):
    x, y, z = F256.element(a), F256.element(b), F256.element(c)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + x == F256.zero()


@settings(max_examples=300, deadline=None)
@given(masks, masks)
def test_sqrt_is_additive_automorphism(a, b):
    x, y = F256.element(a), F256.element(b)
    assert sqrt_frobenius(x * y) == sqrt_frobenius(x) * sqrt_frobenius(y)
    assert sqrt_frobenius(x + y) == sqrt_frobenius(x) + sqrt_frobenius(y)
    r = sqrt_frobenius(x)
    assert r * r == x


@settings(max_examples=200, deadline=None)
@given(masks)
def test_pow_matches_repeated_multiplication(a):
    x = F256.element(a)
    acc = F256.one()
    for e in range(5):
        assert x ** e == acc
        acc = acc * x
    if x:
        assert x ** -1 == x.inverse()


def test_cross_field_mixing_rejected():
    with pytest.raises(ValueError):
        F4.one() + F256.one()
    with pytest.raises(ValueError):
        F4.one() * F256.one()


def test_spec_serialization_roundtrip():
    for spec in (F4, F256, FieldSpec(m=10)):
        j = spec.to_json()
        back = FieldSpec.from_json(j)
        assert back == spec
        assert j["modulus"][0] == 1 and j["modulus"][-1] == 1


def test_element_mask_bounds():
    with pytest.raises(ValueError):
        F4.element(4)
    with pytest.raises(ValueError):
        F4.element(-1)


def test_irreducibility_helper():
    assert is_irreducible_gf2(0b111)        # x^2+x+1
    assert not is_irreducible_gf2(0b101)    # (x+1)^2
    assert is_irreducible_gf2(0b1011)       # x^3+x+1
    assert default_modulus(2) == 0b111


def test_canonical_ordering():
    a, b = F256.element(3), F256.element(7)
    assert a < b and a <= b
    assert sorted([b, a]) == [a, b]
