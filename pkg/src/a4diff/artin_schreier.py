"""Artin-Schreier reduction to odd-pole-order standard form.

A substitution alpha -> alpha - (h^2 - h) does not change the degree-two
cover defined by u^2 - u = alpha, so we may normalize alpha.  The form
fixed here: every pole has odd order, and the polynomial part carries only
odd-exponent monomials and no constant term.  Principal-part coefficients
below the leading term at finite poles are left untouched; they carry
local data the branch analysis reads directly.

In trace-zero mode the reducer h is assembled from complete rho-orbits so
that Tr(h) = Tr(h^2) = 0, keeping the reduced alpha inside the trace-zero
locus.  This works because the trace-zero condition on alpha ties the
order-e principal coefficients b_e at the three orbit points psi, zeta
psi, zeta^2 psi together: b_{psi,e} + zeta^{-e} b_{zeta psi,e} +
zeta^{-2e} b_{zeta^2 psi,e} = 0, and the square root of that relation is
the same relation for the order-e/2 legs of h.
"""

from __future__ import annotations

from .gf import FieldElement, FieldSpec
from .ratlaurent import Place, RatFunc, rho_pullback, trace_K_over_J


class ASForm:
    """A reduced datum: alpha_reduced = alpha - (h^2 - h) - dropped_constant.

    dropped_constant is zero unless the constant term of alpha's polynomial
    part has no preimage under x -> x^2 + x in the working field; over an
    algebraically closed field it would always be absorbable into h, so we
    record it instead of failing.
    """

    __slots__ = ("alpha_reduced", "h", "pole_table", "dropped_constant")

    def __init__(self, alpha_reduced: RatFunc, h: RatFunc,
                 pole_table: dict[Place, int], dropped_constant: FieldElement):
        self.alpha_reduced = alpha_reduced
        self.h = h
        self.pole_table = dict(pole_table)
        self.dropped_constant = dropped_constant

    def to_json(self) -> dict:
        return {
            "alpha_reduced": self.alpha_reduced.to_json(),
            "h": self.h.to_json(),
            "pole_table": {pl.key(): p for pl, p in sorted(
                self.pole_table.items(), key=lambda kv: kv[0].key())},
            "dropped_constant": self.dropped_constant.mask,
        }

    def __repr__(self):
        return f"ASForm(poles={ {pl.key(): p for pl, p in self.pole_table.items()} })"


class A4Report:
    """Verdict of the alternating-four cover criteria for alpha."""

    __slots__ = ("trace_zero", "nontrivial_alpha", "nontrivial_rho_alpha",
                 "nontrivial_sum", "verdict")

    def __init__(self, trace_zero, nontrivial_alpha, nontrivial_rho_alpha,
                 nontrivial_sum):
        self.trace_zero = trace_zero
        self.nontrivial_alpha = nontrivial_alpha
        self.nontrivial_rho_alpha = nontrivial_rho_alpha
        self.nontrivial_sum = nontrivial_sum
        self.verdict = (trace_zero and nontrivial_alpha
                        and nontrivial_rho_alpha and nontrivial_sum)

    def to_json(self) -> dict:
        return {
            "trace_zero": self.trace_zero,
            "nontrivial_alpha": self.nontrivial_alpha,
            "nontrivial_rho_alpha": self.nontrivial_rho_alpha,
            "nontrivial_sum": self.nontrivial_sum,
            "verdict": self.verdict,
        }

    def __repr__(self):
        return f"A4Report(verdict={self.verdict})"


def _inv_linear_power(spec: FieldSpec, value: FieldElement, f: int) -> RatFunc:
    """1/(s - value)^f."""
    num = RatFunc.constant(spec.one())
    lin = RatFunc.from_coeff_masks(spec, [value.mask, 1], [1])
    for _ in range(f):
        num = num / lin
    return num


def _polynomial_part(f: RatFunc):
    q, _ = f.num.divmod(f.den)
    return q


def _even_legs(work: RatFunc) -> RatFunc:
    """Square roots of the even-exponent terms slated for cancellation.

    Covers: every even-exponent monomial of the polynomial part, the
    leading term of the pole at 0 when its order is even, and, per
    rho-orbit of finite poles, the order-e coefficients at all three orbit
    points for e = the largest even order that is the leading order of
    some orbit member.  Grouping whole orbits at a common order is what
    keeps the legs trace-compatible.
    """
    spec = work.spec
    zeta = spec.zeta()
    legs = RatFunc.zero(spec)

    q = _polynomial_part(work)
    for e in range(2, q.degree + 1, 2):
        mask = q.coeffs[e] if e < len(q.coeffs) else 0
        if mask:
            root = spec.element(mask).sqrt()
            legs = legs + RatFunc.constant(root) * RatFunc.monomial(spec, e // 2)

    poles = work.poles()
    zero_place = Place.zero(spec)
    p0 = poles.get(zero_place, 0)
    if p0 and p0 % 2 == 0:
        lead = work.laurent_at(zero_place, 1).coeffs[0]
        legs = legs + RatFunc.constant(lead.sqrt()) * RatFunc.monomial(spec, -(p0 // 2))

    finite = {pl.value.mask: p for pl, p in poles.items()
              if not pl.is_infinity() and pl.value.mask != 0}
    seen = set()
    for mask in sorted(finite):
        if mask in seen:
            continue
        y = spec.element(mask)
        orbit = [y, zeta * y, zeta * zeta * y]
        seen.update(v.mask for v in orbit)
        trigger = 0
        for v in orbit:
            p = finite.get(v.mask, 0)
            if p % 2 == 0 and p > trigger:
                trigger = p
        if trigger == 0:
            continue
        for v in orbit:
            p = finite.get(v.mask, 0)
            if p < trigger:
                continue
            chunk = work.laurent_at(Place.finite(v), p)
            coeff = chunk.coeffs[p - trigger]
            if coeff.mask:
                legs = legs + RatFunc.constant(coeff.sqrt()) * _inv_linear_power(
                    spec, v, trigger // 2)
    return legs


def _reduce_core(alpha: RatFunc):
    spec = alpha.spec
    work = alpha
    h = RatFunc.zero(spec)
    while True:
        legs = _even_legs(work)
        if legs.is_zero():
            break
        work = work + legs.square() + legs
        h = h + legs
    dropped = spec.zero()
    q = _polynomial_part(work)
    c0 = q.coeffs[0] if q.degree >= 0 else 0
    if c0:
        const = spec.element(c0)
        work = work + RatFunc.constant(const)
        root = spec.artin_schreier_root(const)
        if root is not None:
            h = h + RatFunc.constant(root)
        else:
            dropped = const
    return work, h, dropped


def _validate_reduced(reduced: RatFunc) -> dict[Place, int]:
    pole_table = reduced.poles()
    for place, p in pole_table.items():
        assert p % 2 == 1, "reduction left an even pole order"
    q = _polynomial_part(reduced)
    for e in range(0, q.degree + 1, 2):
        mask = q.coeffs[e] if e < len(q.coeffs) else 0
        assert mask == 0, "reduction left an even polynomial term"
    return pole_table


def as_reduce(alpha: RatFunc) -> ASForm:
    """Reduce alpha to standard form; poles must split over the field."""
    reduced, h, dropped = _reduce_core(alpha)
    pole_table = _validate_reduced(reduced)
    return ASForm(reduced, h, pole_table, dropped)


def symmetrize_h(alpha: RatFunc) -> ASForm:
    """Reduce a trace-zero alpha keeping Tr(h) = Tr(h^2) = 0."""
    if not trace_K_over_J(alpha).is_zero():
        raise ValueError("trace nonzero")
    reduced, h, dropped = _reduce_core(alpha)
    assert dropped.mask == 0, "trace-zero input produced a constant"
    assert trace_K_over_J(h).is_zero()
    assert trace_K_over_J(h.square()).is_zero()
    assert trace_K_over_J(reduced).is_zero()
    pole_table = _validate_reduced(reduced)
    return ASForm(reduced, h, pole_table, dropped)


def is_as_trivial(alpha: RatFunc) -> bool:
    """True when alpha = xi^2 - xi has a solution over the closure.

    Constants count as trivial even when x^2 + x = c has no root in the
    working field; geometrically the base is algebraically closed.
    """
    return as_reduce(alpha).alpha_reduced.is_zero()


def check_a4_conditions(alpha: RatFunc) -> A4Report:
    """Decide whether (alpha, rho alpha) presents an alternating-four cover.

    Needs: Tr(alpha) = 0, and nontriviality of alpha, rho alpha, and
    alpha + rho alpha, so that the three degree-two subcovers are distinct.
    """
    trace_zero = trace_K_over_J(alpha).is_zero()
    ra = rho_pullback(alpha)
    return A4Report(
        trace_zero=trace_zero,
        nontrivial_alpha=not is_as_trivial(alpha),
        nontrivial_rho_alpha=not is_as_trivial(ra),
        nontrivial_sum=not is_as_trivial(alpha + ra),
    )
