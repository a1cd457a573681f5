"""Shared test utilities: random trace-zero data and closed-form
expectations for the parametric families."""

from a4diff.artin_schreier import symmetrize_h
from a4diff.ramification import analyze_branch_data
from a4diff.ratlaurent import Poly, RatFunc, trace_K_over_J


def linear_power(spec, mask, e):
    out = Poly(spec, (1,))
    for _ in range(e):
        out = out * Poly(spec, (mask, 1))
    return out


def random_trace_zero_alpha(rnd, spec, max_orbits=2, allow_inf=True,
                            allow_zero=True, degenerate_bias=0.0):
    """A random trace-zero rational function, built part by part.

    The principal parts at an orbit {psi, zeta psi, zeta^2 psi} are
    trace free exactly when the order-e coefficients b_k at zeta^k psi
    satisfy b_0 + b_1 zeta^-e + b_2 zeta^-2e = 0, so two are drawn at
    random and the third is solved for.  The polynomial part and the
    principal part at 0 must avoid degrees divisible by 3.  Orders are
    allowed to be even; reduction cancels them downstream.
    """
    z = spec.zeta()
    total = RatFunc.zero(spec)

    used = set()
    for _ in range(rnd.randint(0, max_orbits)):
        while True:
            v = spec.element(rnd.randrange(1, spec.order))
            chain = (v.mask, (z * v).mask, (z * z * v).mask)
            if not used.intersection(chain):
                break
        used.update(chain)
        for e in rnd.sample(range(1, 8), rnd.randint(1, 2)):
            if rnd.random() < degenerate_bias:
                b0 = spec.zero()
                b1 = spec.element(rnd.randrange(1, spec.order))
            else:
                b0 = spec.element(rnd.randrange(spec.order))
                b1 = spec.element(rnd.randrange(spec.order))
            zinv_e = z.inverse() ** e
            b2 = (b0 + b1 * zinv_e) * z ** (2 * e)
            for k, b in enumerate((b0, b1, b2)):
                if b:
                    pole = (z ** k * v).mask
                    total = total + RatFunc(Poly(spec, (b.mask,)),
                                            linear_power(spec, pole, e))
    if allow_inf and rnd.random() < 0.8:
        deg = rnd.randint(1, 7)
        coeffs = [0] * (deg + 1)
        for e in range(1, deg + 1):
            if e % 3:
                coeffs[e] = rnd.randrange(spec.order)
        total = total + RatFunc.from_poly(Poly(spec, coeffs))
    if allow_zero and rnd.random() < 0.5:
        e = rnd.choice((1, 2, 4, 5, 7))
        total = total + RatFunc(Poly(spec, (rnd.randrange(1, spec.order),)),
                                Poly(spec, [0] * e + [1]))
    assert trace_K_over_J(total).is_zero()
    return total


def analyzed_random_datum(rnd, spec, attempts=80, **kw):
    """(form, ramification data) for a random admissible datum.

    Retries on rejects: trivial data, branch points whose orbit is not
    pole-closed, or degenerate leading coefficients.
    """
    for _ in range(attempts):
        alpha = random_trace_zero_alpha(rnd, spec, **kw)
        if alpha.is_zero():
            continue
        form = symmetrize_h(alpha)
        if form.alpha_reduced.is_zero():
            continue
        try:
            return form, analyze_branch_data(form)
        except ValueError:
            continue
    raise RuntimeError("random datum generation stalled")


def _ceil_div(a, b):
    return -(-a // b)


def hkg_expected(n, x):
    """Closed-form invariants of hkg_alpha(spec, n, x)."""
    r = n % 3
    p = (32 * n - 2 * r + 20) * x - 3
    a1 = (5 - r) * x - 1 + _ceil_div(r * x, 2)
    return {
        "p": p,
        "delta": 8 * x,
        "lam_power": x,
        "genus": -3 + 3 * (p + 1) // 2,
        "mu": ((8 * n + 5) * x - _ceil_div(r * x, 2),
               (16 * n + 10 - r) * x - 1,
               (24 * n + 15 - r) * x - 1 - _ceil_div(r * x + 1, 2)),
        "l": n + 1,
        "a1": a1,
        "a2": 8 * x - a1,
    }


def degenerate_orbit_expected(n):
    """Closed-form invariants of degenerate_orbit_alpha(spec, n)."""
    return {
        "p_inf": 7,
        "m": 4 * n - 3,
        "M": 4 * n - 1,
        "genus": 18 * n + 6,
        "band_dim": 6 * n,
        "l": n,
        "a1": 1,
        "a2": 0,
    }


def generic_orbit_expected(n):
    """Closed-form invariants of generic_orbit_alpha(spec, n, psi)."""
    return {
        "p_inf": 1,
        "p": 4 * n + 1,
        "delta": 1,
        "genus": 18 * n + 9,
        "band_dim": 6 * n,
        "l": n,
        "a1": 1,
        "a2": 0,
    }
