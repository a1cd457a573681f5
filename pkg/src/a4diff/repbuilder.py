"""Explicit matrix model of the holomorphic differentials of an A4 cover.

Builds, from analyzed branch data, the sigma/tau/rho matrices acting on the
labelled differential basis.  sigma and tau act blockwise through the local
two-generator tables at each branch point; rho acts by zeta-power diagonals
at the fixed points, by a banded theta block across each middle range, and
by scalar permutation around each finite orbit.  The matrices are emitted
in the basis as labelled, before any change of basis; identifying the
isomorphism classes of the summands is the hom-space oracle's job.
"""

from __future__ import annotations

import logging

import numpy as np

from ._linalg import Matrix, _mul_arrays, coords_in_basis
from .modulezoo import GroupRep, validate_group_rep
from .ramification import INF, RamData

log = logging.getLogger(__name__)

__all__ = ["BasisLabel", "GlobalRep", "build_global_rep"]


class BasisLabel:
    """One basis differential: owning place, family (1, 2 or 3), index.

    Family 1 is the plain power of the uniformizer, family 2 carries the
    u-root, family 3 the v-root (or its corrected tail on high indices).
    """

    __slots__ = ("place", "family", "index")

    def __init__(self, place, family, index):
        assert family in (1, 2, 3)
        self.place = place
        self.family = family
        self.index = int(index)

    def to_json(self):
        return {"place": self.place.key(), "family": self.family,
                "index": self.index}

    def __eq__(self, other):
        if not isinstance(other, BasisLabel):
            return NotImplemented
        return (self.place, self.family, self.index) == \
            (other.place, other.family, other.index)

    def __hash__(self):
        return hash((self.place, self.family, self.index))

    def __repr__(self):
        return f"f[{self.place.key()},{self.family},{self.index}]"


class GlobalRep:
    """A GroupRep over G together with its basis labels and block plan."""

    __slots__ = ("rep", "labels", "block_plan")

    def __init__(self, rep, labels, block_plan):
        assert rep.dim == len(labels)
        self.rep = rep
        self.labels = list(labels)
        self.block_plan = list(block_plan)

    @property
    def dim(self):
        return self.rep.dim

    def to_json(self):
        return {
            "dim": self.dim,
            "labels": [lab.to_json() for lab in self.labels],
            "sigma": self.rep.sigma.to_mask_rows(),
            "tau": self.rep.tau.to_mask_rows(),
            "rho": self.rep.rho.to_mask_rows(),
            "blocks": self.block_plan,
        }

    def __repr__(self):
        return f"GlobalRep(dim={self.dim}, blocks={len(self.block_plan)})"


def _mus(m):
    return (m + 3) // 4, (2 * m + 3) // 4, (3 * m + 3) // 4


def _family_ranges(m, M, k, lo):
    """Inclusive (lo, hi) per family; hi < lo marks an empty family."""
    mu1, mu2, mu3 = _mus(m)
    nu = (M - m) // 2
    return {1: (lo, mu3 + nu + k), 2: (lo, mu1 + nu + k), 3: (lo, mu2 + k)}


def _point_labels(place, m, M, k, lo):
    ranges = _family_ranges(m, M, k, lo)
    out = []
    for fam in (1, 2, 3):
        a, b = ranges[fam]
        out.extend(BasisLabel(place, fam, i) for i in range(a, b + 1))
    return out


def _check_theta_range(pt):
    mu1, mu2, _ = _mus(pt.m)
    if mu2 - mu1 - 1 > pt.m // 4:
        raise ValueError("theta range exceeded")


def _band_matrix(spec, theta, n):
    """Upper triangular n x n band: coefficient theta[q - p] at (p, q)."""
    T = np.zeros((n, n), dtype=np.int64)
    for p in range(n):
        for q in range(p, n):
            t = q - p
            if t < len(theta):
                T[p, q] = theta[t].mask
    return Matrix(spec, T)


def _fill_special(spec, pt, offset, labels, Sg, Tg, Rg, plan):
    """Block at a rho-fixed branch point (infinity or zero)."""
    place = pt.place
    eps = pt.epsilon
    k = -2 if place.is_infinity() else 0
    a = 0 if place.is_infinity() else 1
    if pt.m != pt.M:
        raise ValueError("unsupported configuration: uneven pole orders "
                         "at a fixed branch point")
    m = pt.m
    mu1, mu2, mu3 = _mus(m)
    _check_theta_range(pt)
    z = spec.zeta()
    if pt.lam != z and pt.lam != z * z:
        raise ValueError("unsupported configuration: fixed-point lambda "
                         "outside the cube roots of unity")
    zp = [spec.one().mask, z.mask, (z * z).mask]
    ranges = _family_ranges(m, m, k, a)
    point_labels = _point_labels(place, m, m, k, a)
    pos = {}
    for t, lab in enumerate(point_labels):
        pos[(lab.family, lab.index)] = offset + t
    labels.extend(point_labels)

    def jexp(idx):
        return (1 - eps * idx) % 3

    one = spec.one().mask
    theta = pt.theta
    # sigma - 1: family 3 drops to family 1 at the same index
    for i in range(ranges[3][0], ranges[3][1] + 1):
        Sg[pos[(1, i)], pos[(3, i)]] = one
    # tau - 1: family 2 drops to family 1; the corrected tail spreads theta
    for i in range(ranges[2][0], ranges[2][1] + 1):
        Tg[pos[(1, i)], pos[(2, i)]] = one
    w_lo, w_hi = mu1 + k + 1, mu2 + k
    for i3 in range(max(w_lo, ranges[3][0]), w_hi + 1):
        for t in range(i3 - mu1 - k):
            tgt = i3 - t
            if (1, tgt) not in pos:
                log.info("theta correction outside family 1 at %s: "
                         "index %d dropped", place.key(), tgt)
                continue
            Tg[pos[(1, tgt)], pos[(3, i3)]] = theta[t].mask
    # rho: zeta-power diagonal on family 1
    for i in range(ranges[1][0], ranges[1][1] + 1):
        Rg[pos[(1, i)], pos[(1, i)]] = zp[jexp(i)]
    # rho on the low triples: f2 -> f3, f3 -> f2 + f3, all scaled
    for i in range(ranges[2][0], ranges[2][1] + 1):
        Rg[pos[(3, i)], pos[(2, i)]] = zp[jexp(i)]
    for i in range(ranges[3][0], min(ranges[3][1], mu1 + k) + 1):
        Rg[pos[(2, i)], pos[(3, i)]] = zp[jexp(i)]
        Rg[pos[(3, i)], pos[(3, i)]] = zp[jexp(i)]
    # rho on the corrected tail: the banded block T^{-1} P
    n = mu2 - mu1
    entry = {"place": place.key(), "kind": "special", "a": a, "k": k,
             "epsilon": eps, "mu": [mu1, mu2, mu3], "n": n}
    if n >= 1:
        T = _band_matrix(spec, theta, n)
        P = np.zeros((n, n), dtype=np.int64)
        for p in range(n):
            P[p, p] = zp[jexp(w_lo + p)]
        Q = coords_in_basis(T, Matrix(spec, P))
        for p in range(n):
            for q in range(n):
                if Q.a[p, q]:
                    Rg[pos[(3, w_lo + p)], pos[(3, w_lo + q)]] = Q.a[p, q]
        Theta = T.a.copy()
        np.fill_diagonal(Theta, 0)
        eye = np.zeros((n, n), dtype=np.int64)
        np.fill_diagonal(eye, one)
        if pt.lam == z:
            th1, th2 = Theta ^ eye, Theta
        else:
            th1, th2 = Theta, Theta ^ eye
        entry["Theta"] = [[int(x) for x in row] for row in Theta]
        entry["Theta1"] = [[int(x) for x in row] for row in th1]
        entry["Theta2"] = [[int(x) for x in row] for row in th2]
    plan.append(entry)
    return len(point_labels)


def _table_patterns(spec, pos_list, ranges, mu1, mu2, k, nu, theta):
    """(sigma_y, tau_y) table matrices on one orbit-member slot.

    pos_list maps (family, index) to a slot-local position; returns the
    two generator matrices in that ordering.
    """
    du = len(pos_list)
    order = {fi: t for t, fi in enumerate(pos_list)}
    one = spec.one().mask
    Sp = np.zeros((du, du), dtype=np.int64)
    Tp = np.zeros((du, du), dtype=np.int64)
    np.fill_diagonal(Sp, one)
    np.fill_diagonal(Tp, one)
    for i in range(ranges[3][0], ranges[3][1] + 1):
        Sp[order[(1, i)], order[(3, i)]] ^= one
    for i in range(ranges[2][0], ranges[2][1] + 1):
        Tp[order[(1, i)], order[(2, i)]] ^= one
    w_lo, w_hi = mu1 + k + 1, mu2 + k
    for i3 in range(max(w_lo, ranges[3][0]), w_hi + 1):
        for t in range(i3 - mu1 - k):
            tgt = i3 + nu - t
            if (1, tgt) not in order:
                log.info("theta correction outside family 1: index %d "
                         "dropped", tgt)
                continue
            Tp[order[(1, tgt)], order[(3, i3)]] ^= theta[t].mask
    return Matrix(spec, Sp), Matrix(spec, Tp)


def _resolve_case(spec, pt):
    """Which actual generators play (sigma_y, tau_y) at this point."""
    if pt.m == pt.M or pt.lam is INF:
        return "id"
    if pt.lam == spec.zero():
        return "swap"
    if pt.lam == spec.one():
        return "mix"
    return "id"


def _actual_generators(case, Sp, Tp):
    """(sigma, tau) from the table pair, per the local case."""
    if case == "id":
        return Sp, Tp
    if case == "swap":
        return Tp, Sp
    return Sp @ Tp, Tp


def _conj_diag(spec, M, exps, t):
    """diag(zeta^(t e)) M diag(zeta^(-t e)), exponents taken mod 3."""
    z = spec.zeta()
    zp = np.array([spec.one().mask, z.mask, (z * z).mask], dtype=np.int64)
    e = np.asarray(exps, dtype=np.int64)
    fac = zp[(t * (e[:, None] - e[None, :])) % 3]
    return Matrix(spec, _mul_arrays(spec, M.a, fac))


def _mul_mask(spec, a, b):
    return (spec.element(int(a)) * spec.element(int(b))).mask


def _solve_udagger_rho(spec, sig6, tau6):
    """rho on the six-dimensional index-one block of the leading orbit.

    The two family-1 vectors span the socle; rho is pinned there and the
    remaining columns are solved from the conjugation relations.  Any
    solution conjugates correctly, so a cube defect is unipotent with
    square-zero difference and rho^4 repairs it.
    """
    z = spec.zeta()
    pinned = {0: [(0, spec.one().mask), (3, z.mask)],        # f'1 column
              3: [(0, (z * z).mask)]}                        # f''1 column
    free_cols = [j for j in range(6) if j not in pinned]
    var_index = {(i, j): t for t, (i, j) in enumerate(
        (i, j) for j in free_cols for i in range(6))}
    nvars = len(var_index)
    st6 = sig6 @ tau6
    rows, rhs = [], []
    for A, B in ((sig6, tau6), (tau6, st6)):
        for i in range(6):
            for j in range(6):
                row = np.zeros(nvars, dtype=np.int64)
                acc = 0
                for p in range(6):
                    ca = A.a[p, j]
                    if ca:
                        if p in pinned:
                            for (pi, pm) in pinned[p]:
                                if pi == i:
                                    acc ^= _mul_mask(spec, pm, ca)
                        else:
                            row[var_index[(i, p)]] ^= ca
                    cb = B.a[i, p]
                    if cb:
                        if j in pinned:
                            for (pi, pm) in pinned[j]:
                                if pi == p:
                                    acc ^= _mul_mask(spec, cb, pm)
                        else:
                            row[var_index[(p, j)]] ^= cb
                rows.append(row)
                rhs.append(acc)
    Msys = Matrix(spec, np.array(rows, dtype=np.int64))
    b = Matrix(spec, np.array(rhs, dtype=np.int64)[:, None])
    try:
        x0 = coords_in_basis(Msys, b)
    except ValueError as exc:
        raise RuntimeError(
            "internal: index-one block relations are unsolvable") from exc
    kernel = Msys.right_nullspace()

    def assemble(xcol):
        R = np.zeros((6, 6), dtype=np.int64)
        for j, ents in pinned.items():
            for (i, mk) in ents:
                R[i, j] = mk
        for (i, j), t in var_index.items():
            R[i, j] = int(xcol[t])
        return Matrix(spec, R)

    def candidates():
        yield x0.a[:, 0]
        for t in range(kernel.cols):
            yield x0.a[:, 0] ^ kernel.a[:, t]
        if kernel.cols:
            rng = np.random.default_rng(7)
            for _ in range(64):
                co = rng.integers(0, spec.order, size=(kernel.cols, 1))
                shift = kernel @ Matrix(spec, co.astype(np.int64))
                yield x0.a[:, 0] ^ shift.a[:, 0]

    rho = None
    for xc in candidates():
        R = assemble(xc)
        if R.rank() == 6:
            rho = R
            break
    if rho is None:
        raise RuntimeError("internal: no invertible index-one block action")
    I6 = Matrix.identity(spec, 6)
    cube = rho @ rho @ rho
    if cube != I6:
        rho = rho @ cube
        if rho @ rho @ rho != I6:
            raise RuntimeError("internal: index-one block cube defect "
                               "did not split")
    return rho


def _fill_orbit(spec, orbit, r, first, offset, labels, Sg, Tg, Rg, plan):
    """Blocks of one finite orbit: three member slots plus, on the leading
    orbit of a fixed-point-free datum, the special index-one sextet."""
    rep_pt = orbit.points[0]
    m, M = rep_pt.m, rep_pt.M
    mu1, mu2, mu3 = _mus(m)
    nu = (M - m) // 2
    k = 0
    _check_theta_range(rep_pt)
    z = spec.zeta()
    zp = [spec.one().mask, z.mask, (z * z).mask]
    r0 = (r == 0)
    lead = r0 and first
    # slot ranges shared by the members; the index-one sextet is separate
    lo_dd = 2 if lead else 1
    ranges = _family_ranges(m, M, k, lo_dd)
    slot = []
    for fam in (1, 2, 3):
        a, b = ranges[fam]
        slot.extend((fam, i) for i in range(a, b + 1))
    du = len(slot)

    # labels in place order, families ascending, with index one present
    # on primed members of the leading orbit and everywhere when r = 0
    member_lo = [lo_dd, 1 if lead else lo_dd, 1 if lead else lo_dd]
    if r0 and not first:
        member_lo = [1, 1, 1]
    gpos = []
    cursor = offset
    for mem, pt in enumerate(orbit.points):
        pl = _point_labels(pt.place, m, M, k, member_lo[mem])
        pos = {(lab.family, lab.index): cursor + t
               for t, lab in enumerate(pl)}
        labels.extend(pl)
        cursor += len(pl)
        gpos.append(pos)

    # local H table at the representative, resolved to actual generators
    Sp, Tp = _table_patterns(spec, slot, ranges, mu1, mu2, k, nu,
                             rep_pt.theta)
    case = _resolve_case(spec, rep_pt)
    A0, B0 = _actual_generators(case, Sp, Tp)
    ST0 = A0 @ B0

    # hop scalars: zeta^(2(i-1)) per index, zeta^2 on shared index one
    exps = []
    for fam, i in slot:
        e = (2 * (i - 1)) % 3
        if i == 1 and r0 and not first:
            e = 2
        exps.append(e)
    dvals = [zp[e] for e in exps]

    A2 = _conj_diag(spec, ST0, exps, 1)
    B2 = _conj_diag(spec, A0, exps, 1)
    A1 = _conj_diag(spec, B0, exps, 2)
    B1 = _conj_diag(spec, ST0, exps, 2)

    members = [(0, A0, B0), (1, A1, B1), (2, A2, B2)]
    for mem, Amat, Bmat in members:
        pos = gpos[mem]
        idx = [pos[fi] for fi in slot]
        Sg[np.ix_(idx, idx)] = Amat.a
        Tg[np.ix_(idx, idx)] = Bmat.a
    # rho: slot 0 -> slot 2 -> slot 1 -> slot 0, each hop diagonal
    for t, fi in enumerate(slot):
        d = dvals[t]
        Rg[gpos[2][fi], gpos[0][fi]] = d
        Rg[gpos[1][fi], gpos[2][fi]] = d
        Rg[gpos[0][fi], gpos[1][fi]] = d

    entry = {"place": rep_pt.place.key(), "kind": "orbit",
             "psi": orbit.psi.mask, "klass": orbit.klass,
             "members": [pt.place.key() for pt in orbit.points],
             "slot_dim": du, "hops": [int(d) for d in dvals],
             "index_one_sextet": bool(lead)}
    plan.append(entry)

    if lead:
        # index-one sextet on the primed members, socle action pinned
        sex = [(1, 1, 1), (1, 2, 1), (1, 3, 1),
               (2, 1, 1), (2, 2, 1), (2, 3, 1)]
        gidx = [gpos[mem][(fam, i)] for mem, fam, i in sex]
        blocks = []
        one = spec.one().mask
        for mem in (1, 2):
            pt = orbit.points[mem]
            S3 = np.zeros((3, 3), dtype=np.int64)
            T3 = np.zeros((3, 3), dtype=np.int64)
            np.fill_diagonal(S3, one)
            np.fill_diagonal(T3, one)
            S3[0, 2] ^= one
            T3[0, 1] ^= one
            c = _resolve_case(spec, pt)
            Av, Bv = _actual_generators(c, Matrix(spec, S3),
                                        Matrix(spec, T3))
            blocks.append((Av, Bv))
        sig6 = np.zeros((6, 6), dtype=np.int64)
        tau6 = np.zeros((6, 6), dtype=np.int64)
        sig6[:3, :3] = blocks[0][0].a
        sig6[3:, 3:] = blocks[1][0].a
        tau6[:3, :3] = blocks[0][1].a
        tau6[3:, 3:] = blocks[1][1].a
        rho6 = _solve_udagger_rho(spec, Matrix(spec, sig6),
                                  Matrix(spec, tau6))
        Sg[np.ix_(gidx, gidx)] = sig6
        Tg[np.ix_(gidx, gidx)] = tau6
        Rg[np.ix_(gidx, gidx)] = rho6.a
    return cursor - offset


def build_global_rep(data: RamData) -> GlobalRep:
    """Assemble the global differential representation of the datum.

    Returns a GlobalRep whose GroupRep satisfies the defining relations
    and whose dimension equals the genus.  Raises "theta range exceeded"
    when a corrected tail would need theta coefficients past the stored
    window, "unsupported configuration" on data the mechanisms do not
    cover, and "inconsistent invariants" if the assembled dimension
    disagrees with the genus.
    """
    spec = data.spec
    specials = data.special
    orbits = data.orbits
    if not specials and not orbits:
        raise ValueError("empty branch locus")
    r = len(specials)
    if r >= 1 and not specials[0].place.is_infinity():
        raise ValueError("unsupported configuration: fixed branch locus "
                         "without the infinite place")

    dim = data.genus
    Sg = np.zeros((dim, dim), dtype=np.int64)
    Tg = np.zeros((dim, dim), dtype=np.int64)
    Rg = np.zeros((dim, dim), dtype=np.int64)
    one = spec.one().mask
    np.fill_diagonal(Sg, one)
    np.fill_diagonal(Tg, one)

    labels = []
    plan = []
    offset = 0
    for pt in specials:
        offset += _fill_special(spec, pt, offset, labels, Sg, Tg, Rg, plan)
    for j, orbit in enumerate(orbits):
        offset += _fill_orbit(spec, orbit, r, j == 0, offset, labels,
                              Sg, Tg, Rg, plan)
    if offset != dim or len(labels) != dim:
        raise ValueError("inconsistent invariants: basis count "
                         f"{len(labels)} at genus {dim}")

    rep = GroupRep("G", spec, Matrix(spec, Sg), Matrix(spec, Tg),
                   Matrix(spec, Rg))
    validate_group_rep(rep)
    return GlobalRep(rep, labels, plan)
