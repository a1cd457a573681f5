"""Explicit matrix models for every module label in the two inventories.

Both group algebras in play are special biserial in characteristic 2:
after factoring out the socle they become path algebras with every
length-two path equal to zero, and the nonprojective indecomposables
are exactly the string and band modules of those quivers.  This module
realizes them as honest matrices.

The Klein four algebra lives on a one-vertex quiver with two loops.
Two letter systems matter: the plain generators (A, B), related to the
group by sigma = 1 + A and tau = 1 + B, and the eigenvector letters
(C, D) singled out by conjugation with rho.  The same abstract module
has a presentation in each system; the band parameters are matched by
the Moebius correspondence phi_of_lambda.

The A4 algebra lives on a three-vertex quiver, one vertex per
eigenvalue of rho.  The gamma arrows raise the vertex index by one and
the delta arrows lower it; C is the sum of the gammas and D the sum of
the deltas, and inverting

    A = zeta C + zeta D + zeta^2 CD
    B = zeta^2 C + D + zeta^2 CD

recovers the group generators from any quiver representation.  rho
itself acts as zeta^i on the vertex-i summand.

String modules follow the usual recipe: basis b_1 .. b_{l+1} along the
word, a direct letter w_j acting by alpha . b_{j+1} = b_j and an
inverse letter by alpha . b_j = b_{j+1}.  Band modules replace basis
vectors by blocks of size n and put a Jordan block J_n(mu) on the
first letter.  `induce_restrict_label` exposes the label-level
dictionary between the two zoos.
"""

import re

import numpy as np

from ._linalg import Matrix, col_basis, coords_in_basis, jordan_block
from .gf import FieldElement, all_elements
from .ramification import INF, phi_of_lambda
from .decomp import (KHLabel, KGLabel, Decomposition, restrict_decomposition)


# ---------------------------------------------------------------------------
# quivers and words

def fwd(name):
    """A direct letter."""
    return (name, True)


def rev(name):
    """A formal inverse letter."""
    return (name, False)


def parse_letters(text):
    """Letters from a space-separated word, "~" marking inverses."""
    out = []
    for tok in text.split():
        if tok.startswith("~"):
            out.append(rev(tok[1:]))
        else:
            out.append(fwd(tok))
    return tuple(out)


class Quiver:
    """A finite quiver whose ideal is generated by all length-two paths.

    That convention covers every algebra handled here, so relations are
    implicit: a word is ideal-free iff no two adjacent letters point the
    same way.
    """

    __slots__ = ("name", "vertices", "arrows")

    def __init__(self, name, vertices, arrows):
        self.name = name
        self.vertices = tuple(vertices)
        self.arrows = dict(arrows)

    def src(self, name):
        return self.arrows[name][0]

    def dst(self, name):
        return self.arrows[name][1]

    def letter_source(self, letter):
        name, direct = letter
        return self.src(name) if direct else self.dst(name)

    def letter_end(self, letter):
        name, direct = letter
        return self.dst(name) if direct else self.src(name)

    def __repr__(self):
        return f"Quiver({self.name})"


KLEIN_AB = Quiver("klein_ab", (0,), {"A": (0, 0), "B": (0, 0)})
KLEIN_CD = Quiver("klein_cd", (0,), {"C": (0, 0), "D": (0, 0)})

# gamma arrows raise the vertex index mod 3, delta arrows lower it.
A4_QUIVER = Quiver("a4", (0, 1, 2), {
    "g10": (0, 1), "g21": (1, 2), "g02": (2, 0),
    "d01": (1, 0), "d12": (2, 1), "d20": (0, 2),
})


def _letter_str(letter):
    name, direct = letter
    return name if direct else "~" + name


def _check_pair(quiver, left, right, what, pos):
    """Shared adjacency rules for string and band words."""
    if quiver.letter_source(left) != quiver.letter_end(right):
        raise ValueError(
            f"{what}: letters {pos} and {pos + 1} do not compose")
    if left[0] == right[0] and left[1] != right[1]:
        raise ValueError(f"{what}: immediate inverse at position {pos}")
    if left[1] == right[1]:
        # two direct letters form a path of w, two inverse letters one
        # of w^-1; either way it is a relation.
        raise ValueError(
            f"{what}: path {_letter_str(left)}.{_letter_str(right)} "
            "lies in the ideal")


class StringWord:
    """A reduced ideal-free walk, possibly empty (a vertex)."""

    __slots__ = ("quiver", "letters", "base_vertex")

    def __init__(self, quiver, letters, base_vertex=None):
        if isinstance(letters, str):
            letters = parse_letters(letters)
        letters = tuple(letters)
        for name, _ in letters:
            if name not in quiver.arrows:
                raise ValueError(f"invalid string: unknown arrow {name!r}")
        if not letters:
            if base_vertex not in quiver.vertices:
                raise ValueError("invalid string: empty word needs a vertex")
        else:
            base_vertex = None
        for i in range(len(letters) - 1):
            _check_pair(quiver, letters[i], letters[i + 1],
                        "invalid string", i + 1)
        self.quiver = quiver
        self.letters = letters
        self.base_vertex = base_vertex

    def __len__(self):
        return len(self.letters)

    def basis_vertex(self, j):
        """Vertex of basis vector b_{j+1}, 0-indexed j in 0..len."""
        if not self.letters:
            return self.base_vertex
        if j < len(self.letters):
            return self.quiver.letter_end(self.letters[j])
        return self.quiver.letter_source(self.letters[-1])

    def __repr__(self):
        if not self.letters:
            return f"StringWord(e_{self.base_vertex})"
        return "StringWord(%s)" % " ".join(map(_letter_str, self.letters))


class BandWord:
    """A cyclic word, every rotation a string, not a proper power.

    The first letter is required to be an arrow; every band is a
    rotation or inverse of one of this shape.
    """

    __slots__ = ("quiver", "letters")

    def __init__(self, quiver, letters):
        if isinstance(letters, str):
            letters = parse_letters(letters)
        letters = tuple(letters)
        if not letters:
            raise ValueError("invalid band: empty word")
        for name, _ in letters:
            if name not in quiver.arrows:
                raise ValueError(f"invalid band: unknown arrow {name!r}")
        if not letters[0][1]:
            raise ValueError("invalid band: first letter must be an arrow")
        l = len(letters)
        for i in range(l):
            _check_pair(quiver, letters[i], letters[(i + 1) % l],
                        "invalid band", i + 1)
        for d in range(1, l):
            if l % d == 0 and letters[d:] + letters[:d] == letters:
                raise ValueError("invalid band: proper power")
        self.quiver = quiver
        self.letters = letters

    def __len__(self):
        return len(self.letters)

    def block_vertex(self, t):
        return self.quiver.letter_end(self.letters[t])

    def __repr__(self):
        return "BandWord(%s)" % " ".join(map(_letter_str, self.letters))


# ---------------------------------------------------------------------------
# quiver representations

class QuiverRep:
    """Finite-dimensional representation: one matrix per arrow.

    The matrix of an arrow maps the source vertex space to the target
    vertex space, acting on column vectors.
    """

    __slots__ = ("quiver", "spec", "vertex_dims", "arrow_mats")

    def __init__(self, quiver, spec, vertex_dims, arrow_mats):
        self.quiver = quiver
        self.spec = spec
        self.vertex_dims = dict(vertex_dims)
        self.arrow_mats = dict(arrow_mats)

    @property
    def total_dim(self):
        return sum(self.vertex_dims.values())

    def validate(self):
        for name, mat in self.arrow_mats.items():
            s, d = self.quiver.arrows[name]
            want = (self.vertex_dims[d], self.vertex_dims[s])
            if mat.shape != want:
                raise ValueError(
                    f"relation violation: {name} has shape {mat.shape}, "
                    f"expected {want}")
        for f, (fs, _) in self.quiver.arrows.items():
            for g, (_, gd) in self.quiver.arrows.items():
                if fs != gd:
                    continue
                if not (self.arrow_mats[f] @ self.arrow_mats[g]).is_zero():
                    raise ValueError(
                        f"relation violation: {f}.{g} acts nonzero")

    def to_json(self):
        return {
            "quiver": self.quiver.name,
            "vertex_dims": {str(v): self.vertex_dims[v]
                            for v in self.quiver.vertices},
            "arrows": {name: mat.to_mask_rows()
                       for name, mat in sorted(self.arrow_mats.items())},
        }


def string_module_matrices(spec, w):
    """The string module of w as a quiver representation."""
    l = len(w)
    verts = [w.basis_vertex(j) for j in range(l + 1)]
    vdims = {v: 0 for v in w.quiver.vertices}
    vidx = []
    for v in verts:
        vidx.append(vdims[v])
        vdims[v] += 1
    arrs = {name: np.zeros((vdims[d], vdims[s]), dtype=np.int64)
            for name, (s, d) in w.quiver.arrows.items()}
    for t, (name, direct) in enumerate(w.letters):
        if direct:
            arrs[name][vidx[t], vidx[t + 1]] = 1
        else:
            arrs[name][vidx[t + 1], vidx[t]] = 1
    mats = {name: Matrix(spec, a) for name, a in arrs.items()}
    return QuiverRep(w.quiver, spec, vdims, mats)


def band_module_matrices(spec, w, n, mu):
    """The band module of w with n x n blocks and Jordan parameter mu."""
    if not isinstance(mu, FieldElement) or not mu:
        raise ValueError("invalid band: parameter must be a nonzero "
                         "field element")
    if n < 1:
        raise ValueError("invalid band: block size must be positive")
    l = len(w)
    vblocks = {v: [] for v in w.quiver.vertices}
    border = []
    for t in range(l):
        v = w.block_vertex(t)
        border.append(len(vblocks[v]))
        vblocks[v].append(t)
    vdims = {v: n * len(blocks) for v, blocks in vblocks.items()}
    arrs = {name: np.zeros((vdims[d], vdims[s]), dtype=np.int64)
            for name, (s, d) in w.quiver.arrows.items()}
    J = jordan_block(spec, n, mu).a
    I = np.eye(n, dtype=np.int64)
    for t, (name, direct) in enumerate(w.letters):
        if t == 0:
            p, q, blk = 0, 1 % l, J
        elif direct:
            p, q, blk = (t, t + 1, I) if t < l - 1 else (l - 1, 0, I)
        else:
            p, q, blk = (t + 1, t, I) if t < l - 1 else (0, l - 1, I)
        arr = arrs[name]
        r0 = n * border[p]
        c0 = n * border[q]
        arr[r0:r0 + n, c0:c0 + n] = blk
    mats = {name: Matrix(spec, a) for name, a in arrs.items()}
    return QuiverRep(w.quiver, spec, vdims, mats)


# ---------------------------------------------------------------------------
# group representations

class GroupRep:
    """Matrices of the group generators, acting on column vectors.

    group is "H" (generators sigma, tau) or "G" (sigma, tau, rho).
    """

    __slots__ = ("group", "spec", "sigma", "tau", "rho")

    def __init__(self, group, spec, sigma, tau, rho=None):
        assert group in ("H", "G")
        assert (rho is None) == (group == "H")
        self.group = group
        self.spec = spec
        self.sigma = sigma
        self.tau = tau
        self.rho = rho

    @property
    def dim(self):
        return self.sigma.rows

    def generators(self):
        out = {"sigma": self.sigma, "tau": self.tau}
        if self.rho is not None:
            out["rho"] = self.rho
        return out

    def to_json(self):
        out = {"group": self.group, "dim": self.dim,
               "sigma": self.sigma.to_mask_rows(),
               "tau": self.tau.to_mask_rows()}
        if self.rho is not None:
            out["rho"] = self.rho.to_mask_rows()
        return out

    def __repr__(self):
        return f"GroupRep({self.group}, dim={self.dim})"


def validate_group_rep(rep):
    """Check the defining relations, naming the first one that fails."""
    I = Matrix.identity(rep.spec, rep.dim)
    s, t = rep.sigma, rep.tau
    checks = [
        ("sigma^2 != 1", lambda: s @ s == I),
        ("tau^2 != 1", lambda: t @ t == I),
        ("sigma tau != tau sigma", lambda: s @ t == t @ s),
    ]
    if rep.group == "G":
        r = rep.rho
        checks += [
            ("rho^3 != 1", lambda: r @ r @ r == I),
            ("rho sigma rho^-1 != tau", lambda: r @ s @ r @ r == t),
            ("(sigma rho)^3 != 1",
             lambda: s @ r @ s @ r @ s @ r == I),
        ]
    for name, ok in checks:
        if not ok():
            raise ValueError(f"relation violation: {name}")


def _ab_from_cd(spec, C, D):
    z = spec.zeta()
    z2 = z * z
    CD = C @ D
    A = C.scale(z) + D.scale(z) + CD.scale(z2)
    B = C.scale(z2) + D + CD.scale(z2)
    return A, B


def klein_group_matrices(rep):
    """GroupRep of H from a representation of either Klein quiver."""
    rep.validate()
    spec = rep.spec
    if rep.quiver is KLEIN_AB:
        A, B = rep.arrow_mats["A"], rep.arrow_mats["B"]
    elif rep.quiver is KLEIN_CD:
        A, B = _ab_from_cd(spec, rep.arrow_mats["C"], rep.arrow_mats["D"])
    else:
        raise ValueError("expected a Klein four quiver representation")
    I = Matrix.identity(spec, rep.total_dim)
    out = GroupRep("H", spec, I + A, I + B)
    validate_group_rep(out)
    return out


def kG_group_matrices(rep):
    """GroupRep of G from an A4 quiver representation.

    Basis order: vertex 0 block, then vertex 1, then vertex 2; rho acts
    as zeta^i on the vertex-i block.
    """
    if rep.quiver is not A4_QUIVER:
        raise ValueError("expected an A4 quiver representation")
    rep.validate()
    spec = rep.spec
    z = spec.zeta()
    dims = [rep.vertex_dims[v] for v in (0, 1, 2)]
    gblocks = {}
    dblocks = {}
    for name, (s, d) in A4_QUIVER.arrows.items():
        (gblocks if name.startswith("g") else dblocks)[(d, s)] = \
            rep.arrow_mats[name]
    C = Matrix.assemble(spec, dims, dims, gblocks)
    D = Matrix.assemble(spec, dims, dims, dblocks)
    rho = Matrix.assemble(spec, dims, dims, {
        (i, i): Matrix.scalar(spec, dims[i], z ** i) for i in range(3)})
    A, B = _ab_from_cd(spec, C, D)
    I = Matrix.identity(spec, rep.total_dim)
    out = GroupRep("G", spec, I + A, I + B, rho)
    validate_group_rep(out)
    return out


def restrict_to_h(grep):
    """Forget rho."""
    assert grep.group == "G"
    return GroupRep("H", grep.spec, grep.sigma, grep.tau)


def induce_to_g(hrep):
    """Induce an H-representation to G along the coset basis 1, rho, rho^2.

    sigma permutes the cosets trivially but twists by the conjugate
    generator on each block; rho cycles the blocks.
    """
    assert hrep.group == "H"
    spec = hrep.spec
    d = hrep.dim
    dims = [d, d, d]
    s, t = hrep.sigma, hrep.tau
    st = s @ t
    sigma = Matrix.assemble(spec, dims, dims,
                            {(0, 0): s, (1, 1): st, (2, 2): t})
    tau = Matrix.assemble(spec, dims, dims,
                          {(0, 0): t, (1, 1): s, (2, 2): st})
    I = Matrix.identity(spec, d)
    rho = Matrix.assemble(spec, dims, dims,
                          {(1, 0): I, (2, 1): I, (0, 2): I})
    out = GroupRep("G", spec, sigma, tau, rho)
    validate_group_rep(out)
    return out


def direct_sum_group_reps(reps):
    """Block diagonal sum; all summands over one group and one field."""
    assert reps
    group, spec = reps[0].group, reps[0].spec
    assert all(r.group == group and r.spec == spec for r in reps)
    dims = [r.dim for r in reps]

    def diag(pick):
        return Matrix.assemble(spec, dims, dims,
                               {(i, i): pick(r) for i, r in enumerate(reps)})

    rho = diag(lambda r: r.rho) if group == "G" else None
    return GroupRep(group, spec, diag(lambda r: r.sigma),
                    diag(lambda r: r.tau), rho)


def a4_quiver_rep_from_group(grep):
    """Recover the graded quiver picture from a G-representation.

    Splits the space by rho eigenvalue, rewrites sigma and tau through
    the C, D letters and reads off the arrow blocks.  Conjugation by
    rho scales C by zeta, so for a representation satisfying the group
    relations the blocks land where the quiver says they should; a
    failure of that, or of the length-two products vanishing, raises.
    """
    assert grep.group == "G"
    spec = grep.spec
    z = spec.zeta()
    I = Matrix.identity(spec, grep.dim)
    r = grep.rho
    rr = r @ r
    bases = [col_basis(I + r.scale(z ** (-i)) + rr.scale(z ** (-2 * i)))
             for i in range(3)]
    if sum(b.cols for b in bases) != grep.dim:
        raise ValueError("rho eigenspaces do not fill the space")
    A = grep.sigma + I
    B = grep.tau + I
    AB = A @ B
    C = A.scale(z) + B.scale(z * z) + AB
    D = A + B.scale(z * z) + AB.scale(z)
    arrow_mats = {}
    for name, (s, t) in A4_QUIVER.arrows.items():
        mat = C if name.startswith("g") else D
        arrow_mats[name] = coords_in_basis(bases[t], mat @ bases[s])
    rep = QuiverRep(A4_QUIVER, spec, {i: bases[i].cols for i in range(3)},
                    arrow_mats)
    rep.validate()
    return rep


# ---------------------------------------------------------------------------
# canonical words for the labels

_DELTA = ("d01", "d12", "d20")   # _DELTA[p] lowers p+1 -> p
_GAMMA = ("g02", "g10", "g21")   # _GAMMA[p] raises p-1 -> p


def _a4_leading_delta(i, count):
    """delta^-1 gamma delta^-1 gamma ... starting at vertex i."""
    out = []
    for t in range(count):
        j = t // 2
        if t % 2 == 0:
            out.append(rev(_DELTA[(i + j) % 3]))
        else:
            out.append(fwd(_GAMMA[(i + j) % 3]))
    return tuple(out)


def _a4_leading_gamma(i, count):
    """gamma delta^-1 gamma delta^-1 ... starting at vertex i."""
    out = []
    for t in range(count):
        j = t // 2
        if t % 2 == 0:
            out.append(fwd(_GAMMA[(i + j) % 3]))
        else:
            out.append(rev(_DELTA[(i + j + 1) % 3]))
    return tuple(out)


def _a4_descending(i, count):
    """gamma^-1 delta gamma^-1 delta ... descending from vertex i."""
    out = []
    for t in range(count):
        j = t // 2
        if t % 2 == 0:
            out.append(rev(_GAMMA[(i - j) % 3]))
        else:
            out.append(fwd(_DELTA[(i - j) % 3]))
    return tuple(out)


A4_BAND = BandWord(A4_QUIVER, "d01 ~g21 d20 ~g10 d12 ~g02")
KLEIN_BAND_AB = BandWord(KLEIN_AB, "B ~A")
KLEIN_BAND_CD = BandWord(KLEIN_CD, "D ~C")


def kh_label_word(spec, label, coords="AB"):
    """The walk of a Klein four label; None when it is a band.

    In the (C, D) letters the parameter of an even-dimensional label is
    phi_of_lambda of its (A, B) parameter, so the string cases move from
    {0, inf} to {zeta, zeta^2} accordingly.
    """
    if coords == "AB":
        quiver, first, second = KLEIN_AB, "A", "B"
        param = getattr(label, "param", None)
    elif coords == "CD":
        quiver, first, second = KLEIN_CD, "C", "D"
        param = (phi_of_lambda(spec, label.param)
                 if label.kind == "EvenDim" else None)
    else:
        raise ValueError("coords must be 'AB' or 'CD'")
    if label.kind == "Triv":
        return StringWord(quiver, (), base_vertex=0)
    if label.kind == "String":
        n = (label.dim - 1) // 2
        letters = ((rev(second), fwd(first)) * n if label.x == 1
                   else (fwd(first), rev(second)) * n)
        return StringWord(quiver, letters)
    n = label.dim // 2
    if param is INF:
        letters = (rev(second), fwd(first)) * (n - 1) + (rev(second),)
    elif not param:
        letters = (rev(first), fwd(second)) * (n - 1) + (rev(first),)
    else:
        return None
    return StringWord(quiver, letters)


def kg_label_word(label):
    """The walk of an A4 label; None when it is a band."""
    if label.kind == "Simple":
        return StringWord(A4_QUIVER, (), base_vertex=label.i)
    if label.kind == "Band":
        return None
    count = label.dim - 1
    if label.kind == "OddString":
        letters = (_a4_leading_delta(label.i, count) if label.x == 1
                   else _a4_leading_gamma(label.i, count))
    else:
        letters = (_a4_leading_delta(label.i, count) if label.param is INF
                   else _a4_descending(label.i, count))
    return StringWord(A4_QUIVER, letters)


def kh_quiver_rep(spec, label, coords="AB"):
    """Matrices of a Klein four label, in either letter system."""
    w = kh_label_word(spec, label, coords)
    if w is not None:
        return string_module_matrices(spec, w)
    if coords == "AB":
        band, param = KLEIN_BAND_AB, label.param
    else:
        band, param = KLEIN_BAND_CD, phi_of_lambda(spec, label.param)
    return band_module_matrices(spec, band, label.dim // 2, param)


def kg_quiver_rep(spec, label):
    """Matrices of an A4 label over the three-vertex quiver."""
    w = kg_label_word(label)
    if w is not None:
        return string_module_matrices(spec, w)
    return band_module_matrices(spec, A4_BAND, label.dim // 6, label.param)


def kh_group_rep(spec, label, coords="AB"):
    return klein_group_matrices(kh_quiver_rep(spec, label, coords))


def kg_group_rep(spec, label):
    return kG_group_matrices(kg_quiver_rep(spec, label))


def labels_group_rep(spec, labels):
    """Block diagonal model of a label multiset (all kH or all kG)."""
    labels = list(labels)
    assert labels
    reps = []
    for lab in labels:
        if isinstance(lab, KHLabel):
            reps.append(kh_group_rep(spec, lab))
        else:
            reps.append(kg_group_rep(spec, lab))
    return direct_sum_group_reps(reps)


# ---------------------------------------------------------------------------
# induction and restriction, label level

def induce_restrict_label(spec, label, direction):
    """The label-level dictionary between the two zoos.

    direction "restrict" takes an A4 label to its Klein four multiset;
    "induce" takes a Klein four label to the A4 side.  Induction is
    exact on these algebras, so dimensions triple.
    """
    if direction == "restrict":
        if not isinstance(label, KGLabel):
            raise ValueError("restrict expects an A4 label")
        one = Decomposition("kG", spec=spec)
        one.add(label, 1)
        return restrict_decomposition(one)
    if direction != "induce":
        raise ValueError("direction must be 'induce' or 'restrict'")
    if not isinstance(label, KHLabel):
        raise ValueError("induce expects a Klein four label")
    out = Decomposition("kG", spec=spec)
    if label.kind == "Triv":
        for i in range(3):
            out.add(KGLabel.simple(i), 1)
        return out
    if label.kind == "String":
        for i in range(3):
            out.add(KGLabel.odd(label.dim, label.x, i), 1)
        return out
    z = spec.zeta()
    if label.param is not INF and label.param == z:
        for i in range(3):
            out.add(KGLabel.even(label.dim, 0, i), 1)
    elif label.param is not INF and label.param == z * z:
        for i in range(3):
            out.add(KGLabel.even(label.dim, INF, i), 1)
    else:
        phi = phi_of_lambda(spec, label.param)
        out.add(KGLabel.band(3 * label.dim, phi ** 3, phi=phi), 1)
    return out


# ---------------------------------------------------------------------------
# enumeration, parsing, dumps

def zoo_labels(spec, max_dim, side):
    """Every label of the given side with dim <= max_dim.

    Parameter families run over the whole working field, so the count
    grows with the field order; callers slice as needed.
    """
    if side == "kH":
        yield KHLabel.triv()
        for dim in range(3, max_dim + 1, 2):
            yield KHLabel.string(dim, 1)
            yield KHLabel.string(dim, 2)
        for dim in range(2, max_dim + 1, 2):
            yield KHLabel.even(dim, INF)
            for lam in all_elements(spec):
                yield KHLabel.even(dim, lam)
    elif side == "kG":
        for i in range(3):
            yield KGLabel.simple(i)
        for dim in range(3, max_dim + 1, 2):
            for x in (1, 2):
                for i in range(3):
                    yield KGLabel.odd(dim, x, i)
        for dim in range(2, max_dim + 1, 2):
            for star in (0, INF):
                for i in range(3):
                    yield KGLabel.even(dim, star, i)
        for dim in range(6, max_dim + 1, 6):
            for mu in all_elements(spec):
                if mu:
                    yield KGLabel.band(dim, mu)
    else:
        raise ValueError("side must be 'kH' or 'kG'")


_LABEL_RES = (
    (re.compile(r"^Triv$"),
     lambda spec, m: KHLabel.triv()),
    (re.compile(r"^M\[2n\+1=(\d+),x=([12])\]$"),
     lambda spec, m: KHLabel.string(int(m[1]), int(m[2]))),
    (re.compile(r"^N\[2n=(\d+),lambda=(inf|\d+)\]$"),
     lambda spec, m: KHLabel.even(
         int(m[1]), INF if m[2] == "inf" else spec.element(int(m[2])))),
    (re.compile(r"^S\[i=([012])\]$"),
     lambda spec, m: KGLabel.simple(int(m[1]))),
    (re.compile(r"^M\[2n\+1=(\d+),x=([12]),i=([012])\]$"),
     lambda spec, m: KGLabel.odd(int(m[1]), int(m[2]), int(m[3]))),
    (re.compile(r"^N\[2n=(\d+),\*=(inf|0),i=([012])\]$"),
     lambda spec, m: KGLabel.even(
         int(m[1]), INF if m[2] == "inf" else 0, int(m[3]))),
    (re.compile(r"^B\[6n=(\d+),mu=(\d+)\]$"),
     lambda spec, m: KGLabel.band(int(m[1]), spec.element(int(m[2])))),
)


def parse_label(spec, text):
    """Inverse of label_str, for the command line."""
    text = text.strip()
    for pat, make in _LABEL_RES:
        m = pat.match(text)
        if m:
            return make(spec, m)
    raise ValueError(f"unrecognized label {text!r}")


def zoo_dump(spec, label, coords="AB"):
    """JSON description of one label: dims plus all the matrices."""
    if isinstance(label, KHLabel):
        qrep = kh_quiver_rep(spec, label, coords)
        grep = klein_group_matrices(qrep)
        side = "kH"
    else:
        qrep = kg_quiver_rep(spec, label)
        grep = kG_group_matrices(qrep)
        side = "kG"
    out = {"label": label.label_str(), "side": side, "dim": grep.dim,
           "field": spec.to_json(), "quiver": qrep.to_json(),
           "generators": grep.to_json()}
    return out
