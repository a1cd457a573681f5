"""Dense exact linear algebra over GF(2^m).

A matrix holds its entries as bit masks in a numpy int64 array.
Products go through exp/log tables built once per field, so a matrix
product is a handful of vectorized lookups rather than a Python loop.
Rank is computed over GF(2): every field entry blows up to an m x m bit
block, rows are packed into Python integers, and the big-int XOR does
the elimination. Row reduction over the field itself (needed for
nullspaces) is vectorized one pivot at a time, which is fine at the
sizes these modules meet.
"""

import numpy as np

_TABLES = {}


def _field_tables(spec):
    """(exp, log) arrays for spec, cached.

    exp has length 2(q-1) so exp[log a + log b] never needs a modulo;
    log[0] is -1 and multiplication masks those lanes to zero.
    """
    key = (spec.m, spec.modulus)
    if key in _TABLES:
        return _TABLES[key]
    q = spec.order
    gen = None
    for cand in range(2, q):
        e = spec.element(cand)
        acc = e
        steps = 1
        while acc.mask != 1:
            acc = acc * e
            steps += 1
        if steps == q - 1:
            gen = e
            break
    assert gen is not None
    exp = np.zeros(2 * (q - 1), dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    acc = spec.one()
    for i in range(q - 1):
        exp[i] = acc.mask
        exp[i + q - 1] = acc.mask
        log[acc.mask] = i
        acc = acc * gen
    _TABLES[key] = (exp, log)
    return exp, log


def _mul_arrays(spec, a, b):
    """Entrywise field product of two broadcastable mask arrays."""
    exp, log = _field_tables(spec)
    out = exp[log[a] + log[b]]
    zero = (a == 0) | (b == 0)
    return np.where(zero, 0, out)


def _inv_mask(spec, mask):
    exp, log = _field_tables(spec)
    if mask == 0:
        raise ZeroDivisionError("inverting zero")
    return int(exp[(spec.order - 1 - log[mask]) % (spec.order - 1)])


class Matrix:
    """An exact matrix over GF(2^m), entries stored as masks."""

    __slots__ = ("spec", "a")

    def __init__(self, spec, arr):
        self.spec = spec
        self.a = np.ascontiguousarray(arr, dtype=np.int64)
        assert self.a.ndim == 2

    @classmethod
    def zeros(cls, spec, rows, cols):
        return cls(spec, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, spec, n):
        return cls(spec, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, spec, rows):
        arr = np.array(rows, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(rows), -1)
        return cls(spec, arr)

    @classmethod
    def scalar(cls, spec, n, c):
        return cls(spec, np.eye(n, dtype=np.int64) * c.mask)

    @classmethod
    def assemble(cls, spec, row_dims, col_dims, blocks):
        """Block matrix from {(i, j): Matrix}; absent blocks are zero."""
        roff = np.concatenate(([0], np.cumsum(row_dims)))
        coff = np.concatenate(([0], np.cumsum(col_dims)))
        out = np.zeros((int(roff[-1]), int(coff[-1])), dtype=np.int64)
        for (i, j), blk in blocks.items():
            r0, c0 = roff[i], coff[j]
            assert blk.a.shape == (row_dims[i], col_dims[j])
            out[r0:r0 + row_dims[i], c0:c0 + col_dims[j]] = blk.a
        return cls(spec, out)

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def element(self, i, j):
        return self.spec.element(int(self.a[i, j]))

    def __add__(self, other):
        assert self.shape == other.shape
        return Matrix(self.spec, self.a ^ other.a)

    def __matmul__(self, other):
        assert self.cols == other.rows
        prod = _mul_arrays(self.spec, self.a[:, :, None],
                           other.a[None, :, :])
        return Matrix(self.spec, np.bitwise_xor.reduce(prod, axis=1))

    def scale(self, c):
        return Matrix(self.spec,
                      _mul_arrays(self.spec, np.int64(c.mask), self.a))

    def transpose(self):
        return Matrix(self.spec, self.a.T)

    def is_zero(self):
        return not self.a.any()

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and bool((self.a == other.a).all()))

    def copy(self):
        return Matrix(self.spec, self.a.copy())

    def to_mask_rows(self):
        return [[int(v) for v in row] for row in self.a]

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over GF(2^{self.spec.m}))"

    # -- elimination ------------------------------------------------

    def _gf2_rows(self):
        """The GF(2) blow-up, one packed integer per bit row."""
        m = self.spec.m
        shifts = (np.int64(1) << np.arange(m, dtype=np.int64))
        out = []
        for i in range(self.rows):
            # shifted[b, j] = x^b * row[j]
            shifted = _mul_arrays(self.spec, shifts[:, None],
                                  self.a[i][None, :])
            for k in range(m):
                bits = ((shifted >> k) & 1).reshape(-1).astype(np.uint8)
                packed = np.packbits(bits, bitorder="little")
                out.append(int.from_bytes(packed.tobytes(), "little"))
        return out

    def rank(self):
        m = self.spec.m
        pivots = {}
        for row in self._gf2_rows():
            while row:
                lead = row.bit_length() - 1
                other = pivots.get(lead)
                if other is None:
                    pivots[lead] = row
                    break
                row ^= other
        r2 = len(pivots)
        assert r2 % m == 0
        return r2 // m

    def rref(self):
        """(reduced matrix, pivot column list), over the field."""
        M = self.a.copy()
        spec = self.spec
        piv = []
        r = 0
        for j in range(self.cols):
            if r == self.rows:
                break
            hit = np.nonzero(M[r:, j])[0]
            if hit.size == 0:
                continue
            i = r + int(hit[0])
            if i != r:
                M[[r, i]] = M[[i, r]]
            inv = _inv_mask(spec, int(M[r, j]))
            M[r] = _mul_arrays(spec, np.int64(inv), M[r])
            col = M[:, j].copy()
            col[r] = 0
            M ^= _mul_arrays(spec, col[:, None], M[r][None, :])
            piv.append(j)
            r += 1
        return Matrix(spec, M), piv

    def right_nullspace(self):
        """Matrix whose columns form a basis of the kernel."""
        R, piv = self.rref()
        free = [j for j in range(self.cols) if j not in piv]
        out = np.zeros((self.cols, len(free)), dtype=np.int64)
        for t, j in enumerate(free):
            out[j, t] = 1
            for r, p in enumerate(piv):
                out[p, t] = R.a[r, j]
        return Matrix(self.spec, out)


def jordan_block(spec, n, mu):
    """Upper triangular Jordan block with eigenvalue mu."""
    arr = np.eye(n, dtype=np.int64) * mu.mask
    arr ^= np.eye(n, k=1, dtype=np.int64)
    return Matrix(spec, arr)


def kron(A, B):
    """Kronecker product, row-major block layout."""
    prod = _mul_arrays(A.spec, A.a[:, None, :, None], B.a[None, :, None, :])
    return Matrix(A.spec, prod.reshape(A.rows * B.rows, A.cols * B.cols))


# ---------------------------------------------------------------------------
# subspaces, represented by matrices whose columns span them

def hstack(mats):
    assert mats
    spec = mats[0].spec
    return Matrix(spec, np.concatenate([m.a for m in mats], axis=1))


def vstack(mats):
    assert mats
    spec = mats[0].spec
    return Matrix(spec, np.concatenate([m.a for m in mats], axis=0))


def zero_space(spec, d):
    return Matrix(spec, np.zeros((d, 0), dtype=np.int64))


def col_basis(M):
    """Canonical basis of the column space (rref rows, transposed)."""
    R, piv = M.transpose().rref()
    return Matrix(M.spec, R.a[:len(piv)].T.copy())


def equations_of(S):
    """Rows e with e @ S = 0; the column space is their kernel."""
    return S.transpose().right_nullspace().transpose()


def sum_spaces(spaces):
    return col_basis(hstack(spaces))


def intersect_spaces(S1, S2):
    if S1.cols == 0 or S2.cols == 0:
        return zero_space(S1.spec, S1.rows)
    ns = hstack([S1, S2]).right_nullspace()
    return col_basis(S1 @ Matrix(S1.spec, ns.a[:S1.cols]))


def image_space(f, S):
    return col_basis(f @ S)


def preimage_space(f, S):
    """{x : f x in colspace(S)} as a canonical basis."""
    E = equations_of(S)
    if E.rows == 0:
        return Matrix.identity(f.spec, f.cols)
    return col_basis((E @ f).right_nullspace())


def space_contains(S, vecs):
    """Whether every column of vecs lies in colspace(S)."""
    E = equations_of(S)
    if E.rows == 0:
        return True
    return (E @ vecs).is_zero()


def coords_in_basis(B, vecs):
    """Solve B @ X = vecs for X; raises if some column is outside."""
    aug = hstack([B, vecs])
    R, piv = aug.rref()
    if any(p >= B.cols for p in piv):
        raise ValueError("vector outside the spanning set")
    out = np.zeros((B.cols, vecs.cols), dtype=np.int64)
    for row, p in enumerate(piv):
        out[p] = R.a[row, B.cols:]
    return Matrix(B.spec, out)
