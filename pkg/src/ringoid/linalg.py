"""Exact dense linear algebra over a prime field F_p.

Everything downstream (hom spaces, module actions, ideals, topologies) is a
subspace computation over F_p, so this module is deliberately small and
boring: immutable matrices, reduced row echelon form, kernels, images,
solving, and a canonical `Subspace` whose equality is bit-exact.  No floats,
no numpy; entries are plain ints in [0, p).
"""

from __future__ import annotations

import itertools
import os

DEFAULT_VECTOR_CAP = 4096
_ENV_CAP = "RINGOID_CAP_VECTORS"


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured cap; names the cap."""


class DimensionMismatch(ValueError):
    pass


def vector_cap() -> int:
    """Global cap on exhaustive vector scans, overridable via RINGOID_CAP_VECTORS."""
    raw = os.environ.get(_ENV_CAP)
    if raw is None:
        return DEFAULT_VECTOR_CAP
    return int(raw)


def check_vector_cap(count: int, what: str) -> None:
    cap = vector_cap()
    if count > cap:
        raise CapExceeded(
            f"{what} needs {count} vectors, over the cap {cap}"
            f" (raise {_ENV_CAP} to override)"
        )


_KNOWN_PRIMES = set()


def check_prime(p: int) -> None:
    if p in _KNOWN_PRIMES:
        return
    if p < 2:
        raise ValueError(f"modulus {p} is not prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"modulus {p} is not prime")
        d += 1
    _KNOWN_PRIMES.add(p)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0")
    return pow(a, p - 2, p)


Vec = tuple  # tuple[int, ...]


def vec_add(u: Vec, v: Vec, p: int) -> Vec:
    return tuple((x + y) % p for x, y in zip(u, v))


def vec_scale(c: int, v: Vec, p: int) -> Vec:
    c %= p
    return tuple((c * x) % p for x in v)


def zero_vec(n: int) -> Vec:
    return (0,) * n


class Mat:
    """An immutable rows x cols matrix over F_p.

    Linear maps use the column convention: a map V -> W is a (dim W x dim V)
    matrix applied to column vectors, and mat(g . f) = mat(g) @ mat(f).
    """

    __slots__ = ("p", "rows", "cols", "entries", "_hash", "_rank")

    def __init__(self, p: int, rows: int, cols: int, entries):
        check_prime(p)
        self.p = p
        self.rows = rows
        self.cols = cols
        ent = tuple(tuple(x % p for x in row) for row in entries)
        if len(ent) != rows or any(len(r) != cols for r in ent):
            raise DimensionMismatch(f"expected {rows}x{cols} entries")
        self.entries = ent
        self._hash = None
        self._rank = None

    @classmethod
    def from_rows(cls, p: int, rows) -> "Mat":
        rows = [tuple(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(p, len(rows), ncols, rows)

    @classmethod
    def zero(cls, p: int, rows: int, cols: int) -> "Mat":
        return cls(p, rows, cols, ((0,) * cols,) * rows)

    @classmethod
    def identity(cls, p: int, n: int) -> "Mat":
        return cls(p, n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.p == other.p
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self):
        return f"Mat(p={self.p}, {self.rows}x{self.cols}, {list(map(list, self.entries))})"

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows or self.p != other.p:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        p = self.p
        a, b = self.entries, other.entries
        out = []
        for i in range(self.rows):
            ai = a[i]
            row = []
            for j in range(other.cols):
                s = 0
                for k in range(self.cols):
                    s += ai[k] * b[k][j]
                row.append(s % p)
            out.append(tuple(row))
        return Mat(self.p, self.rows, other.cols, out)

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in add")
        p = self.p
        return Mat(p, self.rows, self.cols,
                   tuple(tuple((x + y) % p for x, y in zip(r, s))
                         for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-1)

    def scale(self, c: int) -> "Mat":
        c %= self.p
        return Mat(self.p, self.rows, self.cols,
                   tuple(tuple((c * x) % self.p for x in r) for r in self.entries))

    def transpose(self) -> "Mat":
        return Mat(self.p, self.cols, self.rows,
                   tuple(tuple(self.entries[i][j] for i in range(self.rows))
                         for j in range(self.cols)))

    def apply(self, v: Vec) -> Vec:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector length {len(v)} != cols {self.cols}")
        p = self.p
        return tuple(sum(r[k] * v[k] for k in range(self.cols)) % p for r in self.entries)

    def col(self, j: int) -> Vec:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def row(self, i: int) -> Vec:
        return self.entries[i]

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        return Mat(self.p, self.rows, self.cols + other.cols,
                   tuple(r + s for r, s in zip(self.entries, other.entries)))

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack col mismatch")
        return Mat(self.p, self.rows + other.rows, self.cols, self.entries + other.entries)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def rank(self) -> int:
        if self._rank is None:
            _, pivots = rref_rows(self.p, [list(r) for r in self.entries], self.cols)
            self._rank = len(pivots)
        return self._rank


def _rref_rows_f2(rows, ncols: int):
    """Gauss-Jordan over F_2 on bit-packed rows (bit j = column j)."""
    packed = []
    for row in rows:
        x = 0
        for j, v in enumerate(row):
            if v & 1:
                x |= 1 << j
        packed.append(x)
    nrows = len(packed)
    pivots = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        pr = None
        for i in range(r, nrows):
            if packed[i] & bit:
                pr = i
                break
        if pr is None:
            continue
        packed[r], packed[pr] = packed[pr], packed[r]
        prow = packed[r]
        for i in range(nrows):
            if i != r and packed[i] & bit:
                packed[i] ^= prow
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    out = [[(x >> j) & 1 for j in range(ncols)] for x in packed]
    return out, pivots


def rref_rows(p: int, rows, ncols: int):
    """In-place Gauss-Jordan on a list of row lists; returns (rows, pivot cols).

    The result is the unique reduced row echelon form: pivot entries 1, zeros
    above and below each pivot, zero rows sunk to the bottom.
    """
    if p == 2:
        return _rref_rows_f2(rows, ncols)
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] % p != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = inv_mod(rows[r][c], p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] % p != 0:
                f = rows[i][c] % p
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rref(m: Mat) -> Mat:
    rows, _ = rref_rows(m.p, [list(r) for r in m.entries], m.cols)
    return Mat(m.p, m.rows, m.cols, rows)


class Subspace:
    """A subspace of F_p^n in canonical form: an RREF basis with no zero rows.

    Two subspaces of the same ambient space are equal iff their canonical
    bases are identical, so Subspace is hashable and usable in sets.
    """

    __slots__ = ("p", "ambient", "mat")

    def __init__(self, p: int, ambient: int, mat: Mat):
        self.p = p
        self.ambient = ambient
        self.mat = mat  # dim x ambient, RREF, no zero rows

    @classmethod
    def from_vectors(cls, p: int, ambient: int, vectors) -> "Subspace":
        rows = [list(v) for v in vectors]
        for v in rows:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector length {len(v)} != ambient {ambient}")
        rows, pivots = rref_rows(p, rows, ambient)
        basis = rows[: len(pivots)]
        return cls(p, ambient, Mat(p, len(basis), ambient, basis))

    @classmethod
    def zero(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, Mat(p, 0, ambient, ()))

    @classmethod
    def full(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, Mat.identity(p, ambient))

    @property
    def dim(self) -> int:
        return self.mat.rows

    def basis_vectors(self):
        return self.mat.entries

    def reduce(self, v: Vec) -> Vec:
        """Canonical representative of v modulo this subspace."""
        if len(v) != self.ambient:
            raise DimensionMismatch("ambient mismatch")
        p = self.p
        v = [x % p for x in v]
        for row in self.mat.entries:
            c = next(j for j, x in enumerate(row) if x != 0)
            if v[c] != 0:
                f = v[c]
                v = [(x - f * y) % p for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, v: Vec) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient != self.ambient:
            raise DimensionMismatch("ambient mismatch")
        return all(self.contains(v) for v in other.basis_vectors())

    def key(self):
        return (self.ambient, self.mat.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient == other.ambient
            and self.mat.entries == other.mat.entries
        )

    def __hash__(self):
        return hash((self.p, self.ambient, self.mat.entries))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of F_{self.p}^{self.ambient})"

    def vectors(self):
        """Iterate every vector of the subspace, deterministically."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            v = [0] * self.ambient
            for c, row in zip(coeffs, self.mat.entries):
                if c:
                    v = [(x + c * y) % self.p for x, y in zip(v, row)]
            yield tuple(v)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient != v.ambient or u.p != v.p:
        raise DimensionMismatch("ambient mismatch in sum")
    return Subspace.from_vectors(u.p, u.ambient, u.basis_vectors() + v.basis_vectors())


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    """Zassenhaus: rref of [[U,U],[V,0]]; rows with zero left half carry the meet."""
    if u.ambient != v.ambient or u.p != v.p:
        raise DimensionMismatch("ambient mismatch in intersect")
    n = u.ambient
    rows = [list(r) + list(r) for r in u.basis_vectors()]
    rows += [list(r) + [0] * n for r in v.basis_vectors()]
    rows, pivots = rref_rows(u.p, rows, 2 * n)
    inter = []
    for row in rows[: len(pivots)]:
        if all(x == 0 for x in row[:n]):
            inter.append(row[n:])
    return Subspace.from_vectors(u.p, n, inter)


def kernel_basis(m: Mat) -> Subspace:
    """The right kernel {v : m v = 0}, a subspace of F_p^cols."""
    rows, pivots = rref_rows(m.p, [list(r) for r in m.entries], m.cols)
    rows = rows[: len(pivots)]
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * m.cols
        v[f] = 1
        for row, c in zip(rows, pivots):
            v[c] = (-row[f]) % m.p
        basis.append(v)
    return Subspace.from_vectors(m.p, m.cols, basis)


def image_basis(m: Mat) -> Subspace:
    """The column space of m, a subspace of F_p^rows."""
    return Subspace.from_vectors(m.p, m.rows, m.transpose().entries)


def row_space(m: Mat) -> Subspace:
    return Subspace.from_vectors(m.p, m.cols, m.entries)


def solve(m: Mat, v: Vec):
    """Any solution x of m x = v, or None if the system is inconsistent."""
    if len(v) != m.rows:
        raise DimensionMismatch(f"rhs length {len(v)} != rows {m.rows}")
    aug = [list(r) + [v[i] % m.p] for i, r in enumerate(m.entries)]
    rows, pivots = rref_rows(m.p, aug, m.cols + 1)
    if m.cols in pivots:
        return None
    x = [0] * m.cols
    for row, c in zip(rows, pivots):
        x[c] = row[m.cols]
    return tuple(x)


def solve_matrix(m: Mat, b: Mat):
    """X with m @ X = b, solved column by column; None if any column fails."""
    cols = []
    for j in range(b.cols):
        x = solve(m, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return Mat(m.p, m.cols, b.cols, tuple(zip(*cols)) if cols else ((),) * m.cols if m.cols else ())


def complement_data(s: Subspace):
    """(proj, lift) for the quotient F^n / S in the non-pivot coordinates.

    proj is (n - dim S) x n with kernel exactly S; lift is n x (n - dim S)
    picking the non-pivot standard vectors, and proj @ lift = identity.
    """
    n = s.ambient
    pivots = [next(j for j, x in enumerate(row) if x != 0) for row in s.mat.entries]
    nonpiv = [j for j in range(n) if j not in pivots]
    q = len(nonpiv)
    lift_cols = []
    for j in nonpiv:
        e = [0] * n
        e[j] = 1
        lift_cols.append(tuple(e))
    lift = Mat(s.p, n, q, tuple(zip(*lift_cols)) if lift_cols else ((),) * n if n else ())
    proj_rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        r = s.reduce(tuple(e))
        proj_rows.append(tuple(r[j] for j in nonpiv))
    proj = Mat(s.p, q, n, tuple(zip(*proj_rows)) if proj_rows else ((),) * q if q else ())
    return proj, lift


def preimage(m: Mat, s: Subspace) -> Subspace:
    """{x : m x in S} for S a subspace of F_p^rows; a subspace of F_p^cols."""
    if s.ambient != m.rows:
        raise DimensionMismatch("subspace ambient must match matrix rows")
    proj, _ = complement_data(s)
    return kernel_basis(proj @ m)


def apply_to_subspace(m: Mat, s: Subspace) -> Subspace:
    """The image m(S) for S a subspace of the domain F_p^cols."""
    if s.ambient != m.cols:
        raise DimensionMismatch("subspace ambient must match matrix cols")
    return Subspace.from_vectors(m.p, m.rows, [m.apply(v) for v in s.basis_vectors()])


def all_vectors(p: int, n: int):
    """All of F_p^n in lexicographic order (first coordinate slowest)."""
    return itertools.product(range(p), repeat=n)


def enumerate_subspaces(n: int, p: int, cap: int | None = None) -> list:
    """Every subspace of F_p^n exactly once, via direct RREF-shape generation.

    Refuses when p^n exceeds the cap, since callers downstream scan vectors
    of the ambient space at comparable cost.
    """
    if cap is None:
        cap = vector_cap()
    if p ** n > cap:
        raise CapExceeded(
            f"enumerate_subspaces: p^n = {p ** n} exceeds cap {cap}"
            f" (raise {_ENV_CAP} to override)"
        )
    out = []
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = []
            for i in range(k):
                for j in range(pivots[i] + 1, n):
                    if j not in pivots:
                        free.append((i, j))
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for i in range(k):
                    rows[i][pivots[i]] = 1
                for (i, j), x in zip(free, vals):
                    rows[i][j] = x
                out.append(Subspace(p, n, Mat(p, k, n, rows)))
    out.sort(key=lambda s: (s.dim, s.key()))
    return out
