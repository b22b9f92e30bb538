"""Projective geometry of k^{n+1} over a prime field k of order q.

Subspaces are kept in reduced-row-echelon canonical form, which makes every
subspace comparison an exact tuple comparison and pins a canonical index
order: within each dimension, subspaces are sorted lexicographically on
their flattened basis matrix.  That order is normative for the rest of the
package (presentation files, relation matrices, report checksums).

All values are immutable and all operations are pure functions, so the
module is safe to use from concurrent contexts without coordination.
"""

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .errors import ParameterError


def _is_prime(m):
    if m < 2:
        return False
    f = 2
    while f * f <= m:
        if m % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class GeometryParams:
    """Dimension parameter n and residue order q (prime).

    The vertex-transitive group constructions downstream need n >= 2; the
    degenerate n = 1 geometry (a projective line) is allowed here because
    tests use it as a sanity check.
    """

    n: int
    q: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"dimension parameter n must be >= 1, got {self.n}")
        if not _is_prime(self.q):
            raise ParameterError(f"residue order q must be prime, got {self.q}")

    @property
    def ambient_dim(self):
        return self.n + 1


@dataclass(frozen=True)
class Subspace:
    """A nonzero proper subspace of k^{n+1} in RREF canonical form.

    ``index`` is the subspace's ordinal within its dimension class under
    the canonical lexicographic order.
    """

    params: GeometryParams
    dim: int
    basis: tuple
    index: int

    def __repr__(self):
        rows = ";".join(",".join(str(x) for x in row) for row in self.basis)
        return f"Subspace(dim={self.dim}, index={self.index}, [{rows}])"


class _ZeroSubspace:
    """Distinguished marker for the zero subspace (never a Subspace value)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO_SUBSPACE"


ZERO_SUBSPACE = _ZeroSubspace()


@dataclass(frozen=True)
class Chamber:
    """A complete flag v_1 < v_2 < ... < v_n of subspaces, dim(v_i) = i."""

    flag: tuple

    def __repr__(self):
        return "Chamber(" + " < ".join(f"{s.dim}:{s.index}" for s in self.flag) + ")"


def rref(rows, q):
    """Reduced row echelon form over the field with q elements.

    Zero rows are dropped; the result is the canonical basis of the row
    span as a tuple of tuples with entries in 0..q-1.
    """
    m = [[x % q for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][c]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][c], -1, q)
        m[rank] = [(x * inv) % q for x in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % q for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return tuple(tuple(row) for row in m[:rank])


def nullspace(rows, q, width):
    """Canonical basis of the right kernel of the given row matrix."""
    reduced = rref(rows, q)
    pivots = []
    for row in reduced:
        pivots.append(next(j for j in range(width) if row[j]))
    free = [j for j in range(width) if j not in pivots]
    kernel = []
    for f in free:
        vec = [0] * width
        vec[f] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-reduced[i][f]) % q
        kernel.append(vec)
    return rref(kernel, q)


def gaussian_binomial(big, small, q):
    """Number of small-dimensional subspaces of a big-dimensional q-space."""
    num = den = 1
    for i in range(small):
        num *= q ** (big - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def flag_count(params, ambient=None):
    """Number of complete flags of k^ambient (default k^{n+1})."""
    dim = params.ambient_dim if ambient is None else ambient
    total = 1
    for k in range(1, dim):
        total *= (params.q ** (k + 1) - 1) // (params.q - 1)
    return total


@lru_cache(maxsize=None)
def enumerate_subspaces(params, r):
    """All r-dimensional subspaces, sorted by canonical index.

    Every rank-r RREF matrix is generated directly from its pivot-column
    pattern, so the enumeration itself is an independent construction the
    count identities can be tested against.
    """
    if not 1 <= r <= params.n:
        raise ParameterError(f"subspace dimension must be in 1..{params.n}, got {r}")
    width = params.ambient_dim
    q = params.q
    found = []
    for pivots in combinations(range(width), r):
        free_positions = [
            (i, j)
            for i in range(r)
            for j in range(width)
            if j > pivots[i] and j not in pivots
        ]
        for values in product(range(q), repeat=len(free_positions)):
            m = [[0] * width for _ in range(r)]
            for i in range(r):
                m[i][pivots[i]] = 1
            for (i, j), v in zip(free_positions, values):
                m[i][j] = v
            found.append(tuple(tuple(row) for row in m))
    found.sort()
    return tuple(
        Subspace(params, r, basis, idx) for idx, basis in enumerate(found))


@lru_cache(maxsize=None)
def _basis_index(params, r):
    return {s.basis: s for s in enumerate_subspaces(params, r)}


def subspace_from_rows(params, rows):
    """Canonicalize a spanning set of row vectors into a Subspace."""
    basis = rref(rows, params.q)
    if not basis:
        return ZERO_SUBSPACE
    if len(basis) > params.n:
        raise ParameterError("spanning set is not a proper subspace")
    return _basis_index(params, len(basis))[basis]


def contains(big, small):
    """True iff the subspace ``small`` lies inside ``big``."""
    if small.dim > big.dim:
        return False
    q = big.params.q
    for vec in small.basis:
        v = list(vec)
        for row in big.basis:
            lead = next(j for j in range(len(row)) if row[j])
            if v[lead]:
                f = v[lead]
                v = [(a - f * b) % q for a, b in zip(v, row)]
        if any(v):
            return False
    return True


def incident(u, v):
    """Incidence of two distinct subspaces: one contains the other."""
    if u == v:
        raise ParameterError("incidence is defined for distinct subspaces")
    return contains(u, v) or contains(v, u)


def intersect(u, v):
    """Intersection u ∩ v, canonicalized; ZERO_SUBSPACE if trivial."""
    width = u.params.ambient_dim
    q = u.params.q
    du = nullspace(u.basis, q, width)
    dv = nullspace(v.basis, q, width)
    joint = nullspace(tuple(du) + tuple(dv), q, width)
    if not joint:
        return ZERO_SUBSPACE
    return subspace_from_rows(u.params, joint)


def dual(u):
    """The subspace orthogonal to u; a bijection Π_r -> Π_{n+1-r}."""
    ker = nullspace(u.basis, u.params.q, u.params.ambient_dim)
    return subspace_from_rows(u.params, ker)


def count_points_off_hyperplane(params):
    """Number of points meeting a hyperplane trivially (independent of it).

    Computed by full enumeration over every hyperplane, asserting the
    count does not depend on the hyperplane chosen.
    """
    points = enumerate_subspaces(params, 1)
    counts = set()
    for h in enumerate_subspaces(params, params.n):
        counts.add(sum(1 for b in points if not contains(h, b)))
    if len(counts) != 1:
        raise AssertionError(f"point count varies across hyperplanes: {sorted(counts)}")
    return counts.pop()


@lru_cache(maxsize=None)
def enumerate_chambers(params):
    """All complete flags of k^{n+1}, in lexicographic flag order."""
    flags = [(s,) for s in enumerate_subspaces(params, 1)]
    for r in range(2, params.n + 1):
        extended = []
        for f in flags:
            for s in enumerate_subspaces(params, r):
                if contains(s, f[-1]):
                    extended.append(f + (s,))
        flags = extended
    return tuple(Chamber(f) for f in flags)


def canonical_table(params):
    """Canonical index tables as text, one subspace per line.

    Line format: ``index<TAB>dim<TAB>row-major basis entries`` with the
    entries space-separated.  Dimensions 1..n are concatenated in order;
    this text is the normative reference order for every other module.
    """
    lines = []
    for r in range(1, params.n + 1):
        for s in enumerate_subspaces(params, r):
            flat = " ".join(str(x) for row in s.basis for x in row)
            lines.append(f"{s.index}\t{s.dim}\t{flat}")
    return "\n".join(lines) + "\n"


def table_checksum(params):
    """SHA-256 of the canonical index tables; guards against index drift."""
    return hashlib.sha256(canonical_table(params).encode("utf-8")).hexdigest()
