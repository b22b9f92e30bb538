"""The affine building of PGL_{n+1} over Q_p, in exact integer arithmetic.

Vertices are homothety classes of rank-(n+1) lattices.  Every lattice is
scaled into the standard lattice Z^{n+1} with p-power index, so each class
has a unique canonical representative: an upper-triangular column-Hermite
matrix with p-power pivots, normalized so the minimal elementary-divisor
exponent is zero.  All containment, adjacency and boundary tests reduce to
integer back-substitution against these canonical forms — no rational
arithmetic anywhere.

Boundary points (lines in projective space over Q_p) are handled through
truncations: a line class at precision m is a primitive vector modulo p^m
and unit scaling.  Membership of a line in the cylinder set attached to a
directed edge only depends on the truncation from a computable depth
onward, so every boundary computation is exact or raises PrecisionError.

All values are immutable; verification sweeps iterate over line classes
independently and are safe to parallelize externally.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import finite_geometry as fg
from .errors import LatticeError, ParameterError, PrecisionError
from .intlinalg import bareiss_det, hermite_columns, solve_upper_triangular


@dataclass(frozen=True)
class LocalFieldParams:
    """Prime p (uniformizer and residue order q = p) and dimension n >= 2."""

    p: int
    n: int

    def __post_init__(self):
        if not fg._is_prime(self.p):
            raise ParameterError(f"p must be prime, got {self.p}")
        if self.n < 2:
            raise ParameterError(f"dimension parameter n must be >= 2, got {self.n}")

    @property
    def dim(self):
        return self.n + 1

    @property
    def geometry(self):
        return fg.GeometryParams(self.n, self.p)


def _vp(x, p):
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class Lattice:
    """A finite-index sublattice of Z^{n+1} in canonical column-Hermite form.

    ``rows`` is upper triangular with p-power diagonal pivots; the columns
    generate the lattice.  Two Lattice values are equal iff their canonical
    forms are identical.
    """

    params: LocalFieldParams
    rows: tuple

    @property
    def diagonal(self):
        return tuple(self.rows[i][i] for i in range(self.params.dim))

    @property
    def exponents(self):
        p = self.params.p
        return tuple(_vp(d, p) for d in self.diagonal)

    @property
    def det_exponent(self):
        return sum(self.exponents)

    def columns(self):
        dim = self.params.dim
        return [tuple(self.rows[i][j] for i in range(dim)) for j in range(dim)]

    def __repr__(self):
        body = ";".join(",".join(str(x) for x in row) for row in self.rows)
        return f"Lattice[{body}]"


def canonical_lattice(params, matrix):
    """Canonical form of the p-adic lattice spanned by the matrix columns.

    The input is any integer matrix whose columns are linearly independent.
    Entries and determinant factors prime to p act as units and are
    absorbed: the canonical form is computed from the columns together
    with p^k * I, where k is the p-valuation of the determinant, which
    spans the same lattice over the p-adic integers.  Idempotent, and
    constant on right-multiplication orbits by matrices invertible over
    the p-adic integers.
    """
    dim = params.dim
    rows = [list(r) for r in matrix]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise LatticeError(f"expected a {dim}x{dim} matrix")
    det = bareiss_det(rows)
    if det == 0:
        raise LatticeError("matrix is singular; columns do not span a lattice")
    k = _vp(abs(det), params.p)
    cols = [tuple(rows[i][j] for i in range(dim)) for j in range(dim)]
    scale = params.p ** k
    cols += [tuple(scale if i == j else 0 for i in range(dim)) for j in range(dim)]
    return Lattice(params, hermite_columns(cols, dim))


def standard_lattice(params):
    dim = params.dim
    return Lattice(params, tuple(
        tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)))


def scaled_rows(rows, factor):
    return tuple(tuple(x * factor for x in row) for row in rows)


def _divided_rows(rows, divisor):
    out = []
    for row in rows:
        if any(x % divisor for x in row):
            raise LatticeError(f"rows are not divisible by {divisor}")
        out.append(tuple(x // divisor for x in row))
    return tuple(out)


def _contains_vector(rows, vec):
    return solve_upper_triangular(rows, vec) is not None


def _contains_lattice(outer_rows, inner_rows):
    dim = len(outer_rows)
    return all(
        _contains_vector(outer_rows, [inner_rows[i][j] for i in range(dim)])
        for j in range(dim))


@dataclass(frozen=True)
class LatticeClass:
    """A homothety class of lattices with its canonical representative.

    The representative is the unique canonical lattice in the class whose
    minimal elementary-divisor exponent is zero (equivalently, it lies in
    the standard lattice but not in p times it).  ``vertex_type`` lives in
    Z/(n+1) and equals the covolume exponent of the representative,
    negated: enlarging a lattice by one residue line raises the type by 1.
    """

    representative: Lattice
    vertex_type: int

    @property
    def params(self):
        return self.representative.params

    def __repr__(self):
        return f"LatticeClass(type={self.vertex_type}, rep={self.representative!r})"


def class_of(lattice):
    """The homothety class of a canonical lattice."""
    p = lattice.params.p
    g = 0
    for row in lattice.rows:
        for x in row:
            g = _gcd(g, abs(x))
    shift = _vp(g, p) if g else 0
    rep_rows = _divided_rows(lattice.rows, p ** shift) if shift else lattice.rows
    rep = Lattice(lattice.params, rep_rows)
    vtype = (-rep.det_exponent) % lattice.params.dim
    return LatticeClass(rep, vtype)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def base_class(params):
    """The class of the standard lattice (the fixed base vertex, type 0)."""
    return class_of(standard_lattice(params))


def adjacent(c1, c2):
    """Adjacency of two distinct vertices of the building.

    True iff representatives can be scaled so that one lies between the
    other and p^{-1} times it, checked by exact integral containment.
    """
    if c1 == c2:
        raise ParameterError("adjacency is defined for distinct classes")
    params = c1.params
    dim = params.dim
    v1 = c1.representative.det_exponent
    v2 = c2.representative.det_exponent
    for d in range(1, dim):
        # Look for a scaling with R1 ⊂ p^a R2 ⊂ p^{-1} R1, quotient size q^d.
        num = v1 - v2 - d
        if num % dim:
            continue
        a = num // dim
        shift = max(0, -a)
        r1 = scaled_rows(c1.representative.rows, params.p ** shift)
        r2 = scaled_rows(c2.representative.rows, params.p ** (shift + a))
        if _contains_lattice(r2, r1) and _contains_lattice(
                r1, scaled_rows(r2, params.p)):
            return True
    return False


@dataclass(frozen=True)
class DirectedEdge:
    """A directed edge (x, y): adjacent vertices with type(y) = type(x) + 1.

    ``small``/``big`` are the canonical scaled pair: small = p * rep(x),
    and big is the unique p-power scaling of rep(y) strictly between small
    and p^{-1} * small with one-dimensional quotient.  ``depth`` is the
    largest pivot exponent of rep(x); cylinder-set membership of a line
    class is exact from precision depth + 1 onward.
    """

    origin: LatticeClass
    target: LatticeClass
    small: tuple
    big: tuple
    depth: int

    @property
    def params(self):
        return self.origin.params

    @property
    def required_precision(self):
        return self.depth + 1

    def __repr__(self):
        return f"DirectedEdge({self.origin!r} -> {self.target!r})"


def directed_edge(origin, target):
    """Build the directed edge from origin to target, validating everything."""
    params = origin.params
    if params != target.params:
        raise ParameterError("classes live over different fields")
    dim = params.dim
    if (target.vertex_type - origin.vertex_type) % dim != 1:
        raise ParameterError("target type must exceed origin type by one")
    v_o = origin.representative.det_exponent
    v_t = target.representative.det_exponent
    num = dim + v_o - 1 - v_t
    if num % dim:
        raise ParameterError("no valid scaling: classes are not adjacent")
    a = num // dim
    # Joint p-scaling so both members of the pair are integer lattices;
    # cylinder sets are invariant under joint scaling.
    shift = max(0, -a - 1)
    p = params.p
    small = scaled_rows(origin.representative.rows, p ** (shift + 1))
    big = scaled_rows(target.representative.rows, p ** (shift + 1 + a))
    if not (_contains_lattice(big, small)
            and _contains_lattice(small, scaled_rows(big, p))):
        raise ParameterError("classes are not adjacent with unit quotient")
    depth = max(origin.representative.exponents)
    return DirectedEdge(origin, target, small, big, depth)


def is_e1_pair(c1, c2):
    """True iff (c1, c2) is a directed edge of the type-raising graph."""
    try:
        directed_edge(c1, c2)
        return True
    except ParameterError:
        return False


def _matvec_columns(rows, coeffs):
    dim = len(rows)
    return tuple(sum(rows[i][j] * coeffs[j] for j in range(dim)) for i in range(dim))


@lru_cache(maxsize=None)
def neighbors(vertex):
    """All neighboring classes, indexed by subspaces of the residue space.

    The residue space p^{-1}L/L of the representative L is identified with
    k^{n+1} through the canonical column basis of L; each nonzero proper
    subspace U lifts to the lattice L + p^{-1}(lift of U), and the lifts
    exhaust the neighbors.  Returns tuples (subspace, class); a neighbor
    from a dim-r subspace has type = type(vertex) + r.
    """
    params = vertex.params
    geometry = params.geometry
    rep = vertex.representative
    p = params.p
    small = scaled_rows(rep.rows, p)
    small_cols = [tuple(small[i][j] for i in range(params.dim)) for j in range(params.dim)]
    out = []
    for r in range(1, params.n + 1):
        for sub in fg.enumerate_subspaces(geometry, r):
            cols = list(small_cols)
            for vec in sub.basis:
                cols.append(_matvec_columns(rep.rows, vec))
            lifted = Lattice(params, hermite_columns(cols, params.dim))
            out.append((sub, class_of(lifted)))
    return tuple(out)


@lru_cache(maxsize=None)
def out_edges(vertex):
    """The directed edges leaving a vertex, one per residue point."""
    return tuple(
        (sub, directed_edge(vertex, cls))
        for sub, cls in neighbors(vertex)
        if sub.dim == 1)


def chamber_chain(flag, base):
    """The lattice chain realizing a residue chamber at a vertex.

    For a complete flag v_1 < ... < v_n at ``base`` with representative R,
    returns (L_0, L_1, ..., L_n, L_{n+1}) where L_0 = pR, L_i lifts v_i,
    and L_{n+1} = R = p^{-1}L_0 represents the same class as L_0.  Every
    consecutive quotient has order q, and all n+1 consecutive pairs are
    directed edges of the type-raising graph.
    """
    params = base.params
    if isinstance(flag, fg.Chamber):
        flag = flag.flag
    flag = tuple(flag)
    if len(flag) != params.n or any(s.dim != i + 1 for i, s in enumerate(flag)):
        raise ParameterError("expected a complete flag v_1 < ... < v_n")
    if any(s.params != params.geometry for s in flag):
        raise ParameterError("flag does not live in the residue geometry of the base")
    for smaller, larger in zip(flag, flag[1:]):
        if not fg.contains(larger, smaller):
            raise ParameterError("flag subspaces are not nested")
    rep = base.representative
    p = params.p
    small = scaled_rows(rep.rows, p)
    small_cols = [tuple(small[i][j] for i in range(params.dim)) for j in range(params.dim)]
    chain = [Lattice(params, small)]
    for sub in flag:
        cols = list(small_cols)
        for vec in sub.basis:
            cols.append(_matvec_columns(rep.rows, vec))
        chain.append(Lattice(params, hermite_columns(cols, params.dim)))
    chain.append(rep)
    for a, b in zip(chain, chain[1:]):
        if b.det_exponent != a.det_exponent - 1:
            raise AssertionError("consecutive chain quotient is not of order q")
    return tuple(chain)


def chain_edges(chain):
    """The n+1 directed edges traced by a chamber chain (wrap included)."""
    return tuple(
        directed_edge(class_of(a), class_of(b)) for a, b in zip(chain, chain[1:]))


@dataclass(frozen=True)
class LineClass:
    """A boundary line truncated to precision m.

    ``vector`` is primitive over Z/p^m, normalized so its first coordinate
    that is a unit equals 1.
    """

    params: LocalFieldParams
    precision: int
    vector: tuple

    def reduce(self, m):
        """The image of this line class at a coarser precision."""
        if not 1 <= m <= self.precision:
            raise ParameterError(f"cannot refine precision {self.precision} to {m}")
        mod = self.params.p ** m
        return LineClass(self.params, m, tuple(x % mod for x in self.vector))

    def __repr__(self):
        return f"LineClass(m={self.precision}, {','.join(str(x) for x in self.vector)})"


def normalize_line(params, vector, m):
    """Canonical representative of a primitive vector modulo unit scaling."""
    p = params.p
    mod = p ** m
    vec = [x % mod for x in vector]
    if len(vec) != params.dim:
        raise ParameterError(f"expected a vector of length {params.dim}")
    unit_at = next((i for i, x in enumerate(vec) if x % p), None)
    if unit_at is None:
        raise ParameterError("vector is not primitive modulo p")
    inv = pow(vec[unit_at], -1, mod)
    return LineClass(params, m, tuple((x * inv) % mod for x in vec))


@lru_cache(maxsize=None)
def enumerate_line_classes(params, m):
    """All line classes at precision m, in lexicographic order.

    There are p^{(m-1)n} * (p^{n+1}-1)/(p-1) of them.
    """
    if m < 1:
        raise ParameterError("precision must be >= 1")
    p = params.p
    mod = p ** m
    dim = params.dim
    found = []
    for unit_at in range(dim):
        lower = [range(0, mod, p)] * unit_at
        upper = [range(mod)] * (dim - 1 - unit_at)
        for pieces in product(*lower, *upper):
            vec = pieces[:unit_at] + (1,) + pieces[unit_at:]
            found.append(vec)
    found.sort()
    return tuple(LineClass(params, m, v) for v in found)


def omega_contains(edge, line):
    """Membership of a boundary line in the cylinder set of a directed edge.

    The cylinder set of e = (x, y) consists of the lines whose intersection
    with p^{-1}L_x spans the enlargement from L_x to L_y.  The test scales
    an integer lift of the line class into p^{-1}L_x - L_x and compares
    canonical forms; with the precision contract satisfied, the outcome is
    independent of the choice of lift, hence exact.
    """
    if line.params != edge.params:
        raise ParameterError("line and edge live over different fields")
    m = line.precision
    if m < edge.required_precision:
        raise PrecisionError(
            "line class is too coarse for this edge", edge.required_precision)
    p = edge.params.p
    x = list(line.vector)
    # Least t with p^t * x inside the small lattice; t >= 1 since the small
    # lattice has no unimodular direction and x is primitive.  p^k Z^{n+1}
    # lies inside the small lattice for k = its total pivot exponent, so
    # the loop terminates by then.
    bound = sum(_vp(edge.small[i][i], p) for i in range(len(edge.small)))
    t = 0
    scaled = x
    while not _contains_vector(edge.small, scaled):
        t += 1
        scaled = [v * p for v in scaled]
        if t > bound:
            raise AssertionError("scaling loop failed to terminate")
    # Compare L_small + O * p^{t-1} x with L_big, both scaled by p.
    cols = [tuple(edge.small[i][j] * p for i in range(len(edge.small)))
            for j in range(len(edge.small))]
    cols.append(tuple(scaled))
    candidate = hermite_columns(cols, edge.params.dim)
    return candidate == scaled_rows(edge.big, p)


def residue_subspace_of_lattice(edge):
    """The residue hyperplane at the target that separates refinements.

    In the residue space at t(e), the image of p^{-1}L_origin is a
    hyperplane H; an edge leaving t(e) refines e exactly when its residue
    point meets H trivially.  Returns H as a canonical Subspace.
    """
    params = edge.params
    p = params.p
    dim = params.dim
    over = _divided_rows(edge.small, p)  # p^{-1} L_small, integral by construction
    coords = []
    for j in range(dim):
        col = [over[i][j] * p for i in range(dim)]
        sol = solve_upper_triangular(edge.big, col)
        if sol is None:
            raise AssertionError("enlarged lattice does not contain the origin lift")
        coords.append([c % p for c in sol])
    sub = fg.subspace_from_rows(params.geometry, coords)
    if sub is fg.ZERO_SUBSPACE or sub.dim != params.n:
        raise AssertionError("residue of the origin lift is not a hyperplane")
    return sub


@dataclass(frozen=True)
class PartitionBlock:
    label: str
    size: int
    members: tuple


@dataclass(frozen=True)
class PartitionReport:
    """Outcome of an exhaustive disjoint-cover check over line classes."""

    kind: str
    params: LocalFieldParams
    precision: int
    total_lines: int
    blocks: tuple
    uncovered: int
    multiply_covered: int

    @property
    def ok(self):
        return self.uncovered == 0 and self.multiply_covered == 0

    def render(self):
        lines = [
            f"{self.kind} p={self.params.p} n={self.params.n} precision={self.precision}",
            f"lines-total: {self.total_lines}",
            f"blocks: {len(self.blocks)}",
            f"uncovered: {self.uncovered}",
            f"multiply-covered: {self.multiply_covered}",
        ]
        for block in self.blocks:
            entry = f"block {block.label} size={block.size}"
            if block.members is not None:
                entry += " members=" + "|".join(
                    ",".join(str(x) for x in vec) for vec in block.members)
            lines.append(entry)
        lines.append(f"ok: {str(self.ok).lower()}")
        return "\n".join(lines) + "\n"


def _edge_label(sub):
    return f"point={sub.index}"


def _partition_report(kind, params, m, labeled_edges, keep_members):
    lines = enumerate_line_classes(params, m)
    masks = []
    for _, edge in labeled_edges:
        masks.append([omega_contains(edge, ell) for ell in lines])
    uncovered = 0
    multiply = 0
    for idx in range(len(lines)):
        hits = sum(mask[idx] for mask in masks)
        if hits == 0:
            uncovered += 1
        elif hits > 1:
            multiply += 1
    blocks = []
    for (label, _), mask in zip(labeled_edges, masks):
        members = tuple(
            lines[i].vector for i in range(len(lines)) if mask[i]) if keep_members else None
        blocks.append(PartitionBlock(label, sum(mask), members))
    return PartitionReport(
        kind, params, m, len(lines), tuple(blocks), uncovered, multiply)


def verify_vertex_partition(vertex, m, keep_members=None):
    """Check that the cylinder sets of the out-edges of a vertex tile the boundary.

    Every line class at precision m must fall in exactly one out-edge
    cylinder set.  Blocks are labeled by the residue points indexing the
    out-edges.
    """
    edges = out_edges(vertex)
    required = max(e.required_precision for _, e in edges)
    if m < required:
        raise PrecisionError("vertex partition needs finer line classes", required)
    if keep_members is None:
        keep_members = m <= 2
    labeled = tuple((_edge_label(sub), e) for sub, e in edges)
    return _partition_report("vertex-partition", vertex.params, m, labeled, keep_members)


@dataclass(frozen=True)
class RefinementReport:
    """Outcome of splitting one cylinder set along the out-edges of its head."""

    partition: PartitionReport
    successor_count: int
    expected_successors: int
    criterion_mismatches: tuple

    @property
    def ok(self):
        return (self.partition.ok
                and self.successor_count == self.expected_successors
                and not self.criterion_mismatches)

    def render(self):
        lines = [
            f"successors: {self.successor_count} (expected {self.expected_successors})",
            f"criterion-mismatches: {len(self.criterion_mismatches)}",
        ]
        for sub_index, subset, trivial_meet in self.criterion_mismatches:
            lines.append(
                f"mismatch point={sub_index} subset={subset} trivial-meet={trivial_meet}")
        return self.partition.render() + "\n".join(lines) + f"\nok: {str(self.ok).lower()}\n"


def verify_edge_refinement(edge, m, keep_members=None):
    """Split the cylinder set of an edge along the out-edges of its head.

    Exactly q^n of the q^n + ... + 1 out-edges of the target refine the
    given edge; they are the ones whose residue point meets the hyperplane
    left behind by the origin trivially, and their cylinder sets tile the
    original one.  All three facts are verified exhaustively at precision
    m, which must be at least depth(edge) + 2.
    """
    params = edge.params
    required = edge.depth + 2
    if m < required:
        raise PrecisionError("edge refinement needs finer line classes", required)
    if keep_members is None:
        keep_members = m <= 2
    lines = enumerate_line_classes(params, m)
    parent_mask = [omega_contains(edge, ell) for ell in lines]
    hyperplane = residue_subspace_of_lattice(edge)
    successors = []
    mismatches = []
    for sub, succ in out_edges(edge.target):
        mask = [omega_contains(succ, ell) for ell in lines]
        subset = all(not hit or inside for hit, inside in zip(mask, parent_mask))
        trivial_meet = fg.intersect(sub, hyperplane) is fg.ZERO_SUBSPACE
        if subset != trivial_meet:
            mismatches.append((sub.index, subset, trivial_meet))
        if subset:
            successors.append(((_edge_label(sub)), succ, mask))
    uncovered = 0
    multiply = 0
    for idx in range(len(lines)):
        hits = sum(mask[idx] for _, _, mask in successors)
        if parent_mask[idx]:
            if hits == 0:
                uncovered += 1
            elif hits > 1:
                multiply += 1
        elif hits:
            multiply += 1
    blocks = tuple(
        PartitionBlock(
            label,
            sum(mask),
            tuple(lines[i].vector for i in range(len(lines)) if mask[i])
            if keep_members else None)
        for label, _, mask in successors)
    partition = PartitionReport(
        "edge-refinement", params, m, sum(parent_mask), blocks, uncovered, multiply)
    return RefinementReport(
        partition, len(successors), params.p ** params.n, tuple(mismatches))


def verify_chamber_partition(chain, m, keep_members=None):
    """Check that the n+1 edges of a chamber chain tile the boundary."""
    edges = chain_edges(chain)
    params = edges[0].params
    required = max(e.required_precision for e in edges)
    if m < required:
        raise PrecisionError("chamber partition needs finer line classes", required)
    if keep_members is None:
        keep_members = m <= 2
    labeled = tuple(
        (f"edge{i}:type{e.origin.vertex_type}->type{e.target.vertex_type}", e)
        for i, e in enumerate(edges))
    return _partition_report("chamber-partition", params, m, labeled, keep_members)
