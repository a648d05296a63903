"""Linear maps between tensor powers of a d-dimensional free module.

A LinearMap of shape (d, p, q) sends V^{⊗p} -> V^{⊗q} and is stored as a
dense d^q x d^p matrix over one ring of the scalar tower (rows index the
codomain).  Basis ordering contract: the basis vector
e_{i_0} ⊗ ... ⊗ e_{i_{n-1}} has index sum_k i_k * d^{n-1-k}, i.e. the
leftmost tensor factor is the most significant digit.  `tensor` is the
Kronecker product consistent with that ordering.

Arity 0 is the ground ring: a map V^{⊗2} -> K is a 1 x d^2 matrix, a map
K -> V^{⊗2} is d^2 x 1.

Exact Gaussian elimination (rank / kernel_basis / solve) is provided for
matrices over the field rings only (GaussRat and RatFunA).
"""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import Dual, Ring, RingMismatchError, dual, promote, ring_of, specialize

Scalar = object


class ShapeMismatchError(ValueError):
    """Operands have incompatible shapes (reports both)."""


@dataclass(frozen=True)
class MapShape:
    d: int
    p: int
    q: int

    @property
    def rows(self) -> int:
        return self.d**self.q

    @property
    def cols(self) -> int:
        return self.d**self.p

    def __str__(self):
        return f"(d={self.d}, {self.p}->{self.q})"


@dataclass(frozen=True)
class LinearMap:
    shape: MapShape
    ring: Ring
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.shape.rows or any(
            len(r) != self.shape.cols for r in self.rows
        ):
            raise ShapeMismatchError(
                f"matrix is {len(self.rows)} x {len(self.rows[0]) if self.rows else 0}, "
                f"shape {self.shape} wants {self.shape.rows} x {self.shape.cols}"
            )

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rows(d: int, p: int, q: int, ring: Ring, rows) -> "LinearMap":
        return LinearMap(MapShape(d, p, q), ring, tuple(tuple(r) for r in rows))

    @staticmethod
    def zero(d: int, p: int, q: int, ring: Ring) -> "LinearMap":
        z = ring.zero()
        shape = MapShape(d, p, q)
        return LinearMap(shape, ring, tuple(
            (z,) * shape.cols for _ in range(shape.rows)
        ))

    @staticmethod
    def identity(d: int, n: int, ring: Ring) -> "LinearMap":
        z, o = ring.zero(), ring.one()
        dim = d**n
        return LinearMap(MapShape(d, n, n), ring, tuple(
            tuple(o if i == j else z for j in range(dim)) for i in range(dim)
        ))

    # -- elementwise --------------------------------------------------------

    def _check_same(self, other: "LinearMap", what: str):
        if self.shape != other.shape:
            raise ShapeMismatchError(
                f"{what}: shapes differ, {self.shape} vs {other.shape}"
            )
        if self.ring != other.ring:
            raise RingMismatchError(
                f"{what}: rings differ, {self.ring} vs {other.ring}"
            )

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check_same(other, "add")
        return LinearMap(self.shape, self.ring, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._check_same(other, "subtract")
        return LinearMap(self.shape, self.ring, tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.rows, other.rows)
        ))

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.shape, self.ring, tuple(
            tuple(-a for a in r) for r in self.rows
        ))

    def scale(self, s: Scalar) -> "LinearMap":
        if not isinstance(s, int) and ring_of(s) != self.ring:
            raise RingMismatchError(
                f"scalar ring {ring_of(s)} differs from map ring {self.ring}"
            )
        return LinearMap(self.shape, self.ring, tuple(
            tuple(s * a for a in r) for r in self.rows
        ))

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i][j]


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """f ∘ g (apply g first).  Requires domain of f = codomain of g."""
    if f.shape.d != g.shape.d:
        raise ShapeMismatchError(f"compose: d differs, {f.shape} vs {g.shape}")
    if f.shape.p != g.shape.q:
        raise ShapeMismatchError(
            f"compose: domain arity {f.shape.p} != codomain arity {g.shape.q}"
        )
    if f.ring != g.ring:
        raise RingMismatchError(f"compose: rings differ, {f.ring} vs {g.ring}")
    z = f.ring.zero()
    n, k, m = f.shape.rows, f.shape.cols, g.shape.cols
    out = [[z] * m for _ in range(n)]
    for r in range(n):
        frow = f.rows[r]
        outr = out[r]
        for t in range(k):
            c = frow[t]
            if c.is_zero():
                continue
            grow = g.rows[t]
            for s in range(m):
                gv = grow[s]
                if not gv.is_zero():
                    outr[s] = outr[s] + c * gv
    return LinearMap(MapShape(f.shape.d, g.shape.p, f.shape.q), f.ring,
                     tuple(tuple(r) for r in out))


def tensor(f: LinearMap, g: LinearMap) -> LinearMap:
    """Kronecker product; f's factors are the more significant (leftmost)."""
    if f.shape.d != g.shape.d:
        raise ShapeMismatchError(f"tensor: d differs, {f.shape} vs {g.shape}")
    if f.ring != g.ring:
        raise RingMismatchError(f"tensor: rings differ, {f.ring} vs {g.ring}")
    z = f.ring.zero()
    gz = (z,) * g.shape.cols
    rows = []
    for rf in f.rows:
        for rg in g.rows:
            row: list[Scalar] = []
            for cf in rf:
                if cf.is_zero():
                    row.extend(gz)
                else:
                    row.extend(cf * cg for cg in rg)
            rows.append(tuple(row))
    return LinearMap(
        MapShape(f.shape.d, f.shape.p + g.shape.p, f.shape.q + g.shape.q),
        f.ring, tuple(rows),
    )


def tensor_all(maps: list[LinearMap], d: int, ring: Ring) -> LinearMap:
    out = LinearMap.identity(d, 0, ring)
    for m in maps:
        out = tensor(out, m)
    return out


def _digits(idx: int, d: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        out[k] = idx % d
        idx //= d
    return tuple(out)


def _index(digits, d: int) -> int:
    idx = 0
    for v in digits:
        idx = idx * d + v
    return idx


def permutation(d: int, n: int, perm: tuple[int, ...], ring: Ring) -> LinearMap:
    """Map sending e_{i_0}⊗...⊗e_{i_{n-1}} to the vector whose factor at
    slot perm[k] is e_{i_k}.  perm must be a bijection of range(n); the
    assignment perm -> map is a group homomorphism for left-to-right
    composition of permutations.
    """
    if sorted(perm) != list(range(n)):
        raise ShapeMismatchError(f"not a permutation of range({n}): {perm}")
    z, o = ring.zero(), ring.one()
    dim = d**n
    rows = [[z] * dim for _ in range(dim)]
    for col in range(dim):
        src = _digits(col, d, n)
        dst = [0] * n
        for k in range(n):
            dst[perm[k]] = src[k]
        rows[_index(dst, d)][col] = o
    return LinearMap(MapShape(d, n, n), ring, tuple(tuple(r) for r in rows))


def swap(d: int, ring: Ring) -> LinearMap:
    """The adjacent transposition on V ⊗ V."""
    return permutation(d, 2, (1, 0), ring)


def partial_trace(f: LinearMap, slot: int) -> LinearMap:
    """Contract domain slot `slot` with codomain slot `slot` (0-based)."""
    d, p, q = f.shape.d, f.shape.p, f.shape.q
    if p != q or p < 1:
        raise ShapeMismatchError(f"partial trace needs square shape, got {f.shape}")
    if not 0 <= slot < p:
        raise ShapeMismatchError(f"slot {slot} out of range for arity {p}")
    n = p
    z = f.ring.zero()
    dim = d ** (n - 1)
    rows = [[z] * dim for _ in range(dim)]
    for r in range(dim):
        rd = _digits(r, d, n - 1)
        for c in range(dim):
            cd = _digits(c, d, n - 1)
            acc = z
            for b in range(d):
                ri = _index(rd[:slot] + (b,) + rd[slot:], d)
                ci = _index(cd[:slot] + (b,) + cd[slot:], d)
                v = f.rows[ri][ci]
                if not v.is_zero():
                    acc = acc + v
            rows[r][c] = acc
    return LinearMap(MapShape(d, n - 1, n - 1), f.ring, tuple(tuple(r) for r in rows))


def partial_trace_last(f: LinearMap) -> LinearMap:
    """Trace over the last tensor factor; equals closing the last strand
    with the coevaluation below and the evaluation above."""
    return partial_trace(f, f.shape.p - 1)


def full_trace(f: LinearMap) -> Scalar:
    if f.shape.p != f.shape.q:
        raise ShapeMismatchError(f"trace needs square shape, got {f.shape}")
    acc = f.ring.zero()
    for i in range(f.shape.rows):
        acc = acc + f.rows[i][i]
    return acc


def trace_of_product(f: LinearMap, g: LinearMap) -> Scalar:
    """Tr(f ∘ g) without materializing the product."""
    if f.shape.p != g.shape.q or f.shape.q != g.shape.p:
        raise ShapeMismatchError(f"trace of product: {f.shape} vs {g.shape}")
    if f.ring != g.ring:
        raise RingMismatchError(f"rings differ, {f.ring} vs {g.ring}")
    acc = f.ring.zero()
    for i in range(f.shape.rows):
        frow = f.rows[i]
        for j in range(f.shape.cols):
            v = frow[j]
            if not v.is_zero():
                w = g.rows[j][i]
                if not w.is_zero():
                    acc = acc + v * w
    return acc


# ---------------------------------------------------------------------------
# Exact elimination over the field rings
# ---------------------------------------------------------------------------


def _require_field(ring: Ring, what: str):
    if not ring.is_field:
        raise RingMismatchError(
            f"{what} needs a field; {ring} is not one (use gauss or ratfun)"
        )


def rref(rows: list[list[Scalar]], ring: Ring) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    _require_field(ring, "elimination")
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c].inv()
        m[r] = [inv * v for v in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows, ring: Ring) -> int:
    return len(rref(rows, ring)[1])


def kernel_basis(rows, ring: Ring) -> list[list[Scalar]]:
    """Basis of the right kernel, one vector per free column."""
    m = [list(r) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    red, pivots = rref(m, ring)
    free = [c for c in range(ncols) if c not in pivots]
    z, o = ring.zero(), ring.one()
    basis = []
    for fc in free:
        v = [z] * ncols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(rows, rhs: list[Scalar], ring: Ring) -> list[Scalar] | None:
    """One exact solution of rows · x = rhs (free variables set to 0),
    or None when the system is inconsistent."""
    _require_field(ring, "solve")
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    red, pivots = rref(m, ring)
    if ncols in pivots:
        return None
    z = ring.zero()
    x = [z] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def invert_rows(rows, ring: Ring) -> list[list[Scalar]] | None:
    """Inverse of a square matrix over a field ring, or None if singular."""
    _require_field(ring, "inversion")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeMismatchError("inversion needs a square matrix")
    z, o = ring.zero(), ring.one()
    aug = [list(r) + [o if i == j else z for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(aug, ring)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


# --- ring-changing entry maps -------------------------------------------

def map_apply(f: LinearMap, fn, ring: Ring) -> LinearMap:
    return LinearMap(f.shape, ring, tuple(tuple(fn(x) for x in row) for row in f.rows))


def map_promote(f: LinearMap, target: Ring) -> LinearMap:
    return map_apply(f, lambda x: promote(x, target), target)


def map_specialize(f: LinearMap, value) -> LinearMap:
    """Substitute a rational value for the Laurent variable in every entry."""
    out = tuple(tuple(specialize(x, value) for x in row) for row in f.rows)
    return LinearMap(f.shape, ring_of(out[0][0]), out)


def dual_embed(f: LinearMap) -> LinearMap:
    """View a map over the dual ring with zero slope part."""
    dr = dual(f.ring)
    return map_apply(f, lambda x: Dual(x, f.ring.zero()), dr)


def dual_parts(f: LinearMap) -> tuple[LinearMap, LinearMap]:
    """Split a map over a dual ring into (body, slope) over the base ring."""
    if f.ring.name != "dual":
        raise RingMismatchError(f"dual_parts wants a dual ring, got {f.ring}")
    base = f.ring.base
    body = map_apply(f, lambda x: x.body, base)
    slope = map_apply(f, lambda x: x.slope, base)
    return body, slope
