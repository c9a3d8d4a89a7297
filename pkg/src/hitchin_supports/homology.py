"""Exact reduced simplicial homology over the rationals.

Boundary matrices are sparse and exact.  Ranks go through a fraction-free
(integer, content-normalized) sparse elimination with minimal-fill pivoting,
double-checked by elimination modulo two random primes above 2**30; matrices
with a side above 500 are handled modular-first, falling back to a full exact
recomputation whenever the passes disagree.  Everything here is reduced
homology: the empty face is a cell in dimension -1, so the empty complex has
Betti number 1 there and nowhere else.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complexes import FaceComplex

EXACT_SIDE_LIMIT = 500  # pure exact elimination below, modular-first above
_DENSE_MOD_CELLS = 6_000_000  # switch to sparse modular elimination above this


class HomologyError(ValueError):
    """Malformed chain data or a non-automorphism cell permutation."""


# ---------------------------------------------------------------------------
# sparse exact matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SparseRationalMatrix:
    """Sparse matrix over Q; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        clean = {}
        for (r, c), val in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise HomologyError(f"entry out of range: {(r, c)}")
            val = Fraction(val)
            if val:
                clean[(r, c)] = val
        object.__setattr__(self, "entries", clean)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> dict[int, Fraction]:
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def matmul(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise HomologyError("shape mismatch in matmul")
        by_row: dict[int, dict[int, Fraction]] = {}
        for (r, c), v in self.entries.items():
            by_row.setdefault(r, {})[c] = v
        out: dict[tuple[int, int], Fraction] = {}
        other_rows: dict[int, dict[int, Fraction]] = {}
        for (r, c), v in other.entries.items():
            other_rows.setdefault(r, {})[c] = v
        for r, row in by_row.items():
            acc: dict[int, Fraction] = {}
            for k, v in row.items():
                for c, w in other_rows.get(k, {}).items():
                    acc[c] = acc.get(c, Fraction(0)) + v * w
            for c, v in acc.items():
                if v:
                    out[(r, c)] = v
        return SparseRationalMatrix(self.rows, other.cols, out)

    @staticmethod
    def from_columns(rows: int, cols: Sequence[Mapping[int, Fraction]]) -> "SparseRationalMatrix":
        entries = {}
        for j, col in enumerate(cols):
            for r, v in col.items():
                if v:
                    entries[(r, j)] = Fraction(v)
        return SparseRationalMatrix(rows, len(cols), entries)

    @staticmethod
    def identity(n: int) -> "SparseRationalMatrix":
        return SparseRationalMatrix(n, n, {(i, i): Fraction(1) for i in range(n)})


# ---------------------------------------------------------------------------
# integer vector helpers (shared by rank, echelon and chain computations)
# ---------------------------------------------------------------------------


def normalize_int_vec(vec: dict[int, int]) -> dict[int, int]:
    """Divide out the content and make the lowest-index entry positive."""
    vec = {k: v for k, v in vec.items() if v}
    if not vec:
        return vec
    g = 0
    for v in vec.values():
        g = gcd(g, abs(v))
    lead = vec[min(vec)]
    if lead < 0:
        g = -g
    return {k: v // g for k, v in vec.items()}


def _combine(target: dict[int, int], coeff_t: int, source: dict[int, int], coeff_s: int) -> dict[int, int]:
    """coeff_t * target + coeff_s * source, dropped zeros."""
    out = {k: coeff_t * v for k, v in target.items()}
    for k, v in source.items():
        s = out.get(k, 0) + coeff_s * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def to_int_columns(matrix: SparseRationalMatrix) -> list[dict[int, int]]:
    """Columns scaled to primitive integer vectors (rank-preserving)."""
    cols = matrix.columns()
    out = []
    for col in cols:
        if not col:
            out.append({})
            continue
        denom = 1
        for v in col.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        out.append(normalize_int_vec({r: int(v * denom) for r, v in col.items()}))
    return out


class IntEchelon:
    """Incremental integer echelon form of a growing set of sparse vectors.

    Pivot coordinate of a vector is its minimal index.  Vectors are kept
    content-normalized, so all arithmetic stays in Z.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: dict[int, int]) -> dict[int, int]:
        vec = dict(vec)
        while vec:
            lead = min(vec)
            pivot = self.pivots.get(lead)
            if pivot is None:
                return vec
            a, b = vec[lead], pivot[lead]
            g = gcd(a, b)
            vec = _combine(vec, b // g, pivot, -(a // g))
        return vec

    def insert(self, vec: dict[int, int]) -> bool:
        residual = self.reduce(vec)
        if not residual:
            return False
        self.pivots[min(residual)] = normalize_int_vec(residual)
        return True

    def rref_basis(self) -> list[dict[int, int]]:
        """Fully reduced canonical basis, ordered by pivot coordinate."""
        order = sorted(self.pivots)
        reduced: dict[int, dict[int, int]] = {}
        for lead in reversed(order):
            vec = dict(self.pivots[lead])
            for other in sorted(k for k in vec if k != lead and k in reduced):
                if other not in vec:
                    continue
                pivot = reduced[other]
                a, b = vec[other], pivot[other]
                g = gcd(a, b)
                vec = _combine(vec, b // g, pivot, -(a // g))
            reduced[lead] = normalize_int_vec(vec)
        return [reduced[lead] for lead in order]

    def contains(self, vec: dict[int, int]) -> bool:
        return not self.reduce(vec)


def rref_subspace(vectors: Iterable[dict[int, int]]) -> list[dict[int, int]]:
    """Canonical reduced basis of the span of integer vectors."""
    ech = IntEchelon()
    for vec in vectors:
        ech.insert(vec)
    return ech.rref_basis()


def coords_in_rref(vec: dict[int, Fraction], basis: Sequence[dict[int, int]]) -> list[Fraction]:
    """Coordinates of a vector in an RREF basis; raises if it lies outside the span."""
    pivots = [min(b) for b in basis]
    residual = {k: Fraction(v) for k, v in vec.items() if v}
    coords = []
    for b, p in zip(basis, pivots):
        c = residual.get(p, Fraction(0)) / b[p]
        coords.append(c)
        if c:
            for k, v in b.items():
                s = residual.get(k, Fraction(0)) - c * v
                if s:
                    residual[k] = s
                else:
                    residual.pop(k, None)
    if residual:
        raise HomologyError("vector not in subspace")
    return coords


# ---------------------------------------------------------------------------
# rank over Q: fraction-free + modular verification
# ---------------------------------------------------------------------------


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime_above_2_30(rng: random.Random) -> int:
    while True:
        candidate = rng.randrange(2**30 + 1, 2**31, 2)
        if _is_probable_prime(candidate):
            return candidate


def _rank_mod_prime(cols: Sequence[dict[int, int]], n_rows: int, p: int) -> int:
    live = [c for c in cols if c]
    if not live or n_rows == 0:
        return 0
    if n_rows * len(live) <= _DENSE_MOD_CELLS:
        return _rank_mod_dense(live, n_rows, p)
    return _rank_mod_sparse(live, p)


def _rank_mod_dense(cols: Sequence[dict[int, int]], n_rows: int, p: int) -> int:
    a = np.zeros((n_rows, len(cols)), dtype=np.int64)
    for j, col in enumerate(cols):
        for r, v in col.items():
            a[r, j] = v % p
    rank = 0
    n, m = a.shape
    for j in range(m):
        if rank == n:
            break
        nz = np.nonzero(a[rank:, j])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, j]), -1, p)
        a[rank] = a[rank] * inv % p
        below = a[rank + 1 :, j]
        hit = np.nonzero(below)[0]
        if hit.size:
            rows = hit + rank + 1
            a[rows] = (a[rows] - np.outer(a[rows, j], a[rank])) % p
        rank += 1
    return rank


def _rank_mod_sparse(cols: Sequence[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for col in cols:
        vec = {k: v % p for k, v in col.items() if v % p}
        while vec:
            lead = min(vec)
            pivot = pivots.get(lead)
            if pivot is None:
                inv = pow(vec[lead], -1, p)
                pivots[lead] = {k: v * inv % p for k, v in vec.items()}
                break
            f = vec[lead]
            vec = {
                k: v
                for k in set(vec) | set(pivot)
                if (v := (vec.get(k, 0) - f * pivot.get(k, 0)) % p)
            }
    return len(pivots)


def _rank_exact_sparse(cols: Sequence[dict[int, int]]) -> int:
    """Fraction-free sparse elimination; pivots chosen to limit fill."""
    rows: dict[int, dict[int, int]] = {}
    col_support: dict[int, set[int]] = {}
    for j, col in enumerate(cols):
        for r, v in col.items():
            rows.setdefault(r, {})[j] = v
            col_support.setdefault(j, set()).add(r)
    rank = 0
    active = set(rows)
    while active:
        # minimal (row fill) x (column fill) estimate, ties by index
        best = None
        for r in active:
            row = rows[r]
            if not row:
                continue
            for j, _ in row.items():
                score = (len(row) - 1) * (len(col_support[j]) - 1)
                key = (score, r, j)
                if best is None or key < best[0]:
                    best = (key, r, j)
        if best is None:
            break
        _, pr, pc = best
        pivot_row = rows[pr]
        pivot_val = pivot_row[pc]
        rank += 1
        active.discard(pr)
        victims = [r for r in col_support[pc] if r != pr and r in active]
        for r in victims:
            row = rows[r]
            val = row.get(pc)
            if not val:
                continue
            g = gcd(val, pivot_val)
            new_row = _combine(row, pivot_val // g, pivot_row, -(val // g))
            new_row = normalize_int_vec(new_row)
            for j in row:
                col_support[j].discard(r)
            for j in new_row:
                col_support.setdefault(j, set()).add(r)
            rows[r] = new_row
            if not new_row:
                active.discard(r)
        for j in pivot_row:
            col_support[j].discard(pr)
    return rank


def _rank_exact_dense(cols: Sequence[dict[int, int]], n_rows: int) -> int:
    """Plain Gaussian elimination over Fraction; the escalation path."""
    mat = [[Fraction(0)] * len(cols) for _ in range(n_rows)]
    for j, col in enumerate(cols):
        for r, v in col.items():
            mat[r][j] = Fraction(v)
    rank = 0
    for j in range(len(cols)):
        piv = next((i for i in range(rank, n_rows) if mat[i][j]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][j]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(n_rows):
            if i != rank and mat[i][j]:
                f = mat[i][j]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def exact_rank(m: SparseRationalMatrix, rng: random.Random | None = None) -> int:
    """Rank over Q.

    Matrices with both sides at most 500 run the fraction-free elimination and
    the result must agree with elimination at two random primes > 2**30;
    larger matrices accept two agreeing modular passes.  Any disagreement
    escalates to a full exact recomputation.
    """
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return 0
    cols = to_int_columns(m)
    return exact_rank_int(cols, m.rows, rng=rng)


def exact_rank_int(
    cols: Sequence[dict[int, int]], n_rows: int, rng: random.Random | None = None
) -> int:
    live = [c for c in cols if c]
    if not live or n_rows == 0:
        return 0
    if rng is None:
        rng = random.Random(0x5EED ^ (1_000_003 * n_rows + 7_919 * len(live)))
    p1 = random_prime_above_2_30(rng)
    p2 = random_prime_above_2_30(rng)
    while p2 == p1:
        p2 = random_prime_above_2_30(rng)
    r1 = _rank_mod_prime(live, n_rows, p1)
    r2 = _rank_mod_prime(live, n_rows, p2)
    if max(n_rows, len(live)) <= EXACT_SIDE_LIMIT:
        r_exact = _rank_exact_sparse(live)
        if r1 == r2 == r_exact:
            return r_exact
        return _rank_exact_dense(live, n_rows)
    if r1 == r2:
        return r1
    return _rank_exact_sparse(live)


# ---------------------------------------------------------------------------
# chain complexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalChainComplex:
    """Graded boundary maps of a face complex, including the augmentation.

    ``boundaries[d]`` maps dimension-d chains to dimension-(d-1) chains for
    d = 0 .. top; ``boundaries[0]`` is the 1 x f_0 augmentation row onto the
    empty face.
    """

    complex: FaceComplex
    boundaries: tuple[SparseRationalMatrix, ...]

    @property
    def top_dim(self) -> int:
        return len(self.boundaries) - 1

    def boundary(self, d: int) -> SparseRationalMatrix | None:
        if 0 <= d < len(self.boundaries):
            return self.boundaries[d]
        return None

    def chain_dim(self, d: int) -> int:
        if d == -1:
            return 1
        if 0 <= d <= self.top_dim:
            return len(self.complex.faces_by_dim[d])
        return 0


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced Betti numbers per dimension (from -1 up), with an optional
    canonical basis of top-dimensional cycles."""

    betti: Mapping[int, int]
    euler: int
    top_cycles: tuple[dict[int, int], ...] | None = None

    def betti_number(self, d: int) -> int:
        return self.betti.get(d, 0)

    def to_json_dict(self) -> dict:
        return {
            "betti": {str(d): b for d, b in sorted(self.betti.items())},
            "euler": self.euler,
        }


def boundary_complex(c: FaceComplex, verify_limit: int = 400, rng: random.Random | None = None) -> RationalChainComplex:
    """Boundary matrices with alternating signs over the lexicographic face order.

    The identity d(d(x)) = 0 is checked fully on small complexes and on sampled
    columns of larger ones.
    """
    mats: list[SparseRationalMatrix] = []
    for d in range(len(c.faces_by_dim)):
        faces = c.faces_by_dim[d]
        if d == 0:
            mats.append(
                SparseRationalMatrix(
                    1, len(faces), {(0, j): Fraction(1) for j in range(len(faces))}
                )
            )
            continue
        prev_index = {f: i for i, f in enumerate(c.faces_by_dim[d - 1])}
        entries: dict[tuple[int, int], Fraction] = {}
        for j, face in enumerate(faces):
            for pos in range(len(face)):
                sub = face[:pos] + face[pos + 1 :]
                i = prev_index.get(sub)
                if i is None:
                    raise HomologyError("complex is not downward closed")
                entries[(i, j)] = Fraction(-1 if pos % 2 else 1)
        mats.append(SparseRationalMatrix(len(c.faces_by_dim[d - 1]), len(faces), entries))
    cc = RationalChainComplex(c, tuple(mats))
    _verify_square_zero(cc, verify_limit, rng)
    return cc


def _verify_square_zero(cc: RationalChainComplex, limit: int, rng: random.Random | None) -> None:
    rng = rng or random.Random(17)
    for d in range(1, cc.top_dim + 1):
        upper = cc.boundaries[d]
        lower = cc.boundaries[d - 1]
        cols = upper.columns()
        if upper.cols > limit:
            sample = [cols[rng.randrange(upper.cols)] for _ in range(20)]
        else:
            sample = cols
        lower_cols = lower.columns()
        for col in sample:
            acc: dict[int, Fraction] = {}
            for r, v in col.items():
                for rr, w in lower_cols[r].items():
                    acc[rr] = acc.get(rr, Fraction(0)) + v * w
            if any(acc.values()):
                raise HomologyError("boundary squared is nonzero")


def reduced_homology(
    cc: RationalChainComplex,
    rng: random.Random | None = None,
    include_top_cycles: bool = False,
) -> HomologyProfile:
    """Reduced Betti numbers from exact ranks of the boundary maps."""
    ranks: dict[int, int] = {}
    for d in range(cc.top_dim + 1):
        ranks[d] = exact_rank(cc.boundaries[d], rng=rng)
    betti: dict[int, int] = {}
    b_minus1 = 1 - ranks.get(0, 0)
    if b_minus1:
        betti[-1] = b_minus1
    for d in range(cc.top_dim + 1):
        b = cc.chain_dim(d) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if b:
            betti[d] = b
    euler = sum((-1) ** d * b for d, b in betti.items())
    cycles = tuple(top_cycle_basis(cc)) if include_top_cycles else None
    return HomologyProfile(betti, euler, cycles)


def euler_from_f_vector(c: FaceComplex) -> int:
    """Reduced Euler characteristic straight from face counts."""
    total = -1  # empty face at dimension -1
    for d, faces in enumerate(c.faces_by_dim):
        total += (-1) ** d * len(faces)
    return total


# ---------------------------------------------------------------------------
# top homology and induced maps
# ---------------------------------------------------------------------------


def top_cycle_basis(cc: RationalChainComplex) -> list[dict[int, int]]:
    """Canonical basis of the kernel of the top boundary map.

    There are no chains above the top dimension, so this kernel is the top
    reduced homology.  The basis is the RREF of the kernel, integer-primitive
    with positive leading entries; it is unique, hence reproducible.
    """
    if cc.top_dim < 0:
        return [{0: 1}]  # the empty complex: H_{-1} spanned by the empty face
    boundary = cc.boundaries[cc.top_dim]
    n = boundary.cols
    cols = to_int_columns(boundary)
    kernel_ech = IntEchelon()
    # Column elimination with tracked combinations: columns that reduce to zero
    # hand their combination vector to the kernel.
    tracked: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
    for j in range(n):
        vec = dict(cols[j])
        combo = {j: 1}
        while vec:
            lead = min(vec)
            hit = tracked.get(lead)
            if hit is None:
                break
            pvec, pcombo = hit
            a, b = vec[lead], pvec[lead]
            g = gcd(a, b)
            vec, combo = (
                _combine(vec, b // g, pvec, -(a // g)),
                _combine(combo, b // g, pcombo, -(a // g)),
            )
        if vec:
            tracked[min(vec)] = (vec, combo)
        else:
            kernel_ech.insert(combo)
    return kernel_ech.rref_basis()


def _check_automorphism(c: FaceComplex, perm: Sequence[int]) -> None:
    n = len(c.ground_set)
    if sorted(perm) != list(range(n)):
        raise HomologyError("not a permutation of the cells")
    for faces in c.faces_by_dim:
        face_set = set(faces)
        for face in faces:
            if tuple(sorted(perm[i] for i in face)) not in face_set:
                raise HomologyError("permutation is not a simplicial automorphism")


def _sort_sign(values: Sequence[int]) -> int:
    sign = 1
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                sign = -sign
    return sign


class TopHomologyAction:
    """Action of simplicial automorphisms on a fixed top-cycle basis."""

    def __init__(self, c: FaceComplex, cc: RationalChainComplex | None = None):
        self.complex = c
        self.cc = cc or boundary_complex(c)
        self.basis = top_cycle_basis(self.cc)
        self.top = self.cc.top_dim
        self._face_index = (
            {f: i for i, f in enumerate(c.faces_by_dim[self.top])} if self.top >= 0 else {(): 0}
        )

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self, perm: Sequence[int]) -> SparseRationalMatrix:
        _check_automorphism(self.complex, perm)
        if self.top < 0:
            return SparseRationalMatrix.identity(len(self.basis))
        faces = self.complex.faces_by_dim[self.top]
        image_cols = []
        for vec in self.basis:
            img: dict[int, Fraction] = {}
            for j, coeff in vec.items():
                face = faces[j]
                mapped = [perm[i] for i in face]
                sign = _sort_sign(mapped)
                img[self._face_index[tuple(sorted(mapped))]] = Fraction(sign * coeff)
            image_cols.append(img)
        entries: dict[tuple[int, int], Fraction] = {}
        for col_idx, img in enumerate(image_cols):
            for row_idx, coeff in enumerate(coords_in_rref(img, self.basis)):
                if coeff:
                    entries[(row_idx, col_idx)] = coeff
        return SparseRationalMatrix(len(self.basis), len(self.basis), entries)

    def trace(self, perm: Sequence[int]) -> Fraction:
        mat = self.matrix(perm)
        return sum(
            (v for (r, c), v in mat.entries.items() if r == c), Fraction(0)
        )


def induced_map_on_top_homology(c: FaceComplex, perm: Sequence[int]) -> SparseRationalMatrix:
    """Matrix of a simplicial automorphism on the canonical top-cycle basis."""
    return TopHomologyAction(c).matrix(perm)
