"""Weight-graded model of the first cohomology of a degenerating spectral
curve, its per-node nilpotent monodromy operators, and the finite complexes
they generate on exterior powers.

The model is split into three blocks with fixed bases:

* ``W0``  -- graph cohomology of the dual graph, dimension delta,
* ``Gr1`` -- cohomology of the normalized components, dimension 2 * sum(g_i),
* ``Gr2`` -- graph homology (the cycle space), dimension delta.

The operator of an edge ``e`` kills ``W0`` and ``Gr1`` and sends a cycle ``t``
to the pairing value against the dual edge functional times the class of that
functional, so in the chord bases its only block is the rank-one outer product
``v_e v_e^T`` with ``v_e = (c_j[e])_j``; squaring the edge coefficient makes
the matrix independent of the edge orientation.  On an exterior power the
operators act as commuting derivations, and for a subset ``I`` of edges the
complex

    wedge^i  ->  (+) images of N_I over |I| = 1  ->  (+) over |I| = 2 -> ...

with signed component maps ``N_r`` computes the stalk cohomology this package
reports.  Every stored basis vector is homogeneous for the ambient block
weight (W0: 0, Gr1: 1, Gr2: 2), the differentials preserve the shifted weight
``ambient + 2k``, and all cohomology is computed one weight summand at a time.
"""

from __future__ import annotations

import itertools
import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .homology import (
    IntEchelon,
    SparseRationalMatrix,
    coords_in_rref,
    exact_rank_int,
    normalize_int_vec,
)
from .multigraph import (
    CycleSpaceBasis,
    GraphError,
    HitchinPartition,
    Multigraph,
    build_dual_graph,
    cycle_space,
)

DEFAULT_WEDGE_LIMIT = 2_000_000


class CksError(ValueError):
    """Exterior degree out of bounds or inconsistent model data."""


# ---------------------------------------------------------------------------
# the graded model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedH1Model:
    """Three-block graded model with per-edge pairing vectors.

    ``edge_vectors[label]`` holds the coordinates of the dual edge functional
    both as a functional on the cycle space (Gr2) and as a class in graph
    cohomology (W0); the two coincide in the chord bases.  Tate twists are
    bookkeeping labels only (0, 0, -1 per block) and never affect dimensions.
    """

    partition: HitchinPartition | None
    graph: Multigraph
    component_genera: tuple[int, ...]
    cycles: CycleSpaceBasis
    edge_vectors: Mapping[int, tuple[int, ...]]
    twists: tuple[int, int, int] = (0, 0, -1)

    @property
    def delta(self) -> int:
        return self.cycles.rank

    @property
    def gr1_dim(self) -> int:
        return 2 * sum(self.component_genera)

    @property
    def dimension(self) -> int:
        return 2 * self.delta + self.gr1_dim

    @property
    def gr2_offset(self) -> int:
        return self.delta + self.gr1_dim

    def index_weights(self) -> tuple[int, ...]:
        return (0,) * self.delta + (1,) * self.gr1_dim + (2,) * self.delta

    def labels(self) -> tuple[int, ...]:
        return self.graph.labels()


def build_graded_model(p: HitchinPartition) -> GradedH1Model:
    """Model over the dual graph of the partition; component i carries genus
    n_i^2 (g - 1) + 1."""
    graph = build_dual_graph(p)
    genera = tuple(ni * ni * (p.genus - 1) + 1 for ni in p.parts)
    return _model_from_graph(graph, genera, partition=p)


def model_from_graph(graph: Multigraph, component_genera: Sequence[int]) -> GradedH1Model:
    """Model over an explicit connected dual graph with prescribed genera."""
    if len(component_genera) != graph.vertex_count:
        raise CksError("one genus per vertex required")
    return _model_from_graph(graph, tuple(int(g) for g in component_genera), partition=None)


def _model_from_graph(graph: Multigraph, genera: tuple[int, ...], partition) -> GradedH1Model:
    if not graph.is_connected():
        raise GraphError("graph must be connected")
    cycles = cycle_space(graph)
    vectors = {lab: cycles.edge_class(lab) for lab in graph.labels()}
    model = GradedH1Model(partition, graph, genera, cycles, vectors)
    if partition is not None:
        # arithmetic-genus cross-check: total dimension = 2 (n^2 (g-1) + 1)
        expected = 2 * (partition.n**2 * (partition.genus - 1) + 1)
        if model.dimension != expected:
            raise CksError("model dimension disagrees with the genus formula")
    return model


def nilpotent_columns(model: GradedH1Model, label: int) -> dict[int, dict[int, int]]:
    """Sparse column map of the edge operator on the model (integer entries)."""
    vec = model.edge_vectors.get(label)
    if vec is None:
        raise GraphError(f"no such edge: {label}")
    off = model.gr2_offset
    cols: dict[int, dict[int, int]] = {}
    for b, vb in enumerate(vec):
        if not vb:
            continue
        col = {a: va * vb for a, va in enumerate(vec) if va}
        if col:
            cols[off + b] = col
    return cols


def picard_lefschetz(model: GradedH1Model, label: int) -> SparseRationalMatrix:
    """The monodromy logarithm of one node as a matrix on the graded model."""
    entries: dict[tuple[int, int], Fraction] = {}
    for src, col in nilpotent_columns(model, label).items():
        for dst, val in col.items():
            entries[(dst, src)] = Fraction(val)
    return SparseRationalMatrix(model.dimension, model.dimension, entries)


def nilpotent_family(model: GradedH1Model) -> dict[int, SparseRationalMatrix]:
    return {lab: picard_lefschetz(model, lab) for lab in model.labels()}


# ---------------------------------------------------------------------------
# exterior powers and derivation action
# ---------------------------------------------------------------------------


class WedgeBasis:
    """Sorted-tuple basis of an exterior power, indexed lexicographically."""

    def __init__(self, dimension: int, degree: int):
        if degree < 0 or degree > dimension:
            self.tuples: tuple[tuple[int, ...], ...] = ()
        else:
            self.tuples = tuple(itertools.combinations(range(dimension), degree))
        self.index = {t: i for i, t in enumerate(self.tuples)}
        self.dimension = dimension
        self.degree = degree

    def __len__(self) -> int:
        return len(self.tuples)

    def weights(self, index_weights: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(index_weights[x] for x in t) for t in self.tuples)


def apply_derivation(
    wedges: WedgeBasis, cols: Mapping[int, Mapping[int, int]], vec: Mapping[int, int]
) -> dict[int, int]:
    """Derivation extension of a model operator applied to a wedge vector."""
    out: dict[int, int] = {}
    tuples = wedges.tuples
    index = wedges.index
    for widx, coeff in vec.items():
        t = tuples[widx]
        for pos, src in enumerate(t):
            col = cols.get(src)
            if not col:
                continue
            rest = t[:pos] + t[pos + 1 :]
            for dst, val in col.items():
                p = bisect_left(rest, dst)
                if p < len(rest) and rest[p] == dst:
                    continue
                image = rest[:p] + (dst,) + rest[p:]
                sign = -1 if (pos + p) % 2 else 1
                target = index[image]
                s = out.get(target, 0) + sign * coeff * val
                if s:
                    out[target] = s
                else:
                    out.pop(target, None)
    return out


def _standard_basis_columns(wedges: WedgeBasis, cols) -> Iterable[dict[int, int]]:
    for widx in range(len(wedges)):
        yield apply_derivation(wedges, cols, {widx: 1})


def image_NI(
    model: GradedH1Model,
    subset: Iterable[int],
    exterior_degree: int,
    wedge_limit: int = DEFAULT_WEDGE_LIMIT,
) -> tuple[dict[int, int], ...]:
    """Reduced basis of the image of the composed edge operators on the
    exterior power; the empty subset returns the identity marker of the full
    space as its standard basis."""
    wedges = _checked_wedges(model, exterior_degree, wedge_limit)
    order = sorted(set(subset))
    for lab in order:
        if lab not in model.edge_vectors:
            raise GraphError(f"no such edge: {lab}")
    basis: tuple[dict[int, int], ...] | None = None
    for lab in order:
        basis = _push_image(model, wedges, basis, lab)
        if not basis:
            return ()
    if basis is None:
        return tuple({i: 1} for i in range(len(wedges)))
    return basis


def _checked_wedges(model: GradedH1Model, i: int, limit: int) -> WedgeBasis:
    if i < 0 or i > model.dimension:
        raise CksError("exterior degree out of range")
    if comb(model.dimension, i) > limit:
        raise CksError("exterior degree too large")
    return WedgeBasis(model.dimension, i)


def _push_image(
    model: GradedH1Model,
    wedges: WedgeBasis,
    basis: tuple[dict[int, int], ...] | None,
    label: int,
) -> tuple[dict[int, int], ...]:
    cols = nilpotent_columns(model, label)
    ech = IntEchelon()
    if basis is None:
        candidates = _standard_basis_columns(wedges, cols)
    else:
        candidates = (apply_derivation(wedges, cols, v) for v in basis)
    for cand in candidates:
        if cand:
            ech.insert(cand)
    return tuple(ech.rref_basis())


# ---------------------------------------------------------------------------
# the complex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CksBlock:
    """One summand Im N_I of a term, with its inclusion as an explicit basis.

    ``basis is None`` marks the full exterior power (the unique degree-0
    block); otherwise vectors are RREF integer vectors in ambient wedge
    coordinates, each homogeneous of the recorded ambient weight.
    """

    subset: tuple[int, ...]
    basis: tuple[dict[int, int], ...] | None
    weights: tuple[int, ...]

    def dim(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class CKSComplexInstance:
    model: GradedH1Model
    exterior_degree: int
    terms: Mapping[int, tuple[CksBlock, ...]]

    @property
    def delta(self) -> int:
        return self.model.delta

    @property
    def top_degree(self) -> int:
        return max(self.terms)

    def term_dimension(self, k: int) -> int:
        return sum(b.dim() for b in self.terms.get(k, ()))

    def block(self, subset: Sequence[int]) -> CksBlock | None:
        key = tuple(sorted(subset))
        for blk in self.terms.get(len(key), ()):
            if blk.subset == key:
                return blk
        return None


def _insertion_sign(subset: tuple[int, ...], label: int) -> int:
    return -1 if bisect_left(subset, label) % 2 else 1


def build_cks(
    model: GradedH1Model,
    exterior_degree: int,
    wedge_limit: int = DEFAULT_WEDGE_LIMIT,
    verify: bool = True,
) -> CKSComplexInstance:
    """Assemble the complex of images with signed edge-operator differentials."""
    wedges = _checked_wedges(model, exterior_degree, wedge_limit)
    index_weights = model.index_weights()
    wedge_weights = wedges.weights(index_weights)
    labels = model.labels()

    terms: dict[int, tuple[CksBlock, ...]] = {
        0: (CksBlock((), None, wedge_weights),)
    }
    level: dict[tuple[int, ...], tuple[dict[int, int], ...] | None] = {(): None}
    k = 0
    while level and k < min(exterior_degree, len(labels)):
        nxt: dict[tuple[int, ...], tuple[dict[int, int], ...]] = {}
        for subset, basis in level.items():
            start = labels.index(subset[-1]) + 1 if subset else 0
            for lab in labels[start:]:
                image = _push_image(model, wedges, basis, lab)
                if image:
                    nxt[subset + (lab,)] = image
        if not nxt:
            break
        k += 1
        blocks = []
        for subset in sorted(nxt):
            basis = nxt[subset]
            weights = tuple(wedge_weights[min(v)] for v in basis)
            _check_homogeneous(basis, wedge_weights)
            blocks.append(CksBlock(subset, basis, weights))
        terms[k] = tuple(blocks)
        level = dict(nxt)
    instance = CKSComplexInstance(model, exterior_degree, terms)
    if verify:
        _verify_square_zero(instance, wedges)
    return instance


def _check_homogeneous(basis, wedge_weights) -> None:
    for vec in basis:
        ws = {wedge_weights[i] for i in vec}
        if len(ws) != 1:
            raise CksError("image basis vector is not weight-homogeneous")


def _verify_square_zero(instance: CKSComplexInstance, wedges: WedgeBasis, samples: int = 24) -> None:
    """d(d(x)) = 0, fully on small instances and on sampled vectors otherwise."""
    model = instance.model
    labels = model.labels()
    rng = random.Random(23)
    for k, blocks in instance.terms.items():
        for blk in blocks:
            if blk.basis is None:
                n = len(wedges)
                if n <= samples:
                    vectors = [{i: 1} for i in range(n)]
                else:
                    vectors = [{rng.randrange(n): 1} for _ in range(samples)]
            elif len(blk.basis) <= samples:
                vectors = list(blk.basis)
            else:
                vectors = [blk.basis[rng.randrange(len(blk.basis))] for _ in range(samples)]
            for vec in vectors:
                _assert_d_squared_zero(model, wedges, blk.subset, vec, labels)


def _assert_d_squared_zero(model, wedges, subset, vec, labels) -> None:
    acc: dict[tuple[int, ...], dict[int, int]] = {}
    for r in labels:
        if r in subset:
            continue
        mid = tuple(sorted(subset + (r,)))
        s1 = _insertion_sign(subset, r)
        img1 = apply_derivation(wedges, nilpotent_columns(model, r), vec)
        if not img1:
            continue
        for s in labels:
            if s in mid:
                continue
            target = tuple(sorted(mid + (s,)))
            s2 = _insertion_sign(mid, s)
            img2 = apply_derivation(wedges, nilpotent_columns(model, s), img1)
            if not img2:
                continue
            slot = acc.setdefault(target, {})
            for widx, val in img2.items():
                t = slot.get(widx, 0) + s1 * s2 * val
                if t:
                    slot[widx] = t
                else:
                    slot.pop(widx, None)
    for slot in acc.values():
        if slot:
            raise CksError("differential does not square to zero")


# ---------------------------------------------------------------------------
# cohomology, one weight summand at a time
# ---------------------------------------------------------------------------


def top_weight_dimensions(instance: CKSComplexInstance) -> dict[int, int]:
    """Dimension of the highest-weight summand of each term.

    Degree k collects the ambient weight i + delta - 2k vectors; for exterior
    degrees at least delta this reproduces the face counts of the cographic
    complex times the middle-block binomial, one line per non-disconnecting
    edge subset.
    """
    model = instance.model
    wedges = WedgeBasis(model.dimension, instance.exterior_degree)
    wedge_weights = wedges.weights(model.index_weights())
    w_top = instance.exterior_degree + model.delta
    out: dict[int, int] = {}
    for k, blocks in instance.terms.items():
        want = w_top - 2 * k
        total = 0
        for blk in blocks:
            if blk.basis is None:
                total += sum(1 for w in wedge_weights if w == want)
            else:
                total += sum(1 for w in blk.weights if w == want)
        out[k] = total
    return out


@dataclass(frozen=True)
class CksCohomology:
    exterior_degree: int
    delta: int
    degrees: Mapping[int, int]
    top_weight: Mapping[int, int]

    @property
    def top_weight_label(self) -> int:
        return self.exterior_degree + self.delta

    def to_json_dict(self) -> dict:
        return {
            "exterior_degree": self.exterior_degree,
            "delta": self.delta,
            "top_weight_value": self.top_weight_label,
            "degrees": {str(k): v for k, v in sorted(self.degrees.items())},
            "top_weight": {str(k): v for k, v in sorted(self.top_weight.items())},
        }


def _weight_slices(instance: CKSComplexInstance, wedge_weights) -> dict[int, dict[int, list]]:
    """shifted weight -> degree -> list of (block_position, local indices)."""
    slices: dict[int, dict[int, list]] = {}
    for k, blocks in instance.terms.items():
        for pos, blk in enumerate(blocks):
            if blk.basis is None:
                groups: dict[int, list[int]] = {}
                for widx, w in enumerate(wedge_weights):
                    groups.setdefault(w, []).append(widx)
            else:
                groups = {}
                for local, w in enumerate(blk.weights):
                    groups.setdefault(w, []).append(local)
            for w_amb, locals_ in groups.items():
                shifted = w_amb + 2 * k
                slices.setdefault(shifted, {}).setdefault(k, []).append((pos, locals_))
    return slices


def cks_cohomology(instance: CKSComplexInstance, rng: random.Random | None = None) -> CksCohomology:
    """Exact cohomology dimensions of the full graded-model complex and of its
    highest-weight summand (shifted weight i + delta)."""
    model = instance.model
    wedges = WedgeBasis(model.dimension, instance.exterior_degree)
    wedge_weights = wedges.weights(model.index_weights())
    labels = model.labels()
    slices = _weight_slices(instance, wedge_weights)

    degrees: dict[int, int] = {k: 0 for k in range(0, model.delta + 1)}
    top: dict[int, int] = {k: 0 for k in range(0, model.delta + 1)}
    w_top = instance.exterior_degree + model.delta

    for shifted, per_degree in sorted(slices.items()):
        ks = sorted(per_degree)
        dims = {k: sum(len(loc) for _, loc in per_degree[k]) for k in ks}
        ranks: dict[int, int] = {}
        for k in ks:
            ranks[k] = _slice_differential_rank(
                instance, wedges, labels, per_degree.get(k, []), k, shifted, rng
            )
        for k in ks:
            h = dims[k] - ranks.get(k, 0) - ranks.get(k - 1, 0)
            if h:
                degrees[k] = degrees.get(k, 0) + h
                if shifted == w_top:
                    top[k] = top.get(k, 0) + h
    return CksCohomology(instance.exterior_degree, model.delta, degrees, top)


def _slice_differential_rank(
    instance: CKSComplexInstance,
    wedges: WedgeBasis,
    labels: Sequence[int],
    source_slice: list,
    k: int,
    shifted: int,
    rng: random.Random | None,
) -> int:
    """Rank of the degree-k differential restricted to one weight summand."""
    if not source_slice:
        return 0
    blocks = instance.terms.get(k, ())
    target_blocks = {blk.subset: blk for blk in instance.terms.get(k + 1, ())}
    if not target_blocks:
        return 0
    model = instance.model
    columns: list[dict[int, int]] = []
    row_index: dict[tuple[tuple[int, ...], int], int] = {}

    def row_of(subset: tuple[int, ...], widx: int) -> int:
        key = (subset, widx)
        if key not in row_index:
            row_index[key] = len(row_index)
        return row_index[key]

    for pos, locals_ in source_slice:
        blk = blocks[pos]
        for local in locals_:
            vec = {local: 1} if blk.basis is None else blk.basis[local]
            col: dict[int, int] = {}
            for r in labels:
                if r in blk.subset:
                    continue
                target = tuple(sorted(blk.subset + (r,)))
                if target not in target_blocks:
                    continue
                sign = _insertion_sign(blk.subset, r)
                img = apply_derivation(wedges, nilpotent_columns(model, r), vec)
                for widx, val in img.items():
                    rid = row_of(target, widx)
                    s = col.get(rid, 0) + sign * val
                    if s:
                        col[rid] = s
                    else:
                        col.pop(rid, None)
            columns.append(col)
    n_rows = len(row_index)
    if n_rows == 0:
        return 0
    return exact_rank_int(columns, n_rows, rng=rng)


# ---------------------------------------------------------------------------
# equivariance: graph automorphisms on the highest-weight cohomology
# ---------------------------------------------------------------------------


def signed_edge_action(perm: Sequence[int], graph: Multigraph) -> dict[int, tuple[int, int]]:
    """Edge-label action of a vertex permutation with orientation signs.

    Copies inside a parallel class are matched by position; the sign is -1
    exactly when the permutation reverses the canonical orientation.
    """
    if sorted(perm) != list(range(graph.vertex_count)):
        raise CksError("not a vertex permutation")
    classes = graph.edge_classes()
    out: dict[int, tuple[int, int]] = {}
    for (u, v), labs in classes.items():
        pu, pv = perm[u], perm[v]
        key = (min(pu, pv), max(pu, pv))
        target = classes.get(key)
        if target is None or len(target) != len(labs):
            raise CksError("vertex permutation breaks the multiplicity pattern")
        sign = -1 if pu > pv else 1
        for lab, tgt in zip(labs, target):
            out[lab] = (tgt, sign)
    return out


def _cycle_action_matrix(model: GradedH1Model, perm: Sequence[int]) -> list[list[Fraction]]:
    """Matrix of the vertex permutation on the cycle space, in the chord basis."""
    cycles = model.cycles
    action = signed_edge_action(perm, model.graph)
    cols: list[list[Fraction]] = []
    for cyc in cycles.cycles:
        chain: dict[int, int] = {}
        for lab, coeff in cyc.items():
            tgt, sign = action[lab]
            chain[tgt] = chain.get(tgt, 0) + sign * coeff
        coords = [Fraction(chain.get(ch, 0)) for ch in cycles.chords]
        # the image chain must be the asserted combination of basis cycles
        recon: dict[int, Fraction] = {}
        for coeff, basis_cycle in zip(coords, cycles.cycles):
            for lab, val in basis_cycle.items():
                s = recon.get(lab, Fraction(0)) + coeff * val
                if s:
                    recon[lab] = s
                else:
                    recon.pop(lab, None)
        if recon != {lab: Fraction(v) for lab, v in chain.items() if v}:
            raise CksError("edge action does not preserve the cycle space")
        cols.append(coords)
    n = len(cols)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _invert_transpose(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [[mat[j][i] for j in range(n)] + [Fraction(int(i == c)) for c in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise CksError("cycle action is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _wedge_multiplicative_image(
    wedges: WedgeBasis, cols: Mapping[int, Mapping[int, Fraction]], vec: Mapping[int, int]
) -> dict[int, Fraction]:
    """Image of a wedge vector under the multiplicative extension of a map."""
    out: dict[int, Fraction] = {}
    for widx, coeff in vec.items():
        t = wedges.tuples[widx]
        partial: dict[tuple[int, ...], Fraction] = {(): Fraction(coeff)}
        for s in t:
            grown: dict[tuple[int, ...], Fraction] = {}
            col = cols.get(s, {})
            for prefix, c in partial.items():
                for dst, val in col.items():
                    p = bisect_left(prefix, dst)
                    if p < len(prefix) and prefix[p] == dst:
                        continue
                    sign = -1 if (len(prefix) - p) % 2 else 1
                    key = prefix[:p] + (dst,) + prefix[p:]
                    s_val = grown.get(key, Fraction(0)) + sign * c * val
                    if s_val:
                        grown[key] = s_val
                    else:
                        grown.pop(key, None)
            partial = grown
            if not partial:
                break
        for key, c in partial.items():
            idx = wedges.index[key]
            s_val = out.get(idx, Fraction(0)) + c
            if s_val:
                out[idx] = s_val
            else:
                out.pop(idx, None)
    return out


def top_weight_action(model: GradedH1Model, perm: Sequence[int]) -> SparseRationalMatrix:
    """Matrix of a dual-graph automorphism on the highest-weight cohomology in
    exterior degree delta (the summand carried by the cographic complex).

    This is the geometric action: it moves cells of the cographic complex and
    simultaneously transports the cycle-space orientations, which is what the
    vertex swap of the two-component spectral curve acts on by the sign
    character.
    """
    delta = model.delta
    if delta < 1:
        raise CksError("the action needs delta >= 1")
    # reduced model: drop the middle block, it contributes only wedge^0 here
    reduced = _reduced_model(model)
    s2 = _cycle_action_matrix(model, perm)
    w0 = _invert_transpose(s2)
    action = signed_edge_action(perm, model.graph)

    dim = 2 * delta
    acols: dict[int, dict[int, Fraction]] = {}
    for a in range(delta):
        acols[a] = {r: w0[r][a] for r in range(delta) if w0[r][a]}
    for b in range(delta):
        acols[delta + b] = {delta + r: s2[r][b] for r in range(delta) if s2[r][b]}
    _assert_equivariant(reduced, acols, action)

    wedges = WedgeBasis(dim, delta)
    wedge_weights = wedges.weights(reduced.index_weights())
    labels = reduced.labels()

    # top-weight pieces of every image, indexed by subset
    tw_basis: dict[tuple[int, ...], tuple[dict[int, int], ...]] = {}
    level: dict[tuple[int, ...], tuple[dict[int, int], ...] | None] = {(): None}
    full_tw = [
        {i: 1} for i, w in enumerate(wedge_weights) if w == 2 * delta
    ]
    tw_basis[()] = tuple(full_tw)
    for k in range(1, delta + 1):
        nxt: dict[tuple[int, ...], tuple[dict[int, int], ...]] = {}
        for subset, basis in level.items():
            start = labels.index(subset[-1]) + 1 if subset else 0
            for lab in labels[start:]:
                image = _push_image(reduced, wedges, basis, lab)
                if image:
                    nxt[subset + (lab,)] = image
        if not nxt:
            break
        for subset, basis in nxt.items():
            keep = tuple(
                v for v in basis if wedge_weights[min(v)] == 2 * delta - 2 * len(subset)
            )
            if keep:
                tw_basis[subset] = keep
        level = dict(nxt)

    def coordinates(k: int) -> list[tuple[tuple[int, ...], int]]:
        return [
            (subset, local)
            for subset in sorted(s for s in tw_basis if len(s) == k)
            for local in range(len(tw_basis[subset]))
        ]

    def vector_of(subset: tuple[int, ...], local: int) -> dict[int, int]:
        return tw_basis[subset][local]

    def chain_map(k: int) -> dict[tuple[tuple[int, ...], int], dict[int, Fraction]]:
        """sigma on the degree-k top-weight piece, target coords per block.

        Transporting the summand of I to the summand of sigma(I) carries the
        Koszul sign of sorting the mapped edge list, the usual exterior
        algebra bookkeeping that makes the transport commute with the signed
        differential.
        """
        out = {}
        for subset, local in coordinates(k):
            mapped = [action[lab][0] for lab in subset]
            tau = _sort_sign(mapped)
            image_subset = tuple(sorted(mapped))
            img = _wedge_multiplicative_image(wedges, acols, vector_of(subset, local))
            coords = coords_in_rref(img, tw_basis[image_subset])
            out[(subset, local)] = {
                (image_subset, j): tau * c for j, c in enumerate(coords) if c
            }
        return out

    def differential(k: int):
        """d restricted to top weight, as columns over degree-(k+1) coords."""
        cols_out = {}
        for subset, local in coordinates(k):
            col: dict[tuple[tuple[int, ...], int], Fraction] = {}
            vec = vector_of(subset, local)
            for r in labels:
                if r in subset:
                    continue
                target = tuple(sorted(subset + (r,)))
                if target not in tw_basis:
                    # the target's highest-weight piece is zero, and the image
                    # of a highest-weight vector lands exactly there
                    continue
                img = apply_derivation(wedges, nilpotent_columns(reduced, r), vec)
                keep = {
                    i: v for i, v in img.items() if wedge_weights[i] == 2 * delta - 2 * len(target)
                }
                if not keep:
                    continue
                sign = _insertion_sign(subset, r)
                for j, c in enumerate(coords_in_rref(keep, tw_basis[target])):
                    if c:
                        key = (target, j)
                        s_val = col.get(key, Fraction(0)) + sign * c
                        if s_val:
                            col[key] = s_val
                        else:
                            col.pop(key, None)
            cols_out[(subset, local)] = col
        return cols_out

    top_coords = coordinates(delta)
    below_coords = coordinates(delta - 1)
    d_below = differential(delta - 1)
    sigma_top = chain_map(delta)
    sigma_below = chain_map(delta - 1)

    # chain-map check: sigma d = d sigma on the degree below the top
    d_again = differential(delta - 1)
    for key in below_coords:
        lhs: dict = {}
        for mid, c in d_below[key].items():
            for tgt, c2 in sigma_top[mid].items():
                _acc(lhs, tgt, c * c2)
        rhs: dict = {}
        for mid, c in sigma_below[key].items():
            for tgt, c2 in d_again[mid].items():
                _acc(rhs, tgt, c * c2)
        if lhs != rhs:
            raise CksError("action does not commute with the differential")

    # quotient by the image of the differential
    coord_index = {key: i for i, key in enumerate(top_coords)}
    image_ech = IntEchelon()
    for key in below_coords:
        col = d_below[key]
        if col:
            image_ech.insert(_fractions_to_int({coord_index[t]: v for t, v in col.items()}))
    image_basis = image_ech.rref_basis()
    pivots = {min(v) for v in image_basis}
    quotient_coords = [i for i in range(len(top_coords)) if i not in pivots]
    pos_of = {c: j for j, c in enumerate(quotient_coords)}

    def project(vec: dict[int, Fraction]) -> dict[int, Fraction]:
        residual = dict(vec)
        for b in image_basis:
            lead = min(b)
            c = residual.get(lead)
            if c:
                f = Fraction(c, b[lead])
                for kk, v in b.items():
                    s_val = residual.get(kk, Fraction(0)) - f * v
                    if s_val:
                        residual[kk] = s_val
                    else:
                        residual.pop(kk, None)
        return residual

    entries: dict[tuple[int, int], Fraction] = {}
    for col_pos, key in enumerate(q for q in quotient_coords):
        src = top_coords[key]
        img = {coord_index[t]: c for t, c in sigma_top[src].items()}
        for kk, v in project(img).items():
            entries[(pos_of[kk], col_pos)] = v
    n = len(quotient_coords)
    return SparseRationalMatrix(n, n, entries)


def _acc(store: dict, key, val) -> None:
    s = store.get(key, Fraction(0)) + val
    if s:
        store[key] = s
    else:
        store.pop(key, None)


def _sort_sign(values: Sequence[int]) -> int:
    sign = 1
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                sign = -sign
    return sign


def _fractions_to_int(vec: Mapping[int, Fraction]) -> dict[int, int]:
    from math import lcm

    denom = 1
    for v in vec.values():
        denom = lcm(denom, Fraction(v).denominator)
    return normalize_int_vec({k: int(Fraction(v) * denom) for k, v in vec.items()})


def _reduced_model(model: GradedH1Model) -> GradedH1Model:
    """The model with the inert middle block removed (same cycle data)."""
    return GradedH1Model(
        None,
        model.graph,
        (0,) * model.graph.vertex_count,
        model.cycles,
        model.edge_vectors,
    )


def _assert_equivariant(reduced, acols, action) -> None:
    """A N_e = N_{sigma e} A on the reduced model, as exact matrices."""
    dim = reduced.dimension
    for lab in reduced.labels():
        tgt, _ = action[lab]
        n_cols = nilpotent_columns(reduced, lab)
        m_cols = nilpotent_columns(reduced, tgt)
        for src in range(dim):
            # A(N_e(src)) vs N_{sigma e}(A(src))
            left: dict[int, Fraction] = {}
            for mid, val in n_cols.get(src, {}).items():
                for dst, aval in acols.get(mid, {}).items():
                    _acc(left, dst, aval * val)
            right: dict[int, Fraction] = {}
            for mid, aval in acols.get(src, {}).items():
                for dst, val in m_cols.get(mid, {}).items():
                    _acc(right, dst, aval * val)
            if left != right:
                raise CksError("model action is not equivariant for the edge operators")
