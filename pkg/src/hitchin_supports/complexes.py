"""Simplicial complexes attached to a connected multigraph: the cographic
(bond-matroid independence) complex, the non-spanning complex, and the order
complex of the proper part of the partition lattice.

Faces are stored as sorted tuples of ground-set indices, sorted
lexicographically within each dimension; the empty face is always present so
that reduced homology and the degree-zero term of the monodromy complexes line
up (a k-simplex corresponds to a cardinality-(k+1) edge subset).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .multigraph import GraphError, Multigraph


@dataclass(frozen=True)
class FaceComplex:
    """An abstract simplicial complex presented by an explicit face list."""

    ground_set: tuple
    faces_by_dim: tuple[tuple[tuple[int, ...], ...], ...]
    provenance: str = "custom"
    includes_empty_face: bool = True

    @property
    def dim(self) -> int:
        return len(self.faces_by_dim) - 1

    def faces(self, d: int) -> tuple[tuple[int, ...], ...]:
        if d == -1:
            return ((),)
        if 0 <= d < len(self.faces_by_dim):
            return self.faces_by_dim[d]
        return ()

    def f_vector(self) -> tuple[int, ...]:
        """Face counts by dimension, starting with 1 for the empty face."""
        return (1,) + tuple(len(fs) for fs in self.faces_by_dim)

    def is_face(self, cells: Iterable[int]) -> bool:
        face = tuple(sorted(cells))
        if not face:
            return True
        d = len(face) - 1
        return d < len(self.faces_by_dim) and face in set(self.faces_by_dim[d])

    def verify_downward_closed(self) -> bool:
        for d in range(1, len(self.faces_by_dim)):
            below = set(self.faces_by_dim[d - 1])
            for face in self.faces_by_dim[d]:
                for i in range(len(face)):
                    if face[:i] + face[i + 1 :] not in below:
                        return False
        return True


def complex_f_vector(c: FaceComplex) -> tuple[int, ...]:
    return c.f_vector()


# ---------------------------------------------------------------------------
# graph complexes
# ---------------------------------------------------------------------------


def _grow_by_levels(m: int, keeps: "callable") -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Enumerate the faces of a downward-closed family on indices 0..m-1.

    ``keeps(subset)`` decides membership.  Levels are built by extending each
    face with a strictly larger index, which visits every face exactly once
    (any face minus its maximum is again a face) and in lexicographic order.
    """
    levels: list[tuple[tuple[int, ...], ...]] = []
    current: list[tuple[int, ...]] = [
        (i,) for i in range(m) if keeps((i,))
    ]
    while current:
        levels.append(tuple(current))
        nxt = []
        for face in current:
            for e in range(face[-1] + 1, m):
                candidate = face + (e,)
                if keeps(candidate):
                    nxt.append(candidate)
        current = nxt
    return tuple(levels)


def cographic_complex(graph: Multigraph) -> FaceComplex:
    """Independence complex of the bond matroid: edge subsets whose removal
    keeps the graph connected."""
    if not graph.is_connected():
        raise GraphError("graph must be connected")
    labels = graph.labels()
    by_index = {i: lab for i, lab in enumerate(labels)}

    def keeps(subset: tuple[int, ...]) -> bool:
        removed = {by_index[i] for i in subset}
        return graph.is_connected(without=removed)

    levels = _grow_by_levels(len(labels), keeps)
    return FaceComplex(labels, levels, provenance="cographic")


def nonspanning_complex(graph: Multigraph) -> FaceComplex:
    """Edge subsets whose subgraph fails to connect all vertices."""
    if not graph.is_connected():
        raise GraphError("graph must be connected")
    if graph.vertex_count < 2:
        raise GraphError("non-spanning complex needs at least 2 vertices")
    labels = graph.labels()
    by_index = {i: lab for i, lab in enumerate(labels)}

    def keeps(subset: tuple[int, ...]) -> bool:
        return not graph.spanning_subset_connected(by_index[i] for i in subset)

    levels = _grow_by_levels(len(labels), keeps)
    return FaceComplex(labels, levels, provenance="nonspanning")


# ---------------------------------------------------------------------------
# partition lattice order complex
# ---------------------------------------------------------------------------


def set_partitions(r: int) -> list[tuple[tuple[int, ...], ...]]:
    """All set partitions of {1..r} as tuples of blocks, blocks sorted by minimum."""
    parts: list[list[list[int]]] = [[]]
    for x in range(1, r + 1):
        grown = []
        for p in parts:
            for i in range(len(p)):
                grown.append([blk + [x] if j == i else blk for j, blk in enumerate(p)])
            grown.append(p + [[x]])
        parts = grown
    out = []
    for p in parts:
        blocks = tuple(tuple(blk) for blk in sorted(p, key=lambda b: b[0]))
        out.append(blocks)
    return out


def refines(p: tuple, q: tuple) -> bool:
    """True when every block of p sits inside a block of q (p at least as fine)."""
    where = {}
    for bi, blk in enumerate(q):
        for x in blk:
            where[x] = bi
    return all(len({where[x] for x in blk}) == 1 for blk in p)


def partition_label(blocks: tuple) -> str:
    return "|".join("".join(str(x) for x in blk) for blk in blocks)


def partition_order_complex(r: int) -> FaceComplex:
    """Order complex of the partitions strictly between discrete and trivial.

    Ground cells are sorted finest-first, so chains are exactly the
    index-increasing tuples of comparable cells.
    """
    if r < 2:
        raise GraphError("r must be at least 2")
    proper = [p for p in set_partitions(r) if 1 < len(p) < r]
    proper.sort(key=lambda p: (r - len(p), partition_label(p)))
    labels = tuple(partition_label(p) for p in proper)
    n = len(proper)
    below = [
        [j for j in range(i + 1, n) if len(proper[j]) < len(proper[i]) and refines(proper[i], proper[j])]
        for i in range(n)
    ]
    levels: list[tuple[tuple[int, ...], ...]] = []
    current = [(i,) for i in range(n)]
    while current:
        levels.append(tuple(current))
        nxt = []
        for chain in current:
            for j in below[chain[-1]]:
                nxt.append(chain + (j,))
        current = nxt
    return FaceComplex(labels, tuple(levels), provenance="order")
