"""Multigraphs with stable edge labels, dual graphs of spectral-curve strata,
and spanning-forest cycle/cocycle bases.

Vertices are integers ``0 .. vertex_count-1``.  Edges carry distinct integer
labels that survive subgraph surgery (deletion, contraction, doubling), so
parallel edges and loops stay individually addressable.  Every edge is stored
with the canonical orientation ``u -> v`` where ``u <= v``; loops keep their
single endpoint twice.  All graph values are immutable and all operations are
pure functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Malformed graph data or an unknown edge label."""


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Multigraph:
    """An undirected multigraph given by a labelled edge list.

    ``edges`` is a tuple of ``(u, v, label)`` with ``u <= v``.  Labels are
    distinct integers in no particular range; loaders assign ``0..m-1`` by
    position.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be non-negative")
        normalized = []
        seen = set()
        for u, v, label in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge endpoint out of range: {(u, v, label)}")
            if label in seen:
                raise GraphError(f"duplicate edge label {label}")
            seen.add(label)
            if u > v:
                u, v = v, u
            normalized.append((u, v, label))
        object.__setattr__(self, "edges", tuple(normalized))

    # -- basic accessors ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def labels(self) -> tuple[int, ...]:
        return tuple(sorted(e[2] for e in self.edges))

    def endpoints(self, label: int) -> tuple[int, int]:
        """Canonical oriented endpoints (u, v) with u <= v."""
        for u, v, lab in self.edges:
            if lab == label:
                return (u, v)
        raise GraphError(f"no such edge: {label}")

    def edge_classes(self) -> dict[tuple[int, int], list[int]]:
        """Parallel classes: unordered endpoint pair -> labels in sorted order."""
        classes: dict[tuple[int, int], list[int]] = {}
        for u, v, lab in self.edges:
            classes.setdefault((u, v), []).append(lab)
        for labs in classes.values():
            labs.sort()
        return classes

    # -- connectivity ---------------------------------------------------------

    def component_count(self, *, without: frozenset | set = frozenset()) -> int:
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = self.vertex_count
        for u, v, lab in self.edges:
            if lab in without:
                continue
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                count -= 1
        return count

    def is_connected(self, *, without: frozenset | set = frozenset()) -> bool:
        if self.vertex_count == 0:
            return True
        return self.component_count(without=without) == 1

    def spanning_subset_connected(self, labels: Iterable[int]) -> bool:
        """True when the subgraph on *all* vertices with the given edges is connected."""
        keep = set(labels)
        drop = {e[2] for e in self.edges if e[2] not in keep}
        return self.is_connected(without=drop)


@dataclass(frozen=True)
class HitchinPartition:
    """A partition n_1 >= ... >= n_k of n together with the base-curve genus."""

    genus: int
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if self.genus < 2:
            raise GraphError("genus must be at least 2")
        if not parts or any(p < 1 for p in parts):
            raise GraphError("parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise GraphError("parts must be non-increasing")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        """alpha_j = number of parts equal to j."""
        alpha: dict[int, int] = {}
        for p in self.parts:
            alpha[p] = alpha.get(p, 0) + 1
        return alpha


@dataclass(frozen=True)
class CycleSpaceBasis:
    """Fundamental cycles of a lowest-label spanning forest.

    ``cycles[j]`` is a signed edge-incidence vector (label -> coefficient) with
    entry +1 on its defining chord ``chords[j]``.  The same numbers present the
    cohomology of the graph: the class of the dual functional of edge ``e`` in
    the chord-dual basis of H^1 is the column ``(cycles[j][e])_j``.
    """

    forest: frozenset
    chords: tuple[int, ...]
    cycles: tuple[Mapping[int, int], ...]

    @property
    def rank(self) -> int:
        return len(self.chords)

    def edge_class(self, label: int) -> tuple[int, ...]:
        """Coordinates of the H^1-class of the dual edge functional."""
        return tuple(c.get(label, 0) for c in self.cycles)

    def cocycle_quotient(self, labels: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        """Matrix of the quotient map dual-edge-space -> H^1, columns in label order."""
        return tuple(tuple(c.get(lab, 0) for lab in labels) for c in self.cycles)

    def pairing_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Pairing of the cycle basis against the edge-class images in H^1."""
        return tuple(
            tuple(sum(ci[e] * cj.get(e, 0) for e in ci) for cj in self.cycles)
            for ci in self.cycles
        )


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def build_dual_graph(p: HitchinPartition) -> Multigraph:
    """Dual graph of a generic nodal spectral curve for the given partition.

    One vertex per part; parts i < j are joined by n_i * n_j * (2g - 2)
    parallel edges.  Labels run lexicographically in (i, j, copy index).
    """
    edges = []
    label = 0
    factor = 2 * p.genus - 2
    for i in range(p.k):
        for j in range(i + 1, p.k):
            for _ in range(p.parts[i] * p.parts[j] * factor):
                edges.append((i, j, label))
                label += 1
    return Multigraph(p.k, tuple(edges))


def delta_aff(graph: Multigraph) -> int:
    """First Betti number |E| - |V| + #components (the affine delta invariant)."""
    return graph.edge_count - graph.vertex_count + graph.component_count()


def double_edges(
    graph: Multigraph, subset: Iterable[int]
) -> tuple[Multigraph, dict[int, int]]:
    """Add one parallel copy of every edge in ``subset``.

    Returns the new graph and a map from each doubled label to its fresh copy.
    Fresh labels are consecutive, starting above the current maximum.
    """
    subset = sorted(set(subset))
    known = set(e[2] for e in graph.edges)
    for lab in subset:
        if lab not in known:
            raise GraphError(f"no such edge: {lab}")
    next_label = max(known) + 1 if known else 0
    by_label = {lab: (u, v) for u, v, lab in graph.edges}
    new_edges = list(graph.edges)
    label_map: dict[int, int] = {}
    for lab in subset:
        u, v = by_label[lab]
        new_edges.append((u, v, next_label))
        label_map[lab] = next_label
        next_label += 1
    return Multigraph(graph.vertex_count, tuple(new_edges)), label_map


def contract_edge(graph: Multigraph, label: int) -> Multigraph:
    """Identify the endpoints of ``label`` and drop it; loops contract to deletion.

    The larger endpoint is merged into the smaller and vertices above it shift
    down by one, keeping indices contiguous.  All other labels are retained.
    """
    u, v = graph.endpoints(label)
    rest = tuple(e for e in graph.edges if e[2] != label)
    if u == v:
        return Multigraph(graph.vertex_count, rest)

    def relabel(w: int) -> int:
        if w == v:
            return u
        return w - 1 if w > v else w

    edges = tuple((relabel(a), relabel(b), lab) for a, b, lab in rest)
    return Multigraph(graph.vertex_count - 1, edges)


def delete_edge(graph: Multigraph, label: int) -> Multigraph:
    """Drop one edge, keeping all vertices."""
    graph.endpoints(label)
    return Multigraph(
        graph.vertex_count, tuple(e for e in graph.edges if e[2] != label)
    )


def cycle_space(graph: Multigraph) -> CycleSpaceBasis:
    """Fundamental cycles of the lowest-label greedy spanning forest.

    Each non-forest edge (chord) defines one cycle vector: +1 on the chord
    under its canonical orientation, +-1 along the forest path closing it up.
    """
    parent_uf = list(range(graph.vertex_count))

    def find(x: int) -> int:
        while parent_uf[x] != x:
            parent_uf[x] = parent_uf[parent_uf[x]]
            x = parent_uf[x]
        return x

    by_label = {lab: (u, v) for u, v, lab in graph.edges}
    forest: list[int] = []
    chords: list[int] = []
    for lab in sorted(by_label):
        u, v = by_label[lab]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent_uf[ru] = rv
            forest.append(lab)
        else:
            chords.append(lab)

    # Root each forest component at its lowest vertex and record parent edges.
    adjacency: dict[int, list[tuple[int, int]]] = {w: [] for w in range(graph.vertex_count)}
    for lab in forest:
        u, v = by_label[lab]
        adjacency[u].append((v, lab))
        adjacency[v].append((u, lab))
    parent_edge: dict[int, tuple[int, int]] = {}  # vertex -> (parent vertex, label)
    depth: dict[int, int] = {}
    for root in range(graph.vertex_count):
        if root in depth:
            continue
        depth[root] = 0
        stack = [root]
        while stack:
            w = stack.pop()
            for x, lab in adjacency[w]:
                if x not in depth:
                    depth[x] = depth[w] + 1
                    parent_edge[x] = (w, lab)
                    stack.append(x)

    def walk_up(x: int, target_depth: int, sign: int, vec: dict[int, int]) -> int:
        # Traversing x -> parent adds the edge with +1 when it runs along the
        # stored u -> v orientation and -1 against it.
        while depth[x] > target_depth:
            px, lab = parent_edge[x]
            u, v = by_label[lab]
            step = 1 if (x, px) == (u, v) else -1
            vec[lab] = vec.get(lab, 0) + sign * step
            x = px
        return x

    cycles = []
    for lab in chords:
        u, v = by_label[lab]
        vec: dict[int, int] = {lab: 1}
        if u != v:
            # Close the chord u -> v by the forest path from v back to u.
            a, b = v, u
            da, db = depth[a], depth[b]
            a = walk_up(a, min(da, db), +1, vec)
            b = walk_up(b, min(da, db), -1, vec)
            while a != b:
                a = walk_up(a, depth[a] - 1, +1, vec)
                b = walk_up(b, depth[b] - 1, -1, vec)
        cycles.append({k: c for k, c in vec.items() if c})
    return CycleSpaceBasis(frozenset(forest), tuple(chords), tuple(cycles))


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def graph_to_json(graph: Multigraph) -> str:
    """Serialize as {"vertices": k, "edges": [[u, v], ...]} in label order."""
    ordered = sorted(graph.edges, key=lambda e: e[2])
    doc = {"vertices": graph.vertex_count, "edges": [[u, v] for u, v, _ in ordered]}
    return json.dumps(doc, sort_keys=True)


def graph_from_json(text: str) -> Multigraph:
    """Load a graph, assigning labels 0..m-1 by edge-list position."""
    try:
        doc = json.loads(text)
        vertices = doc["vertices"]
        pairs = doc["edges"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise GraphError(f"bad graph JSON: {exc}") from exc
    edges = tuple((int(u), int(v), i) for i, (u, v) in enumerate(pairs))
    return Multigraph(int(vertices), edges)
