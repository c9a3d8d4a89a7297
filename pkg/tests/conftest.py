import itertools

from hitchin_supports.multigraph import Multigraph


def complete_graph(r: int) -> Multigraph:
    edges = []
    label = 0
    for i in range(r):
        for j in range(i + 1, r):
            edges.append((i, j, label))
            label += 1
    return Multigraph(r, tuple(edges))


def parallel_graph(m: int) -> Multigraph:
    """Two vertices joined by m parallel edges."""
    return Multigraph(2, tuple((0, 1, i) for i in range(m)))


def brute_connected(vertex_count: int, pairs) -> bool:
    """Reference connectivity by naive closure, independent of the package."""
    if vertex_count == 0:
        return True
    reach = {0}
    pairs = list(pairs)
    changed = True
    while changed:
        changed = False
        for u, v in pairs:
            if (u in reach) != (v in reach):
                reach.update((u, v))
                changed = True
    return len(reach) == vertex_count


def brute_face_sets(graph: Multigraph, kind: str) -> set:
    """All faces of the cographic / nonspanning complex by full 2^E scan."""
    labels = sorted(e[2] for e in graph.edges)
    by_label = {lab: (u, v) for u, v, lab in graph.edges}
    out = set()
    for k in range(len(labels) + 1):
        for subset in itertools.combinations(labels, k):
            chosen = set(subset)
            if kind == "cographic":
                rest = [by_label[l] for l in labels if l not in chosen]
                ok = brute_connected(graph.vertex_count, rest)
            elif kind == "nonspanning":
                kept = [by_label[l] for l in chosen]
                ok = not brute_connected(graph.vertex_count, kept)
            else:
                raise ValueError(kind)
            if ok:
                out.add(subset)
    return out
