"""Conjugacy classes and class functions of symmetric groups, the action on
the cographic complex of the complete graph, and the brute-force induced
character used as an independent oracle for the top-homology representation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import cographic_complex
from .homology import TopHomologyAction
from .multigraph import Multigraph


class SymgroupError(ValueError):
    """Bad group data: mismatched groups, out-of-range sizes, and the like."""


# ---------------------------------------------------------------------------
# partitions, classes, permutations
# ---------------------------------------------------------------------------


def partitions_of(r: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of r in decreasing lexicographic order, (r) first."""

    def gen(total: int, cap: int):
        if total == 0:
            yield ()
            return
        for first in range(min(total, cap), 0, -1):
            for rest in gen(total - first, first):
                yield (first,) + rest

    return tuple(gen(r, r))


def class_size(lam: Sequence[int]) -> int:
    """Size of the conjugacy class with cycle type lam inside S_r."""
    r = sum(lam)
    z = 1
    mult: dict[int, int] = {}
    for part in lam:
        mult[part] = mult.get(part, 0) + 1
    for length, m in mult.items():
        z *= length**m * math.factorial(m)
    return math.factorial(r) // z


def sign_of_type(lam: Sequence[int]) -> int:
    return -1 if (sum(lam) - len(lam)) % 2 else 1


def canonical_permutation(lam: Sequence[int]) -> tuple[int, ...]:
    """Representative with cycles in decreasing length on consecutive support."""
    images = list(range(sum(lam)))
    start = 0
    for length in lam:
        for i in range(length):
            images[start + i] = start + (i + 1) % length
        start += length
    return tuple(images)


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """p after q."""
    return tuple(p[q[i]] for i in range(len(q)))


def inverse(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


# ---------------------------------------------------------------------------
# class functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassFunction:
    """Map from cycle types of S_r to exact rational values."""

    r: int
    values: Mapping[tuple[int, ...], Fraction]

    def __post_init__(self):
        expected = set(partitions_of(self.r))
        if set(self.values) != expected:
            raise SymgroupError("class function must be defined on all cycle types")
        object.__setattr__(
            self, "values", {lam: Fraction(v) for lam, v in self.values.items()}
        )

    def value(self, lam: Sequence[int]) -> Fraction:
        return self.values[tuple(lam)]

    @property
    def dimension(self) -> Fraction:
        return self.values[(1,) * self.r]

    def twist_by_sign(self) -> "ClassFunction":
        """Multiply by the sign character (the duality-side bookkeeping toggle)."""
        return ClassFunction(
            self.r, {lam: v * sign_of_type(lam) for lam, v in self.values.items()}
        )

    def to_json_dict(self) -> dict:
        return {
            "+".join(str(p) for p in lam): str(v) if v.denominator != 1 else int(v)
            for lam, v in sorted(self.values.items(), reverse=True)
        }


@dataclass(frozen=True)
class ProductClassFunction:
    """Class function on a product of symmetric groups S_a1 x ... x S_ak."""

    alphas: tuple[int, ...]
    values: Mapping[tuple[tuple[int, ...], ...], Fraction]

    def value(self, lams) -> Fraction:
        return self.values[tuple(tuple(l) for l in lams)]

    @property
    def dimension(self) -> Fraction:
        return self.values[tuple((1,) * a for a in self.alphas)]

    def to_json_dict(self) -> dict:
        return {
            " x ".join("+".join(str(p) for p in lam) or "-" for lam in key): (
                str(v) if v.denominator != 1 else int(v)
            )
            for key, v in sorted(self.values.items(), reverse=True)
        }


def character_inner_product(a, b) -> Fraction:
    """Orthogonality pairing (1/|G|) sum of class_size * a * b over classes."""
    if isinstance(a, ClassFunction) and isinstance(b, ClassFunction):
        if a.r != b.r:
            raise SymgroupError("class functions live on different groups")
        order = math.factorial(a.r)
        total = sum(
            class_size(lam) * a.values[lam] * b.values[lam] for lam in a.values
        )
        return Fraction(total, order)
    if isinstance(a, ProductClassFunction) and isinstance(b, ProductClassFunction):
        if a.alphas != b.alphas:
            raise SymgroupError("class functions live on different groups")
        order = math.prod(math.factorial(x) for x in a.alphas)
        total = Fraction(0)
        for key, va in a.values.items():
            size = math.prod(class_size(lam) for lam in key)
            total += size * va * b.values[key]
        return Fraction(total, order)
    raise SymgroupError("mismatched class function kinds")


# ---------------------------------------------------------------------------
# the action on the cographic complex
# ---------------------------------------------------------------------------


def edge_action(perm: Sequence[int], graph: Multigraph) -> dict[int, int]:
    """Edge-label permutation induced by a vertex permutation.

    Parallel edges are matched by copy index inside their class, so the vertex
    permutation must preserve the multiplicity pattern.
    """
    if sorted(perm) != list(range(graph.vertex_count)):
        raise SymgroupError("not a vertex permutation")
    classes = graph.edge_classes()
    mapping: dict[int, int] = {}
    for (u, v), labels in classes.items():
        pu, pv = perm[u], perm[v]
        target = classes.get((min(pu, pv), max(pu, pv)))
        if target is None or len(target) != len(labels):
            raise SymgroupError("vertex permutation breaks the multiplicity pattern")
        for lab, tgt in zip(labels, target):
            mapping[lab] = tgt
    return mapping


def complete_graph(r: int) -> Multigraph:
    edges = []
    label = 0
    for i in range(r):
        for j in range(i + 1, r):
            edges.append((i, j, label))
            label += 1
    return Multigraph(r, tuple(edges))


def top_homology_character(r: int, bound: int = 6) -> ClassFunction:
    """Character of S_r on the top reduced homology of the cographic complex
    of the complete graph, one trace per cycle type.

    For r = 2 the complex is just the empty face; by convention the character
    of that degenerate case is identically zero.
    """
    if not 2 <= r <= bound:
        raise SymgroupError(f"r must be between 2 and {bound}")
    if r == 2:
        return ClassFunction(2, {lam: Fraction(0) for lam in partitions_of(2)})
    graph = complete_graph(r)
    labels = graph.labels()
    index_of = {lab: i for i, lab in enumerate(labels)}
    action = TopHomologyAction(cographic_complex(graph))
    values = {}
    for lam in partitions_of(r):
        vperm = canonical_permutation(lam)
        mapping = edge_action(vperm, graph)
        cell_perm = [0] * len(labels)
        for lab, tgt in mapping.items():
            cell_perm[index_of[lab]] = index_of[tgt]
        values[lam] = action.trace(tuple(cell_perm))
    return ClassFunction(r, values)


# ---------------------------------------------------------------------------
# induced character oracle
# ---------------------------------------------------------------------------


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def induced_character_oracle(r: int) -> ClassFunction:
    """Character of the representation induced from a primitive character of
    the cyclic group generated by an r-cycle, by explicit summation over S_r.

    The conjugates landing in the cyclic subgroup are counted element by
    element; the resulting sums of primitive roots of unity collapse to exact
    integers through the Moebius function, and a floating-point evaluation of
    the same sums double-checks each value to 1e-9.
    """
    if not 2 <= r <= 6:
        raise SymgroupError("oracle brute-forces S_r, r must be between 2 and 6")
    cycle = tuple((i + 1) % r for i in range(r))  # the canonical r-cycle
    powers: dict[tuple[int, ...], int] = {}
    current = tuple(range(r))
    for j in range(r):
        powers[current] = j
        current = compose(cycle, current)
    everyone = list(itertools.permutations(range(r)))
    values = {}
    for lam in partitions_of(r):
        g = canonical_permutation(lam)
        counts = [0] * r  # hits on each power of the cycle
        for x in everyone:
            conj = compose(compose(x, g), inverse(x))
            j = powers.get(conj)
            if j is not None:
                counts[j] += 1
        # sum of counts[j] * zeta^j is rational: group j by gcd with r
        total = Fraction(0)
        float_total = 0.0
        for m in range(1, r + 1):
            if r % m:
                continue
            js = [j for j in range(r) if math.gcd(j, r) == m]  # gcd(0, r) = r
            if not js:
                continue
            bucket = {counts[j] for j in js}
            if len(bucket) != 1:
                raise SymgroupError("conjugacy counts must be constant on gcd classes")
            c = counts[js[0]]
            total += Fraction(c * _mobius(r // m))
        for j in range(r):
            float_total += counts[j] * math.cos(2 * math.pi * j / r)
        value = total / r
        if abs(float(value) - float_total / r) > 1e-9:
            raise SymgroupError("floating cross-check failed for induced character")
        values[lam] = value
    return ClassFunction(r, values)


# ---------------------------------------------------------------------------
# Young-subgroup restriction
# ---------------------------------------------------------------------------


def restrict_to_young(chi: ClassFunction, alphas: Sequence[int]) -> ProductClassFunction:
    """Restrict to S_a1 x ... x S_ak embedded on consecutive blocks."""
    alphas = tuple(int(a) for a in alphas)
    if any(a < 1 for a in alphas) or sum(alphas) != chi.r:
        raise SymgroupError("multiplicities must be positive and sum to r")
    values = {}
    for lams in itertools.product(*(partitions_of(a) for a in alphas)):
        merged = tuple(sorted((p for lam in lams for p in lam), reverse=True))
        values[lams] = chi.values[merged]
    return ProductClassFunction(alphas, values)
