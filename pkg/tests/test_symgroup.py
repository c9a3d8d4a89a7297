import math
from fractions import Fraction

import pytest

from hitchin_supports.symgroup import (
    ClassFunction,
    SymgroupError,
    canonical_permutation,
    character_inner_product,
    class_size,
    complete_graph,
    cycle_type,
    edge_action,
    induced_character_oracle,
    partitions_of,
    restrict_to_young,
    sign_of_type,
    top_homology_character,
)


# ---------------------------------------------------------------------------
# classes and representatives
# ---------------------------------------------------------------------------


def test_partitions_of_small_r():
    assert partitions_of(3) == ((3,), (2, 1), (1, 1, 1))
    assert partitions_of(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert len(partitions_of(6)) == 11


def test_class_sizes_sum_to_group_order():
    for r in (3, 4, 5, 6):
        assert sum(class_size(lam) for lam in partitions_of(r)) == math.factorial(r)


def test_canonical_permutation_has_its_cycle_type():
    for r in (3, 4, 5):
        for lam in partitions_of(r):
            assert cycle_type(canonical_permutation(lam)) == lam


def test_representative_traces_agree_across_class():
    # characters are class functions: conjugate representatives give equal traces
    import random

    from hitchin_supports.complexes import cographic_complex
    from hitchin_supports.homology import TopHomologyAction
    from hitchin_supports.symgroup import compose, inverse

    rng = random.Random(3)
    g = complete_graph(4)
    labels = g.labels()
    index_of = {lab: i for i, lab in enumerate(labels)}
    action = TopHomologyAction(cographic_complex(g))

    def trace_for(vperm):
        mapping = edge_action(vperm, g)
        cell = [0] * len(labels)
        for lab, tgt in mapping.items():
            cell[index_of[lab]] = index_of[tgt]
        return action.trace(tuple(cell))

    for lam in partitions_of(4):
        rep = canonical_permutation(lam)
        base = trace_for(rep)
        for _ in range(3):
            x = list(range(4))
            rng.shuffle(x)
            x = tuple(x)
            conj = compose(compose(x, rep), inverse(x))
            assert trace_for(conj) == base


# ---------------------------------------------------------------------------
# edge action
# ---------------------------------------------------------------------------


def test_identity_edge_action():
    g = complete_graph(3)
    assert edge_action((0, 1, 2), g) == {0: 0, 1: 1, 2: 2}


def test_transposition_on_k3_edges():
    g = complete_graph(3)  # labels: 0={0,1}, 1={0,2}, 2={1,2}
    mapping = edge_action((1, 0, 2), g)
    assert mapping == {0: 0, 1: 2, 2: 1}


def test_three_cycle_on_k3_edges():
    g = complete_graph(3)
    mapping = edge_action((1, 2, 0), g)
    # {0,1}->{1,2}, {0,2}->{0,1}, {1,2}->{0,2}
    assert mapping == {0: 2, 1: 0, 2: 1}


def test_edge_action_multiplicity_mismatch():
    from hitchin_supports.multigraph import Multigraph

    g = Multigraph(2, ((0, 0, 0), (0, 1, 1)))
    with pytest.raises(SymgroupError, match="multiplicity"):
        edge_action((1, 0), g)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------


def test_top_character_r2_convention_is_zero():
    chi = top_homology_character(2)
    assert all(v == 0 for v in chi.values.values())


def test_top_character_r3_values():
    chi = top_homology_character(3)
    assert chi.values == {
        (1, 1, 1): Fraction(2),
        (2, 1): Fraction(0),
        (3,): Fraction(-1),
    }


def test_top_character_r4_dimension():
    chi = top_homology_character(4)
    assert chi.dimension == 6  # (r-1)!


def test_oracle_r2_is_sign():
    chi = induced_character_oracle(2)
    assert chi.values == {(1, 1): Fraction(1), (2,): Fraction(-1)}


def test_oracle_r3_values():
    chi = induced_character_oracle(3)
    assert chi.values == {
        (1, 1, 1): Fraction(2),
        (2, 1): Fraction(0),
        (3,): Fraction(-1),
    }


def test_oracle_r4_identity_value():
    chi = induced_character_oracle(4)
    assert chi.dimension == 6


def test_top_character_equals_oracle_r3_r4():
    for r in (3, 4):
        assert top_homology_character(r).values == induced_character_oracle(r).values


def test_character_is_irreducible_for_r3():
    chi = induced_character_oracle(3)
    assert character_inner_product(chi, chi) == 1


def test_trivial_character_inner_product():
    triv = ClassFunction(3, {lam: Fraction(1) for lam in partitions_of(3)})
    assert character_inner_product(triv, triv) == 1


def test_sign_twist_toggle():
    chi = induced_character_oracle(3)
    twisted = chi.twist_by_sign()
    assert twisted.values[(2, 1)] == -chi.values[(2, 1)]
    assert twisted.values[(3,)] == chi.values[(3,)]
    assert sign_of_type((2, 1)) == -1
    assert sign_of_type((3,)) == 1


# ---------------------------------------------------------------------------
# Young restriction
# ---------------------------------------------------------------------------


def test_restriction_to_s2_of_r3_character():
    chi = top_homology_character(3)
    res = restrict_to_young(chi, (2, 1))
    assert res.value(((1, 1), (1,))) == 2
    assert res.value(((2,), (1,))) == 0
    # decomposes as trivial + sign on S_2 x S_1
    trivial = {((1, 1), (1,)): Fraction(1), ((2,), (1,)): Fraction(1)}
    sign = {((1, 1), (1,)): Fraction(1), ((2,), (1,)): Fraction(-1)}
    from hitchin_supports.symgroup import ProductClassFunction

    assert character_inner_product(res, ProductClassFunction((2, 1), trivial)) == 1
    assert character_inner_product(res, ProductClassFunction((2, 1), sign)) == 1


def test_restriction_all_parts_distinct_gives_dimension():
    chi = top_homology_character(3)
    res = restrict_to_young(chi, (1, 1, 1))
    assert res.dimension == chi.dimension
    assert len(res.values) == 1


def test_restriction_rejects_bad_multiplicities():
    chi = top_homology_character(3)
    with pytest.raises(SymgroupError):
        restrict_to_young(chi, (2, 2))


def test_json_keys_use_plus_notation():
    chi = induced_character_oracle(3)
    doc = chi.to_json_dict()
    assert set(doc) == {"1+1+1", "2+1", "3"}
    assert doc["1+1+1"] == 2
