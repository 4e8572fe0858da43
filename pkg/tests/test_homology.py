from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from digerm.branching import branching_space, pi0
from digerm.globular import globe, op, realize
from digerm.homology import (ChainComplex, ChainComplexError, HomologyGroup, branching_homology,
                             direct_sum, homology, homology_json, merging_homology,
                             merging_homology_via_op)
from digerm.precubical import CATALOG, gen_cube, gen_example, random_precubical
from oracles import (PRIMES, betti_mod_p, betti_q, homology_order_mod_m, prime_powers,
                     random_chain_complex, uct_order)


def as_complex(ranks, bd) -> ChainComplex:
    return ChainComplex(tuple(ranks), {k: tuple(map(tuple, m)) for k, m in bd.items()})


def test_circle():
    H = homology(ChainComplex((1, 1), {1: ((0,),)}))
    assert H[0] == HomologyGroup(1) and H[1] == HomologyGroup(1)


def test_z_mod_2():
    H = homology(ChainComplex((1, 1), {1: ((2,),)}))
    assert H[0] == HomologyGroup(0, (2,)) and H[1].is_zero


def test_empty_complex():
    assert homology(ChainComplex((), {})) == {}


def test_not_a_complex():
    with pytest.raises(ChainComplexError):
        homology(ChainComplex((1, 1, 1), {1: ((1,),), 2: ((1,),)}))


def test_group_formatting_and_validation():
    assert str(HomologyGroup()) == "0"
    assert str(HomologyGroup(2, (2, 6))) == "Z^2 + Z/2 + Z/6"
    with pytest.raises(ValueError):
        HomologyGroup(0, (4, 6))
    assert HomologyGroup.from_json(HomologyGroup(1, (3,)).to_json()) == HomologyGroup(1, (3,))


def test_direct_sum_normalizes():
    g = direct_sum([HomologyGroup(1, (2,)), HomologyGroup(0, (3,)), HomologyGroup(2)])
    assert g == HomologyGroup(3, (6,))


@pytest.mark.parametrize("n", range(5))
def test_globe_homology(n):
    X = globe(n)
    for H in (branching_homology(X), merging_homology(X)):
        assert H[0] == HomologyGroup(1)
        assert all(H[k].is_zero for k in H if k >= 1)


def test_hollow_and_filled_square():
    hollow = realize(gen_example("hollow_square"))
    filled = realize(gen_example("filled_square"))
    assert branching_homology(hollow)[1] == HomologyGroup(1)
    assert merging_homology(hollow)[1] == HomologyGroup(1)
    assert branching_homology(filled)[1].is_zero
    assert merging_homology(filled)[1].is_zero


def test_torus_is_acyclic():
    H = branching_homology(realize(gen_example("torus")))
    assert all(g.is_zero for g in H.values())
    H = merging_homology(realize(gen_example("torus")))
    assert all(g.is_zero for g in H.values())


def test_wedge():
    H = branching_homology(realize(gen_example("wedge_two_edges")))
    assert H[0] == HomologyGroup(2) and H[1] == HomologyGroup(1)


def test_cube3_only_final_state():
    H = branching_homology(realize(gen_cube(3)))
    assert H[0] == HomologyGroup(1) and all(H[k].is_zero for k in (1, 2, 3))


def test_homology_json_shape():
    data = homology_json(globe(1))
    assert set(data) == {"branching", "merging"}
    assert data["branching"]["0"] == {"rank": 1, "torsion": []}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_random_complex_against_construction_and_field_ranks(seed):
    ranks, bd, expected = random_chain_complex(random.Random(seed))
    H = homology(as_complex(ranks, bd))
    assert betti_q(ranks, bd) == [H[k].free_rank for k in range(len(ranks))]
    for k, (free, pp) in expected.items():
        assert H[k].free_rank == free
        assert prime_powers(H[k].torsion) == pp
    for p in PRIMES:
        got = betti_mod_p(ranks, bd, p)
        for k in range(len(ranks)):
            tk = sum(1 for t in H[k].torsion if t % p == 0)
            tk1 = sum(1 for t in H[k - 1].torsion if t % p == 0) if k else 0
            assert got[k] == H[k].free_rank + tk + tk1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_tiny_complex_enumeration_over_z_mod_m(seed):
    rng = random.Random(seed)
    ranks, bd, _ = random_chain_complex(rng, max_rank=3, max_len=3, mix_steps=30)
    H = homology(as_complex(ranks, bd))
    for m in (2, 3, 4, 6):
        for k in range(len(ranks)):
            prev = H[k - 1].torsion if k else ()
            assert homology_order_mod_m(ranks, bd, k, m) == uct_order(H[k].free_rank, H[k].torsion,
                                                                      prev, m)


def _random_complex(seed):
    return realize(random_precubical(random.Random(seed)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_germ_homology_structure(seed):
    X = _random_complex(seed)
    H = branching_homology(X)
    final = [s for s in X.states if not X.outgoing(s)]
    assert H[0] == HomologyGroup(len(final))
    assert not H[1].torsion
    comps = sum(pi0(branching_space(X, s)).count - 1 for s in X.states if X.outgoing(s))
    assert H[1].free_rank == comps
    assert merging_homology(X) == merging_homology_via_op(X) == branching_homology(op(X))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_duality_on_catalog(name):
    X = realize(gen_example(name))
    assert merging_homology(X) == branching_homology(op(X))
    assert branching_homology(X) == merging_homology(op(X))
