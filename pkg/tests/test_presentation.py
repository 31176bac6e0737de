import json

import pytest

from liftlab import engine
from liftlab.matrices import IntegerMatrix
from liftlab.presentation import (GeneratorSet, IndexBoundExceeded,
                                  build_coset_action, coset_action,
                                  cusp_widths, elliptic_counts, farey_symbol,
                                  free_rank, general_level, generator_set,
                                  index_formula, proj_member)


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return r if r == 1 else -1


def classical_elliptic_counts(level):
    """Multiplicative formulas for the torsion of the degree-0 family."""
    e2 = 1
    e3 = 1
    primes = []
    n = level
    p = 2
    while p * p <= n:
        if n % p == 0:
            exp = 0
            while n % p == 0:
                n //= p
                exp += 1
            primes.append((p, exp))
        p += 1
    if n > 1:
        primes.append((n, 1))
    if level % 4 == 0:
        e2 = 0
    else:
        for p, _ in primes:
            if p == 2:
                continue
            e2 *= 1 + legendre(-1, p)
    if level % 9 == 0:
        e3 = 0
    else:
        for p, _ in primes:
            if p == 3:
                continue
            e3 *= 0 if p == 2 else 1 + legendre(-3, p)
    return e2, e3


def test_index_formula_matches_coset_degree():
    for n in range(1, 25):
        assert coset_action("gamma0", n).degree == index_formula("gamma0", n)
    for n in range(1, 17):
        assert coset_action("gamma1", n).degree == index_formula("gamma1", n)


def test_index_formula_spot_values():
    assert index_formula("gamma0", 1) == 1
    assert index_formula("gamma0", 7) == 8
    assert index_formula("gamma0", 12) == 24
    assert index_formula("gamma1", 5) == 12
    assert index_formula("gamma1", 12) == 48


def test_elliptic_counts_against_classical_formulas():
    for n in range(1, 25):
        got = elliptic_counts(coset_action("gamma0", n))
        assert got == classical_elliptic_counts(n), n
    # the level-1 action is a single point fixed by everything
    assert elliptic_counts(coset_action("gamma1", 1)) == (1, 1)
    for n in range(4, 17):
        assert elliptic_counts(coset_action("gamma1", n)) == (0, 0), n


def test_cusp_widths_partition_the_index():
    for family, top in (("gamma0", 25), ("gamma1", 15)):
        for n in range(1, top):
            action = coset_action(family, n)
            widths = cusp_widths(action)
            assert sum(widths) == action.degree
            assert general_level(action) == n


def test_cusp_widths_gamma0_prime():
    # two cusps for a prime level, widths 1 and p
    assert sorted(cusp_widths(coset_action("gamma0", 7))) == [1, 7]
    assert sorted(cusp_widths(coset_action("gamma0", 11))) == [1, 11]


def test_free_rank():
    assert free_rank(6, 0, 0) == 2
    assert free_rank(8, 0, 2) == 1
    assert free_rank(1, 1, 1) == 0
    with pytest.raises(ValueError):
        free_rank(7, 0, 0)
    with pytest.raises(ValueError):
        free_rank(6, 6, 0)


def test_proj_member():
    assert proj_member("gamma0", 6, IntegerMatrix(1, 1, 0, 1))
    assert proj_member("gamma0", 6, IntegerMatrix(-1, -1, 0, -1))
    assert not proj_member("gamma0", 6, IntegerMatrix(0, -1, 1, 0))
    assert proj_member("gamma1", 5, IntegerMatrix(-1, 0, -5, -1))
    assert not proj_member("gamma1", 5, IntegerMatrix(2, 1, 5, 3))


def test_farey_symbol_validates_and_recovers_index():
    for family, top in (("gamma0", 25), ("gamma1", 15)):
        for n in range(1, top):
            symbol = farey_symbol(family, n)
            symbol.validate()
            assert symbol.index == index_formula(family, n), (family, n)


def test_farey_symbol_level_one_is_degenerate():
    symbol = farey_symbol("gamma0", 1)
    assert symbol.labels == ("even", "odd")
    assert symbol.e2 == 1 and symbol.e3 == 1 and symbol.rank == 0


def test_generator_set_spot_shapes():
    shapes = {("gamma0", 7): (8, 0, 2, 1), ("gamma0", 11): (12, 0, 0, 3),
              ("gamma0", 13): (14, 2, 2, 1), ("gamma1", 5): (12, 0, 0, 3),
              ("gamma1", 6): (12, 0, 0, 3), ("gamma0", 4): (6, 0, 0, 2),
              ("gamma0", 16): (24, 0, 0, 5)}
    for (family, n), (index, e2, e3, r) in shapes.items():
        gens = generator_set(family, n)
        assert (gens.index, gens.e2, gens.e3, gens.rank) == (index, e2, e3, r)
        assert len(gens.entries) == e2 + e3 + r


def test_generator_traces_and_membership():
    for family, n in (("gamma0", 6), ("gamma0", 13), ("gamma1", 8)):
        for m, kind in generator_set(family, n).entries:
            assert proj_member(family, n, m)
            if kind == "even":
                assert m.trace == 0
                assert m * m == IntegerMatrix(-1, 0, 0, -1)
            elif kind == "odd":
                assert m.trace == -1
                assert m * m * m == IntegerMatrix(1, 0, 0, 1)
            else:
                assert abs(m.trace) >= 2


def test_generators_generate_the_reduction():
    # together with -I the generators must reach the whole image mod N
    for family, n in (("gamma0", 6), ("gamma0", 9), ("gamma1", 7)):
        gens = generator_set(family, n)
        keys = [m.reduce(n).key() for m in gens.matrices()]
        keys.append(engine.minus_identity(n))
        got = engine.closure(keys, n)
        kind = "gamma_full" if family == "gamma" else family
        want = engine.subgroup_by_membership(kind, n, n)
        want = engine.adjoin_minus_identity(want)
        assert got.elements == want.elements


def test_gamma1_small_levels_delegate():
    # projectively the two families coincide below level 4
    for n in (1, 2, 3):
        a, b = farey_symbol("gamma1", n), farey_symbol("gamma0", n)
        assert (a.fractions, a.labels) == (b.fractions, b.labels)
    assert farey_symbol("gamma1", 5).index == 12
    assert farey_symbol("gamma0", 5).index == 6


def test_generator_set_round_trip():
    gens = generator_set("gamma0", 9)
    data = json.loads(json.dumps(gens.to_dict()))
    assert GeneratorSet.from_dict(data) == gens
    assert data["kind"] == "gamma0" and data["N"] == 9
    assert set(data) >= {"index", "e2", "e3", "r", "generators"}


def test_coset_action_structure():
    action = coset_action("gamma0", 6)
    degree = action.degree
    s, t = action.s_perm, action.t_perm
    assert sorted(s) == list(range(degree)) and sorted(t) == list(range(degree))
    for i in range(degree):
        assert s[s[i]] == i
    st = action.st_perm()
    for i in range(degree):
        assert st[st[st[i]]] == i


def test_index_bound():
    with pytest.raises(IndexBoundExceeded):
        build_coset_action("gamma0", 6, max_index=5)
