"""Matroid layer: ranks, flats, circuits, activities, against brute force."""

from itertools import combinations

import pytest

import corpus
from formspan import GF, QQ, make_config
from formspan.matroid import (
    DependentSetError,
    NotABasisError,
    bases,
    circuits,
    closure,
    cocircuits,
    contract_by_flat,
    element_status,
    external_activity,
    flat_contractions,
    flats,
    independent_sets,
    internal_activity,
    nbc_sets,
    rank_of,
)
from formspan.tutte import tutte_dc


def subsets(members):
    members = sorted(members)
    for k in range(len(members) + 1):
        yield from (frozenset(c) for c in combinations(members, k))


def brute_circuits(cfg):
    """Minimal dependent sets straight from the definition."""
    dep = [S for S in subsets(cfg.ground_set()) if rank_of(cfg, S) < len(S)]
    out = []
    for S in dep:
        if all(not (D < S) for D in dep):
            out.append(S)
    return sorted(out, key=lambda C: (len(C), sorted(C)))


def test_rank_examples(fano):
    assert rank_of(fano, set()) == 0
    assert rank_of(fano, fano.ground_set()) == 3
    loops = make_config(QQ, [[0, 0], [0, 0]])
    assert rank_of(loops, {1, 2}) == 0


def test_closure_examples(fano):
    loopy = make_config(QQ, [[1, 0], [0, 0], [0, 1]])
    assert closure(loopy, set()) == {2}
    assert closure(fano, {1, 2}) == {1, 2, 3}
    assert closure(fano, {4, 7}) == {3, 4, 7}
    assert closure(fano, fano.ground_set()) == fano.ground_set()


def test_closure_axioms():
    for name, cfg in corpus.named_configs():
        if cfg.n > 6:
            continue
        for S in subsets(cfg.ground_set()):
            cl = closure(cfg, S)
            assert S <= cl, name
            assert closure(cfg, cl) == cl, name
            for T in subsets(cfg.ground_set()):
                if S <= T:
                    assert cl <= closure(cfg, T), name


def test_rank_axioms():
    for name, cfg in corpus.named_configs():
        if cfg.n > 7:
            continue
        ground = sorted(cfg.ground_set())
        for S in subsets(ground):
            rS = rank_of(cfg, S)
            assert 0 <= rS <= len(S)
            for e in ground:
                if e in S:
                    continue
                rSe = rank_of(cfg, S | {e})
                assert rSe in (rS, rS + 1)  # unit increase
                for f in ground:
                    if f in S or f == e:
                        continue
                    # submodularity in local form
                    if rank_of(cfg, S | {e, f}) - rank_of(cfg, S | {f}) > rSe - rS:
                        pytest.fail(f"submodularity fails on {name}")


def test_flats_fano(fano):
    lat = flats(fano)
    assert len(lat) == 16
    profile = {}
    for X in lat:
        profile[lat.rank[X]] = profile.get(lat.rank[X], 0) + 1
    assert profile == {0: 1, 1: 7, 2: 7, 3: 1}
    assert lat.bottom == frozenset()
    assert lat.top == fano.ground_set()
    for X in lat.of_rank(2):
        assert len(X) == 3


def test_flats_small():
    assert [sorted(X) for X in flats(corpus.isthmus())] == [[], [1]]
    lat = flats(corpus.u23())
    assert len(lat) == 5
    # brute-force: flats are exactly the closure-fixed subsets
    brute = {S for S in subsets({1, 2, 3}) if closure(corpus.u23(), S) == S}
    assert set(lat.flats) == brute


def test_lattice_closed_under_intersection():
    for name, cfg in corpus.named_configs():
        if cfg.n > 7:
            continue
        lat = flats(cfg)
        members = set(lat.flats)
        for X in members:
            assert rank_of(cfg, X) == lat.rank[X]
            for Y in members:
                assert X & Y in members, name


def test_circuits_examples(fano):
    cs = circuits(fano)
    assert sum(1 for C in cs if len(C) == 3) == 7
    assert sum(1 for C in cs if len(C) == 4) == 7
    assert len(cs) == 14
    assert all(len(C) == 4 for C in cocircuits(fano))
    loopy = make_config(QQ, [[1], [0]])
    assert frozenset({2}) in circuits(loopy)
    u23 = corpus.u23()
    assert circuits(u23) == [frozenset({1, 2, 3})]
    assert cocircuits(u23) == [
        frozenset({1, 2}),
        frozenset({1, 3}),
        frozenset({2, 3}),
    ]


def test_circuits_brute_force():
    for name, cfg in corpus.named_configs():
        if cfg.n > 6:
            continue
        assert circuits(cfg) == brute_circuits(cfg), name


def test_element_status():
    assert element_status(corpus.loop(), 1) == "loop"
    assert element_status(corpus.isthmus(), 1) == "isthmus"
    fano = corpus.fano()
    assert all(element_status(fano, i) == "ordinary" for i in range(1, 8))


def test_independent_sets_and_bases(fano):
    ind = independent_sets(fano)
    assert len(ind) == 57
    assert len(bases(fano)) == 28
    loops = make_config(QQ, [[0], [0]])
    assert independent_sets(loops) == [frozenset()]
    u23 = corpus.u23()
    assert len(independent_sets(u23)) == 7
    assert bases(u23) == [frozenset({1, 2}), frozenset({1, 3}), frozenset({2, 3})]
    # lexicographic order by members
    as_tuples = [tuple(sorted(I)) for I in ind]
    assert as_tuples == sorted(as_tuples)


def test_counts_match_tutte():
    for name, cfg in corpus.named_configs():
        t = tutte_dc(cfg)
        assert len(bases(cfg)) == t.evaluate(1, 1), name
        assert len(independent_sets(cfg)) == t.evaluate(2, 1), name
        assert t.evaluate(2, 2) == 2**cfg.n, name


def test_external_activity():
    u23 = corpus.u23()
    assert external_activity(u23, {2, 3}) == {1}
    assert external_activity(u23, {1, 2}) == set()
    loopy = make_config(QQ, [[1], [0]])
    assert external_activity(loopy, frozenset()) == {2}
    assert external_activity(loopy, {1}) == {2}
    with pytest.raises(DependentSetError):
        external_activity(u23, {1, 2, 3})


def test_external_activity_brute_force():
    # e is active iff it is the least element of some circuit inside I + e
    for name, cfg in corpus.named_configs():
        if cfg.n > 6:
            continue
        cs = circuits(cfg)
        for I in independent_sets(cfg):
            brute = frozenset(
                e
                for e in cfg.ground_set() - I
                if any(C <= I | {e} and min(C) == e for C in cs)
            )
            assert external_activity(cfg, I) == brute, name


def test_internal_activity():
    u12 = corpus.u12()
    assert internal_activity(u12, {1}) == {1}
    assert internal_activity(u12, {2}) == set()
    free2 = make_config(QQ, [[1, 0], [0, 1]])
    assert internal_activity(free2, {1, 2}) == {1, 2}
    u23 = corpus.u23()
    assert internal_activity(u23, {1, 2}) == {1, 2}
    assert internal_activity(u23, {1, 3}) == {1}
    assert internal_activity(u23, {2, 3}) == set()
    with pytest.raises(NotABasisError):
        internal_activity(u23, {1})


def test_internal_activity_two_readings_agree():
    # the unique cocircuit avoiding B - e is also the minimal rank-dropping
    # subset of E - (B - e); both selections give the same active elements
    for name, cfg in corpus.named_configs():
        if cfg.n > 6 or rank_of(cfg, cfg.ground_set()) == 0:
            continue
        r = rank_of(cfg, cfg.ground_set())
        for B in bases(cfg):
            for e in B:
                allowed = (cfg.ground_set() - B) | {e}
                droppers = [
                    D
                    for D in subsets(allowed)
                    if D and rank_of(cfg, cfg.ground_set() - D) < r
                ]
                minimal = [
                    D for D in droppers if all(not (D2 < D) for D2 in droppers)
                ]
                assert len(minimal) == 1, name
                is_active = min(minimal[0]) == e
                assert (e in internal_activity(cfg, B)) == is_active, name


def test_nbc_sets():
    u23 = corpus.u23()
    got = {tuple(sorted(I)) for I in nbc_sets(u23)}
    assert got == {(), (1,), (2,), (3,), (1, 2), (1, 3)}
    loopy = make_config(QQ, [[1], [0]])
    assert nbc_sets(loopy) == []
    fano = corpus.fano()
    all_nbc = nbc_sets(fano)
    assert len(all_nbc) == 30
    top = [I for I in all_nbc if closure(fano, I) == fano.ground_set()]
    assert len(top) == 8
    assert len(top) == tutte_dc(fano).evaluate(1, 0)


def test_contract_by_flat():
    fano = corpus.fano()
    lat = flats(fano)
    for X in lat:
        sub, origin = contract_by_flat(fano, X)
        assert sub.n == 7 - len(X)
        assert rank_of(sub, sub.ground_set()) == 3 - lat.rank[X]
        assert not any(sub.is_loop(i) for i in range(1, sub.n + 1))
        assert set(origin) == set(fano.ground_set() - X)


def test_flat_contractions_match_single_chain():
    for name, cfg in corpus.named_configs():
        if cfg.n > 6:
            continue
        lat = flats(cfg)
        shared = flat_contractions(cfg, lat)
        for X in lat:
            direct, origin_d = contract_by_flat(cfg, X)
            via, origin_s = shared[X]
            assert set(origin_d) == set(origin_s), name
            # same matroid: identical rank functions through the origin maps
            posd = {lab: p for p, lab in enumerate(origin_d, 1)}
            poss = {lab: p for p, lab in enumerate(origin_s, 1)}
            for S in subsets(set(origin_d)):
                assert rank_of(direct, {posd[x] for x in S}) == rank_of(
                    via, {poss[x] for x in S}
                ), name
