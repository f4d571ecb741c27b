"""Configuration model, parsing, and the four constructions."""

import json
import random
from itertools import combinations

import pytest

import corpus
from formspan import GF, QQ, make_config, parse_config
from formspan.configs import (
    ConfigError,
    IsthmusDeletionError,
    LoopContractionError,
    VectorConfig,
    config_to_json,
    contract,
    delete,
    direct_sum,
    parallel_extension,
    restrict_to_flat,
)
from formspan.matroid import closure, element_status, flats, rank_of


def subsets(members):
    members = sorted(members)
    for k in range(len(members) + 1):
        yield from (frozenset(c) for c in combinations(members, k))


def test_parse_simple():
    cfg = parse_config('{"field":{"type":"GF","p":2},"vectors":[[1,0],[0,1]]}')
    assert cfg.field == GF(2)
    assert (cfg.n, cfg.ell) == (2, 2)
    assert cfg.forms == ((1, 0), (0, 1))


def test_parse_fano_file():
    text = json.dumps({"field": {"type": "GF", "p": 2}, "vectors": corpus.FANO_ROWS})
    cfg = parse_config(text)
    assert (cfg.n, cfg.ell) == (7, 3)


def test_parse_reduces_nonspanning():
    cfg = parse_config('{"field":{"type":"Q"},"vectors":[[1,0],[2,0]]}')
    assert cfg.ell == 1
    assert [f[0] for f in cfg.forms] == [1, 2]


def test_parse_rationals():
    cfg = parse_config('{"field":{"type":"Q"},"vectors":[["1/2",1],[3,"-2/3"]]}')
    assert cfg.forms[0][0] * 2 == 1


def test_parse_errors():
    with pytest.raises(ConfigError):
        parse_config('{"field":{"type":"GF","p":6},"vectors":[[1]]}')
    with pytest.raises(ConfigError):
        parse_config('{"field":{"type":"Q"},"vectors":[[1,0],[1]]}')
    with pytest.raises(ConfigError):
        parse_config('{"field":{"type":"Q"},"vectors":[],"ell":2}')
    with pytest.raises(ConfigError):
        parse_config("not json")
    with pytest.raises(ConfigError):
        parse_config('{"field":{"type":"Q"},"vectors":3}')


def test_json_round_trip():
    for _, cfg in corpus.named_configs():
        again = parse_config(config_to_json(cfg))
        assert again.forms == cfg.forms and again.ell == cfg.ell


def test_zero_forms_are_kept():
    cfg = make_config(QQ, [[1, 0], [0, 0], [0, 1]])
    assert cfg.n == 3 and cfg.is_loop(2)


def test_delete_fano():
    fano = corpus.fano()
    for i in range(1, 8):
        d = delete(fano, i)
        assert d.n == 6 and rank_of(d, d.ground_set()) == 3


def test_delete_simple():
    cfg = make_config(QQ, [[1, 0], [0, 1], [1, 1]])
    d = delete(cfg, 3)
    assert d.forms == ((1, 0), (0, 1))
    assert d.labels == (1, 2)


def test_delete_isthmus_rejected():
    cfg = corpus.isthmus()
    with pytest.raises(IsthmusDeletionError):
        delete(cfg, 1)
    # opting in reduces coordinates
    d = delete(cfg, 1, allow_nonspanning=True)
    assert d.n == 0 and d.ell == 0


def test_contract_to_parallel_pair():
    cfg = make_config(QQ, [[1, 0], [0, 1], [1, 1]])
    c = contract(cfg, 1)
    assert c.ell == 1 and c.n == 2
    # both images nonzero and parallel: two-element rank-one matroid
    assert rank_of(c, {1, 2}) == 1
    assert rank_of(c, {1}) == 1 and rank_of(c, {2}) == 1
    assert c.labels == (2, 3)


def test_contract_parallel_becomes_loop():
    cfg = make_config(QQ, [[1, 0], [2, 0], [0, 1]])
    c = contract(cfg, 1)
    assert c.is_loop(1)  # the copy of position 2
    assert not c.is_loop(2)


def test_contract_fano():
    fano = corpus.fano()
    for i in range(1, 8):
        c = contract(fano, i)
        assert c.n == 6 and c.ell == 2
        assert rank_of(c, c.ground_set()) == 2


def test_contract_loop_rejected():
    with pytest.raises(LoopContractionError):
        contract(corpus.loop(), 1)


def test_parallel_extension_pattern():
    cfg = make_config(QQ, [[1, 0], [0, 1]])
    p = parallel_extension(cfg, 4)
    assert p.n == 8
    assert p.forms == ((1, 0), (0, 1)) * 4
    assert p.labels == (1, 2, 1, 2, 1, 2, 1, 2)
    assert parallel_extension(cfg, 1).forms == cfg.forms
    with pytest.raises(ConfigError):
        parallel_extension(cfg, 0)


def test_parallel_extension_fano():
    p = parallel_extension(corpus.fano(), 2)
    assert p.n == 14 and rank_of(p, p.ground_set()) == 3


def test_direct_sum():
    s = direct_sum(corpus.isthmus(), corpus.isthmus())
    assert s.forms == ((1, 0), (0, 1))
    cfg = corpus.u23()
    assert direct_sum(cfg, corpus.empty(GF(2))).forms == cfg.forms
    mix = direct_sum(corpus.u12(), corpus.loop())
    assert mix.n == 3 and mix.ell == 1
    assert mix.forms == ((1,), (1,), (0,))
    with pytest.raises(ConfigError):
        direct_sum(corpus.u23(), corpus.u12())


def test_restrict_to_flat():
    fano = corpus.fano()
    assert restrict_to_flat(fano, fano.ground_set()).forms == fano.forms
    line = closure(fano, {1, 2})
    sub = restrict_to_flat(fano, line)
    assert sub.n == 3 and sub.ell == 2
    with pytest.raises(ConfigError):
        restrict_to_flat(fano, {1, 2})  # not a flat
    loopy = make_config(QQ, [[1, 0], [0, 0], [0, 1]])
    bottom = closure(loopy, set())
    sub = restrict_to_flat(loopy, bottom)
    assert sub.ell == 0 and sub.n == 1 and sub.is_loop(1)


def test_deletion_contraction_rank_laws():
    for name, cfg in corpus.named_configs():
        if cfg.n > 7:
            continue
        for i in range(1, cfg.n + 1):
            if element_status(cfg, i) != "ordinary":
                continue
            d = delete(cfg, i)
            c = contract(cfg, i)
            rest = cfg.ground_set() - {i}
            for S in subsets(rest):
                dS = frozenset(p for p, lab in enumerate(d.labels, 1) if lab in S)
                cS = frozenset(p for p, lab in enumerate(c.labels, 1) if lab in S)
                assert rank_of(d, dS) == rank_of(cfg, S), (name, i, S)
                assert rank_of(c, cS) == rank_of(cfg, S | {i}) - 1, (name, i, S)


def test_contract_matroid_invariant_under_coordinates():
    # permuting coordinates changes the kernel basis but not the matroid
    rng = random.Random(5)
    for _ in range(20):
        n, ell = rng.randint(2, 5), rng.randint(2, 3)
        rows = [[rng.randint(0, 2) for _ in range(ell)] for _ in range(n)]
        if not any(any(r) for r in rows):
            continue
        cfg = make_config(GF(3), rows)
        if cfg.ell < 2:
            continue
        perm = list(range(cfg.ell))
        rng.shuffle(perm)
        permuted = make_config(GF(3), [[f[j] for j in perm] for f in cfg.forms])
        i = next(
            (i for i in range(1, cfg.n + 1) if not cfg.is_loop(i)), None
        )
        if i is None:
            continue
        c1, c2 = contract(cfg, i), contract(permuted, i)
        for S in subsets(range(1, c1.n + 1)):
            assert rank_of(c1, S) == rank_of(c2, S)


def test_parallel_extension_rank_function():
    for name, cfg in corpus.named_configs():
        if cfg.n > 4:
            continue
        for m in (2, 3):
            p = parallel_extension(cfg, m)
            for S in subsets(range(1, p.n + 1)):
                hit = frozenset(p.labels[i - 1] for i in S)
                assert rank_of(p, S) == rank_of(cfg, hit), (name, m, S)
