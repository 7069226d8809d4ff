import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epart.core import (
    FlatTransformation,
    IncompatiblePartitions,
    InvalidGenerator,
    InvalidInput,
    PartTransformation,
    SizeLimitExceeded,
    compose,
    count_all,
    e_xy,
    enumerate_all,
    flat_compose,
    from_flat,
    from_json,
    identity,
    image_size,
    integer_partitions,
    is_idempotent,
    kernel,
    make_e_ij_f,
    make_g_k,
    make_partition,
    profile,
    to_flat,
)

SMALL = [make_partition(b) for b in [(1,), (2,), (1, 1), (2, 1), (2, 2), (3, 1), (2, 1, 1)]]


def elements(p):
    return list(enumerate_all(p))


def test_partition_construction():
    p = make_partition([2, 1])
    assert (p.m, p.n) == (2, 3)
    q = make_partition([5, 5, 3, 2, 2, 2, 2, 1])
    assert (q.m, q.n) == (8, 22)
    assert make_partition([1, 2]).block_sizes == (2, 1)
    assert str(make_partition([1, 3, 2])) == "(3,2,1)"


@pytest.mark.parametrize("bad", [[0], [2, -1], [1.5]])
def test_partition_rejects_bad_sizes(bad):
    with pytest.raises(InvalidInput):
        make_partition(bad)


def test_profile_large_example():
    pr = profile(make_partition([5, 5, 3, 2, 2, 2, 2, 1]))
    assert pr.mu[:7] == (1, 4, 1, 0, 2, 0, 0)
    assert pr.nu[:7] == (0, 1, 2, 3, 3, 4, 4)
    assert pr.M[1] == (4, 5, 6, 7)


def test_profile_small_examples():
    pr = profile(make_partition([2, 1]))
    assert (pr.mu_of(1), pr.mu_of(2), pr.nu_of(1), pr.nu_of(2)) == (1, 1, 0, 1)
    pr = profile(make_partition([3, 3, 3]))
    assert pr.mu_of(3) == 3
    assert sum(pr.mu) == 3
    assert pr.nu_of(3) == 0


def test_integer_partitions_counts():
    assert [len(list(integer_partitions(n))) for n in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]


def test_count_all_examples():
    assert count_all(make_partition([1])) == 1
    assert count_all(make_partition([2, 1])) == 15
    assert count_all(make_partition([2, 2])) == 64


@pytest.mark.parametrize("p", SMALL, ids=str)
def test_enumerate_all_matches_count(p):
    elts = elements(p)
    assert len(elts) == count_all(p)
    assert len(set(elts)) == len(elts)


def test_enumerate_all_cap():
    with pytest.raises(SizeLimitExceeded) as info:
        enumerate_all(make_partition([3, 3]), cap=100)
    assert info.value.required == count_all(make_partition([3, 3]))


def test_compose_identity_and_mismatch():
    p = make_partition([2, 1])
    for g in elements(p):
        assert compose(identity(p), g) == g
        assert compose(g, identity(p)) == g
    with pytest.raises(IncompatiblePartitions):
        compose(identity(p), identity(make_partition([1, 1])))


def test_compose_small_example_against_flat():
    p = make_partition([2, 1])
    f = PartTransformation(p, (1, 1), ((1, 2), (1,)))
    fg = compose(f, f)
    assert fg.flat == flat_compose(f.flat, f.flat)
    assert fg == f


@pytest.mark.parametrize("blocks", [(2, 1), (1, 1), (2,), (1, 1, 1)])
def test_compose_associative_exhaustive(blocks):
    p = make_partition(blocks)
    elts = elements(p)
    for f, g, h in itertools.product(elts, repeat=3):
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


@pytest.mark.parametrize("p", SMALL, ids=str)
def test_homomorphisms(p):
    elts = elements(p)
    for f, g in itertools.product(elts, repeat=2):
        fg = compose(f, g)
        assert fg.flat == flat_compose(f.flat, g.flat)
        assert fg.fbar == tuple(g.fbar[t - 1] for t in f.fbar)
        assert kernel(fg).contains(kernel(f))


def test_is_idempotent_matches_definition_up_to_n6():
    for n in range(1, 7):
        for p in integer_partitions(n):
            if count_all(p) > 60000:
                continue
            for f in enumerate_all(p):
                assert is_idempotent(f) == (compose(f, f) == f), (p, f)


def test_is_idempotent_exhaustive_large_shapes():
    # the shapes skipped above, checked on flat tuples to keep it quick
    for n in range(1, 7):
        for p in integer_partitions(n):
            if count_all(p) <= 60000:
                continue
            for f in enumerate_all(p):
                sq = flat_compose(f.flat, f.flat)
                assert is_idempotent(f) == (sq == f.flat)


def test_image_size_and_kernel():
    p = make_partition([2, 1])
    one = identity(p)
    assert image_size(one) == 3
    assert kernel(one).is_trivial
    const = PartTransformation(p, (2, 2), ((1, 1), (1,)))
    assert image_size(const) == 1
    assert not kernel(const).is_trivial


def test_make_e_ij_f_examples():
    p = make_partition([2, 1])
    e = make_e_ij_f(p, 1, 2, (2,))
    assert e.fbar == (1, 1) and e.blocks == ((1, 2), (2,))
    assert is_idempotent(e)
    c = make_e_ij_f(p, 2, 1, (1, 1))
    assert c.fbar == (2, 2) and is_idempotent(c)
    with pytest.raises(InvalidGenerator):
        make_e_ij_f(p, 1, 1, (1, 2))
    with pytest.raises(InvalidGenerator):
        make_e_ij_f(make_partition([2, 2]), 1, 2, (1, 1))
    with pytest.raises(InvalidGenerator):
        make_e_ij_f(make_partition([3, 2]), 2, 1, (1, 1, 1))


def test_every_collapse_generator_is_idempotent():
    from epart.core import injections, surjections

    for blocks in [(2, 1), (3, 2), (2, 2), (3, 1, 1)]:
        p = make_partition(blocks)
        for i, j in itertools.permutations(range(1, p.m + 1), 2):
            ni, nj = p.block_sizes[i - 1], p.block_sizes[j - 1]
            maps = injections(nj, ni) if nj <= ni else surjections(nj, ni)
            for f in maps:
                assert is_idempotent(make_e_ij_f(p, i, j, f))


def test_make_g_k():
    p = make_partition([2, 1])
    assert make_g_k(p, 1, (1, 2)) == identity(p)
    g = make_g_k(p, 1, e_xy(2, 1, 2))
    assert g.blocks == ((1, 1), (1,)) and is_idempotent(g)


@pytest.mark.parametrize("p", SMALL, ids=str)
def test_flat_round_trip(p):
    for f in elements(p):
        assert from_flat(p, to_flat(f).point_map) == f
        assert from_json(json.loads(f.dumps())) == f
    one = identity(p)
    assert from_flat(p, one.flat) == one


def test_from_flat_rejects_split_block():
    p = make_partition([2, 1])
    with pytest.raises(InvalidInput):
        from_flat(p, (0, 2, 2))
    with pytest.raises(InvalidInput):
        FlatTransformation(p, (0, 1, 3))


def test_json_schema():
    p = make_partition([2, 1])
    e = make_e_ij_f(p, 2, 1, (1, 1))
    assert e.to_json() == {"blocks_sizes": [2, 1], "fbar": [2, 2], "blocks": [[1, 1], [1]]}
    with pytest.raises(InvalidInput):
        from_json({"blocks_sizes": [1, 2], "fbar": [1, 1], "blocks": [[1], [1, 1]]})
    with pytest.raises(InvalidInput):
        from_json({"fbar": [1]})
    with pytest.raises(InvalidInput):
        from_json({"blocks_sizes": [2, 1], "fbar": [1, 3], "blocks": [[1, 2], [1]]})


@st.composite
def transformations(draw, p):
    fbar = tuple(draw(st.integers(1, p.m)) for _ in range(p.m))
    blocks = tuple(
        tuple(draw(st.integers(1, p.block_sizes[t - 1])) for _ in range(s))
        for s, t in zip(p.block_sizes, fbar)
    )
    return PartTransformation(p, fbar, blocks)


@st.composite
def triples(draw):
    sizes = draw(st.lists(st.integers(1, 4), min_size=1, max_size=4))
    p = make_partition(sizes)
    return draw(transformations(p)), draw(transformations(p)), draw(transformations(p))


@settings(max_examples=200, deadline=None)
@given(triples())
def test_random_associativity_and_flattening(fgh):
    f, g, h = fgh
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(f, g).flat == flat_compose(f.flat, g.flat)
    assert is_idempotent(f) == (compose(f, f) == f)
    assert from_flat(f.partition, f.flat) == f
