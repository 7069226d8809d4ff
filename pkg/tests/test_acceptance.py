"""Acceptance checks: formulas against brute force at desk scale.

Each test records one PASS/FAIL line through the ``criterion`` fixture.
"""

import os
import random

import pytest

from epart import combinatorics as cb
from epart import generators as gen
from epart import oracle
from epart.core import enumerate_all, integer_partitions, is_idempotent, make_partition
from test_combinatorics import strongly_connected_tournaments


def P(*blocks):
    return make_partition(blocks)


def test_ac1_idempotent_count_up_to_7(criterion):
    bad = []
    shapes = 0
    for n in range(1, 8):
        for p in integer_partitions(n):
            shapes += 1
            got = len(oracle.enumerate_idempotents(p))
            if got != cb.idempotent_count(p):
                bad.append((str(p), got, cb.idempotent_count(p)))
    assert criterion("AC1 idempotent count, every partition with n <= 7", not bad,
                     f"{shapes} shapes, mismatches {bad}")


def test_ac2_exhaustive_rank(criterion):
    got = {
        blocks: (oracle.exhaustive_rank(P(*blocks), False), oracle.exhaustive_rank(P(*blocks), True))
        for blocks in [(2, 1), (1, 1)]
    }
    ok = got == {(2, 1): (5, 5), (1, 1): (2, 2)}
    assert criterion("AC2 exhaustive rank/idrank for (2,1) and (1,1)", ok, f"{got}")


def test_ac3_constructed_sets_up_to_6(criterion):
    bad = []
    for n in range(1, 7):
        for p in integer_partitions(n):
            r = cb.rank_and_idrank(p)
            S = oracle.idempotent_generated(p)
            U = gen.minimal_generating_set(p)
            V = gen.rank_generating_set(p)
            if len(U) != r.idrank or len(V) != r.rank:
                bad.append((str(p), "size", len(U), len(V)))
            elif not (oracle.generates(p, U, S) and oracle.generates(p, V, S)):
                bad.append((str(p), "closure"))
    assert criterion("AC3 rank/minimal sets have formula sizes and generate S, n <= 6", not bad, f"{bad}")


def test_ac4_mu1_eq_2(criterion):
    p = P(2, 1, 1)
    r = cb.rank_and_idrank(p)
    S = oracle.idempotent_generated(p)
    V = gen.rank_generating_set(p)
    U = gen.minimal_generating_set(p)
    facts = {
        "formula": (r.rank, r.idrank) == (8, 9),
        "V": len(V) == 8 and sum(not is_idempotent(x) for x in V) == 1 and oracle.generates(p, V, S),
        "U": len(U) == 9 and all(is_idempotent(x) for x in U) and oracle.generates(p, U, S),
    }
    assert criterion("AC4 mu_1 = 2: rank 8 via one non-idempotent, idrank 9", all(facts.values()), f"{facts}")


@pytest.mark.slow
def test_ac4_optional_no_8_idempotents_generate(criterion):
    # literal scan over every 8-subset of the 26 non-identity idempotents,
    # without the pruning used elsewhere
    p = P(2, 1, 1)
    budget = oracle.SearchBudget(max_subsets=3 * 10**6)
    pool = oracle._pool(p, True, budget)
    jobs = min(4, os.cpu_count() or 1)
    try:
        hits = oracle._search_sets(p, pool, 8, budget, first_only=True, prune=False, jobs=jobs)
    except oracle.BudgetExceeded as exc:
        criterion("AC4 (optional) no 8 idempotents generate S for (2,1,1)", False, f"budget: {exc}")
        pytest.skip("subset budget exhausted")
    assert criterion("AC4 (optional) no 8 idempotents generate S for (2,1,1)", not hits,
                     f"{len(pool)} idempotents, literal search")


def test_ac5_migs(criterion):
    raw21 = oracle.exhaustive_migs(P(2, 1), "raw")
    raw22 = oracle.exhaustive_migs(P(2, 2), "raw")
    p32 = P(3, 2)
    st32 = oracle.exhaustive_migs(p32, "structured")
    S = oracle.idempotent_generated(p32)
    verified = all(oracle.generates(p32, s, S) for s in st32)
    ok = (
        len(raw21) == 1 == cb.migs_count(P(2, 1))
        and len(raw22) == 2 == cb.migs_count(P(2, 2))
        and len(st32) == 12 == cb.migs_count(p32)
        and verified
    )
    assert criterion("AC5 minimal idempotent generating sets: (2,1) 1, (2,2) 2, (3,2) 12", ok,
                     f"{len(raw21)}, {len(raw22)}, {len(st32)} (verified {verified})")


def test_ac6_tournaments(criterion):
    values = [cb.w_n(n) for n in (1, 2, 3, 4)]
    brute = strongly_connected_tournaments(4)
    ok = values == [1, 0, 2, 24] and brute == 24
    assert criterion("AC6 strongly connected tournaments w_1..w_4", ok, f"{values}, brute force w_4 = {brute}")


def test_ac7_factorization_round_trip(criterion):
    bad, total = [], 0
    for n in range(1, 7):
        for p in integer_partitions(n):
            alphabet = gen.full_idempotent_generators(p)
            letters = set(alphabet.keys())
            for e in oracle.enumerate_idempotents(p):
                total += 1
                w = gen.factorize_idempotent(e, alphabet)
                if w.evaluate() != e or any(alphabet[k].flat not in letters for k in w.letters):
                    bad.append(str(e))
    assert criterion("AC7 factorization round trip over G1 u G2, n <= 6", not bad,
                     f"{total} idempotents, failures {bad[:3]}")


def test_ac8_uniform_membership(criterion):
    bad = []
    for blocks in [(2, 2), (3, 3)]:
        p = P(*blocks)
        S = oracle.idempotent_generated(p)
        bad += [f for f in enumerate_all(p) if oracle.uniform_membership(p, f) != (f in S)]
    assert criterion("AC8 uniform membership predicate vs closure, (2,2) and (3,3)", not bad,
                     f"disagreements {len(bad)}")


def test_ac9_random_sets_contain_minimal(criterion):
    rng = random.Random(20240601)
    verdicts = {}
    for blocks in [(1, 1), (2, 1)]:
        p = P(*blocks)
        verdicts[blocks] = [
            oracle.contains_minimal_subset(p, oracle.random_idempotent_generating_set(p, rng))
            for _ in range(20)
        ]
    ok = all(all(v) for v in verdicts.values())
    assert criterion("AC9 20 random idempotent generating sets each of (1,1), (2,1) contain a minimal one", ok,
                     ", ".join(f"{k}: {sum(v)}/20" for k, v in verdicts.items()))
