"""Brute-force ground truth for E(X,P).

Everything here works on flat point maps and derives its answers by direct
computation: closures by breadth-first multiplication, idempotents by testing
``f*f == f`` pointwise, and ranks by searching subsets of a candidate pool.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import generators as gen
from .combinatorics import rank_and_idrank
from .core import (
    InvalidInput,
    Partition,
    PartTransformation,
    enumerate_flat,
    is_permutation,
    make_partition,
    profile,
)
from .elements import ElementSet


@dataclass(frozen=True)
class SearchBudget:
    max_closure: int = 10**6
    max_subsets: int = 10**7
    time_limit: float | None = None

    def __post_init__(self):
        if self.max_closure < 1 or self.max_subsets < 1:
            raise InvalidInput("budgets must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InvalidInput("time limit must be positive")


DEFAULT_BUDGET = SearchBudget()


class BudgetExceeded(RuntimeError):
    """Raised when a search outgrows its budget.

    ``partial`` is the closure size reached, or for rank searches the largest
    k for which every smaller subset size was fully excluded (a verified lower
    bound on the rank).
    """

    def __init__(self, message: str, partial: int = 0):
        super().__init__(message)
        self.partial = partial


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit
        self.subsets = 0

    def tick(self, lower_bound: int = 0):
        self.subsets += 1
        if self.subsets > self.budget.max_subsets:
            raise BudgetExceeded(f"examined more than {self.budget.max_subsets} subsets", lower_bound)
        if self.deadline is not None and self.subsets % 256 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time limit reached", lower_bound)


def _identity_flat(p: Partition) -> tuple[int, ...]:
    return tuple(range(p.n))


def _as_flats(p: Partition, gens) -> list[tuple[int, ...]]:
    if isinstance(gens, ElementSet):
        return list(gens.flats)
    out = []
    for g in gens:
        out.append(g.flat if isinstance(g, PartTransformation) else tuple(g))
    return out


def _closure_flats(p: Partition, gens: list[tuple[int, ...]], budget: SearchBudget,
                   within: frozenset | set | dict | None = None) -> list[tuple[int, ...]] | None:
    """BFS closure; returns None as soon as an element outside ``within`` appears."""
    one = _identity_flat(p)
    seen = {one: None}
    order = [one]
    frontier = [one]
    gens = list(dict.fromkeys(gens))
    limit = budget.max_closure
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple([g[k] for k in x])
                if y not in seen:
                    if within is not None and y not in within:
                        return None
                    seen[y] = None
                    order.append(y)
                    nxt.append(y)
                    if len(order) > limit:
                        raise BudgetExceeded(f"closure exceeded {limit} elements", len(order))
        frontier = nxt
    return order


def closure(p: Partition, gens, budget: SearchBudget = DEFAULT_BUDGET) -> ElementSet:
    """The submonoid generated by ``gens`` (the identity is always included)."""
    return ElementSet.from_flats(p, _closure_flats(p, _as_flats(p, gens), budget))


def _idempotent_flats(p: Partition, budget: SearchBudget) -> list[tuple[int, ...]]:
    out = []
    for f in enumerate_flat(p, cap=budget.max_closure):
        if all(f[y] == y for y in f):
            out.append(f)
    return out


def enumerate_idempotents(p: Partition, budget: SearchBudget = DEFAULT_BUDGET) -> ElementSet:
    """E(T(X,P)), found by testing every element of T(X,P)."""
    return ElementSet.from_flats(p, _idempotent_flats(p, budget))


@lru_cache(maxsize=64)
def _semigroup_cached(p: Partition, budget: SearchBudget) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    idem = _idempotent_flats(p, budget)
    # Close a small idempotent subset first, then confirm every idempotent
    # lies in it: that proves the result is the closure of all idempotents.
    seed = gen.full_idempotent_generators(p).flats
    order = _closure_flats(p, seed, budget)
    members = set(order)
    missing = [e for e in idem if e not in members]
    if missing:
        order = _closure_flats(p, list(seed) + idem, budget)
    return tuple(order), tuple(idem)


def idempotent_generated(p: Partition, budget: SearchBudget = DEFAULT_BUDGET) -> ElementSet:
    """S = <E(T(X,P))>."""
    order, _ = _semigroup_cached(p, budget)
    return ElementSet.from_flats(p, order)


def generates(p: Partition, gens, target: ElementSet | None = None,
              budget: SearchBudget = DEFAULT_BUDGET) -> bool:
    if target is None:
        target = idempotent_generated(p, budget)
    keys = target.keys()
    flats = _as_flats(p, gens)
    if any(g not in keys for g in flats):
        return False
    order = _closure_flats(p, flats, budget, within=keys)
    return order is not None and len(order) == len(target)


def uniform_membership(p: Partition, f: PartTransformation) -> bool:
    """Membership in E(X,P) for uniform P: either fbar is the identity and
    every block map lies in <E(T_k)> (identity or non-bijective), or fbar is
    not a permutation."""
    if not p.is_uniform:
        raise InvalidInput(f"{p} is not uniform")
    if not is_permutation(f.fbar):
        return True
    if list(f.fbar) != list(range(1, p.m + 1)):
        return False
    return all(b == tuple(range(1, len(b) + 1)) or not is_permutation(b) for b in f.blocks)


# ---------------------------------------------------------------------------
# Generating-set search
# ---------------------------------------------------------------------------


class _Monoid:
    """S with a full multiplication table on element indices."""

    def __init__(self, p: Partition, elements: Sequence[tuple[int, ...]]):
        self.p = p
        self.elements = list(elements)
        self.index = {x: k for k, x in enumerate(self.elements)}
        self.one = self.index[_identity_flat(p)]
        idx = self.index
        self.table = [[idx[tuple([y[k] for k in x])] for y in self.elements] for x in self.elements]
        self.full = (1 << len(self.elements)) - 1

    def closure_mask(self, gens: Sequence[int]) -> int:
        table = self.table
        seen = 1 << self.one
        frontier = [self.one]
        while frontier:
            nxt = []
            for x in frontier:
                row = table[x]
                for g in gens:
                    y = row[g]
                    if not seen >> y & 1:
                        seen |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return seen

    def generates(self, gens: Sequence[int]) -> bool:
        return self.closure_mask(gens) == self.full


class _Search:
    """Enumerates the k-subsets of a pool that generate S.

    With pruning on, every generating set must meet ``{g : x in gS}`` and
    ``{g : x in Sg}`` for each non-identity x (the first and last letters of
    any word for x); branching on the smallest unmet such set and excluding
    earlier choices visits each subset at most once and loses none.
    """

    def __init__(self, monoid: _Monoid, pool: Sequence[int], prune: bool = True):
        self.S = monoid
        self.pool = list(pool)
        self.prune = prune
        self.constraints: list[int] = []
        if prune:
            n = len(monoid.elements)
            left = [0] * n
            right = [0] * n
            for b, g in enumerate(self.pool):
                bit = 1 << b
                row = monoid.table[g]
                for s in range(n):
                    left[row[s]] |= bit
                    right[monoid.table[s][g]] |= bit
            cons = set()
            for x in range(n):
                if x != monoid.one:
                    cons.add(left[x])
                    cons.add(right[x])
            self.constraints = sorted(cons, key=lambda c: (bin(c).count("1"), c))

    def _gens(self, chosen: int) -> list[int]:
        return [self.pool[b] for b in range(len(self.pool)) if chosen >> b & 1]

    def run(self, k: int, clock: _Clock, first_only: bool, lower_bound: int = 0,
            branch: tuple[int, int] | None = None) -> list[int]:
        """Return generating k-subsets as pool bitmasks.

        ``branch=(i, jobs)`` restricts to the i-th of ``jobs`` interleaved
        top-level branches, so that workers split the search disjointly.
        """
        found: list[int] = []
        allmask = (1 << len(self.pool)) - 1

        if not self.prune:
            for t, combo in enumerate(itertools.combinations(range(len(self.pool)), k)):
                if branch is not None and (combo[0] if combo else 0) % branch[1] != branch[0]:
                    continue
                clock.tick(lower_bound)
                if self.S.generates([self.pool[b] for b in combo]):
                    found.append(sum(1 << b for b in combo))
                    if first_only:
                        break
            return found

        def rec(chosen: int, excluded: int, r: int, depth: int) -> bool:
            clock.tick(lower_bound)
            avail = allmask & ~chosen & ~excluded
            split = branch is not None and depth == 0
            best = None
            for c in self.constraints:
                if c & chosen:
                    continue
                live = c & avail
                if not live:
                    return False
                if best is None or bin(live).count("1") < bin(best).count("1"):
                    best = live
                    if best & (best - 1) == 0:
                        break
            if best is not None:
                if r == 0:
                    return False
                cands = [b for b in range(len(self.pool)) if best >> b & 1]
            else:
                if self.S.closure_mask(self._gens(chosen)) == self.S.full:
                    if split and branch[0] != 0:
                        return False
                    free = [b for b in range(len(self.pool)) if avail >> b & 1]
                    for combo in itertools.combinations(free, r):
                        found.append(chosen | sum(1 << b for b in combo))
                        if first_only:
                            return True
                    return False
                if r == 0:
                    return False
                cands = [b for b in range(len(self.pool)) if avail >> b & 1]
            skip = 0
            for t, b in enumerate(cands):
                if not split or t % branch[1] == branch[0]:
                    if rec(chosen | 1 << b, excluded | skip, r - 1, depth + 1) and first_only:
                        return True
                skip |= 1 << b
            return False

        rec(0, 0, k, 0)
        return found


@lru_cache(maxsize=32)
def _monoid(p: Partition, budget: SearchBudget) -> _Monoid:
    order, _ = _semigroup_cached(p, budget)
    return _Monoid(p, order)


def _pool(p: Partition, restrict_to_idempotents: bool, budget: SearchBudget) -> list[int]:
    S = _monoid(p, budget)
    if restrict_to_idempotents:
        _, idem = _semigroup_cached(p, budget)
        members = [S.index[e] for e in idem]
    else:
        members = range(len(S.elements))
    return sorted(k for k in members if k != S.one)


def _worker(args):
    p, budget, pool, prune, k, first_only, lower, branch = args
    search = _Search(_monoid(p, budget), pool, prune)
    return search.run(k, _Clock(budget), first_only, lower, branch)


def _search_sets(p: Partition, pool: list[int], k: int, budget: SearchBudget, *,
                 first_only: bool, prune: bool, jobs: int, lower: int = 0) -> list[int]:
    if jobs <= 1:
        search = _Search(_monoid(p, budget), pool, prune)
        return search.run(k, _Clock(budget), first_only, lower)
    tasks = [(p, budget, pool, prune, k, first_only, lower, (w, jobs)) for w in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = list(ex.map(_worker, tasks))
    merged = sorted(set(itertools.chain.from_iterable(parts)))
    return merged[:1] if first_only else merged


def exhaustive_rank(p: Partition, restrict_to_idempotents: bool = True,
                    budget: SearchBudget = DEFAULT_BUDGET, *, prune: bool = True,
                    jobs: int = 1) -> int:
    """Smallest k such that some k-subset of the pool generates S.

    The pool is E(T(X,P)) minus the identity, or all of S minus the identity.
    """
    pool = _pool(p, restrict_to_idempotents, budget)
    for k in range(len(pool) + 1):
        if _search_sets(p, pool, k, budget, first_only=True, prune=prune, jobs=jobs, lower=k):
            return k
    raise AssertionError("the pool always generates S")


@dataclass
class MigsEnumeration:
    """Minimal idempotent generating sets, with how they were obtained.

    ``assumes_classification`` is True in structured mode, whose completeness
    rests on every minimal set having the U u W1 u W2 shape; raw mode makes no
    such assumption.
    """

    partition: Partition
    sets: list[ElementSet]
    size: int
    mode: str
    assumes_classification: bool
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def _masks_to_sets(p: Partition, pool: list[int], masks: Iterable[int], S: _Monoid) -> list[ElementSet]:
    out = []
    for mask in masks:
        flats = [S.elements[pool[b]] for b in range(len(pool)) if mask >> b & 1]
        out.append(ElementSet.from_flats(p, sorted(flats)))
    return sorted(out, key=lambda s: s.flats)


def _raw_migs(p: Partition, budget: SearchBudget, prune: bool, jobs: int) -> MigsEnumeration:
    S = _monoid(p, budget)
    pool = _pool(p, True, budget)
    k = exhaustive_rank(p, True, budget, prune=prune, jobs=jobs)
    masks = _search_sets(p, pool, k, budget, first_only=False, prune=prune, jobs=jobs, lower=k)
    sets = _masks_to_sets(p, pool, masks, S)
    return MigsEnumeration(p, sets, k, "raw", False, {"pool_size": len(pool), "pruned": prune})


@lru_cache(maxsize=None)
def _uniform_migs(size: int, mu: int, budget: SearchBudget) -> tuple[tuple[PartTransformation, ...], ...]:
    q = make_partition([size] * mu)
    return tuple(tuple(s) for s in _raw_migs(q, budget, True, 1).sets)


def _structured_migs(p: Partition, budget: SearchBudget) -> MigsEnumeration:
    prof = profile(p)
    sizes = sorted(set(p.block_sizes))
    component_options = []
    for s in sizes:
        opts = _uniform_migs(s, prof.mu_of(s), budget)
        component_options.append([tuple(gen.lift_component(p, s, e) for e in u) for u in opts])
    transfer_options = [gen.transfer_choices(p, i) for i in range(1, p.m + 1)]
    target = idempotent_generated(p, budget)
    clock = _Clock(budget)
    found, rejected = [], 0
    for comps in itertools.product(*component_options):
        for transfers in itertools.product(*transfer_options):
            clock.tick()
            spec = gen.GeneratingSetSpec(
                p,
                dict(zip(sizes, comps)),
                {i: t for i, t in enumerate(transfers, start=1)},
            )
            u = gen.minimal_generating_set(p, spec)
            if generates(p, u, target, budget):
                found.append(u.sorted())
            else:
                rejected += 1
    unique = {s.keys(): s for s in found}
    sets = sorted(unique.values(), key=lambda s: s.flats)
    size = len(sets[0]) if sets else 0
    return MigsEnumeration(p, sets, size, "structured", True,
                           {"candidates": len(found) + rejected, "rejected": rejected})


def exhaustive_migs(p: Partition, mode: str = "raw", budget: SearchBudget = DEFAULT_BUDGET, *,
                    prune: bool = True, jobs: int = 1) -> MigsEnumeration:
    """All idempotent generating sets of S of the smallest possible size.

    ``raw`` searches subsets of E(T(X,P)) directly.  ``structured`` assembles
    candidates from minimal generating sets of the single-size components
    (themselves found by raw search) plus every choice of inter-size
    collapses, and keeps those that generate S.
    """
    if mode == "raw":
        return _raw_migs(p, budget, prune, jobs)
    if mode == "structured":
        return _structured_migs(p, budget)
    raise InvalidInput(f"unknown mode {mode!r}")


def contains_minimal_subset(p: Partition, gens, budget: SearchBudget = DEFAULT_BUDGET,
                            size: int | None = None) -> bool:
    """Whether some ``size``-subset of the idempotent generating set ``gens``
    generates S; ``size`` defaults to the idempotent rank."""
    S = _monoid(p, budget)
    flats = _as_flats(p, gens)
    if any(any(f[y] != y for y in f) for f in flats):
        raise InvalidInput("gens must consist of idempotents")
    pool = sorted({S.index[f] for f in flats if f in S.index and S.index[f] != S.one})
    if len(pool) != len({f for f in flats if f != _identity_flat(p)}):
        raise InvalidInput("gens must lie in S")
    if not S.generates(pool):
        raise InvalidInput("gens does not generate S")
    if size is None:
        size = rank_and_idrank(p).idrank
    search = _Search(S, pool, prune=True)
    return bool(search.run(size, _Clock(budget), first_only=True))


def random_idempotent_generating_set(p: Partition, rng: random.Random,
                                     budget: SearchBudget = DEFAULT_BUDGET,
                                     density: float = 0.5) -> ElementSet:
    """A random subset of E(T(X,P)) that generates S (rejection sampling)."""
    _, idem = _semigroup_cached(p, budget)
    one = _identity_flat(p)
    pool = [e for e in idem if e != one]
    S = idempotent_generated(p, budget)
    while True:
        pick = [e for e in pool if rng.random() < density]
        if generates(p, pick, S, budget):
            return ElementSet.from_flats(p, pick)


def component_elements(p: Partition, size: int, budget: SearchBudget = DEFAULT_BUDGET) -> Iterator[PartTransformation]:
    """Elements of S that act only on the blocks of the given size."""
    for f in idempotent_generated(p, budget):
        if gen.in_component(p, size, f):
            yield f
