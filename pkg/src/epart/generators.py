"""Explicit generating sets for E(X,P) and factorization of idempotents.

Letters of G1 act inside one block (``e_xy`` lifted to block ``k``); letters of
G2 collapse one whole block ``j`` into another block ``i`` through an
injective or surjective component map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .combinatorics import rank_and_idrank
from .core import (
    Partition,
    PartTransformation,
    compose,
    e_xy,
    identity,
    identity_map,
    injections,
    is_idempotent,
    is_idempotent_map,
    is_injective,
    is_surjective,
    make_e_ij_f,
    make_g_k,
    make_partition,
    profile,
    surjections,
)
from .elements import ElementSet


class InvalidSpec(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


# ---------------------------------------------------------------------------
# G1 and G2
# ---------------------------------------------------------------------------


def g1_elements(p: Partition) -> list[PartTransformation]:
    out = []
    for k, size in enumerate(p.block_sizes, start=1):
        for x, y in itertools.permutations(range(1, size + 1), 2):
            out.append(make_g_k(p, k, e_xy(size, x, y)))
    return out


def _component_maps(nj: int, ni: int):
    """Maps [nj] -> [ni] admissible in an e_{ij;f}."""
    return injections(nj, ni) if nj <= ni else surjections(nj, ni)


def g2_elements(p: Partition) -> list[PartTransformation]:
    out = []
    sizes = p.block_sizes
    for i, j in itertools.permutations(range(1, p.m + 1), 2):
        for f in _component_maps(sizes[j - 1], sizes[i - 1]):
            out.append(make_e_ij_f(p, i, j, f))
    return out


def full_idempotent_generators(p: Partition) -> ElementSet:
    return ElementSet(p, g1_elements(p) + g2_elements(p))


# ---------------------------------------------------------------------------
# Uniform components
# ---------------------------------------------------------------------------


def tournament_generators(k: int) -> list[tuple[int, ...]]:
    """A minimal idempotent generating set of <E(T_k)>.

    For k >= 3 this is one ``e_xy`` per pair, oriented along the Hamiltonian
    cycle 1 -> 2 -> ... -> k -> 1 so the tournament is strongly connected.
    """
    if k <= 1:
        return []
    if k == 2:
        return [e_xy(2, 1, 2), e_xy(2, 2, 1)]
    out = []
    for x, y in itertools.combinations(range(1, k + 1), 2):
        out.append(e_xy(k, y, x) if (x, y) == (1, k) else e_xy(k, x, y))
    return out


def component_generators(p: Partition, size: int) -> list[PartTransformation]:
    """A canonical minimal idempotent generating set of S_size, the part of S
    acting only on the blocks of the given size."""
    blocks = profile(p).M[size - 1] if 1 <= size <= p.n else ()
    mu = len(blocks)
    out = [make_g_k(p, k, g) for k in blocks for g in tournament_generators(size)]
    if mu < 2:
        return out
    perms = list(itertools.permutations(range(1, size + 1)))
    ident = identity_map(size)
    if mu == 2:
        a, b = blocks
        if size == 1:
            return out + [make_e_ij_f(p, a, b, ident), make_e_ij_f(p, b, a, ident)]
        out.append(make_e_ij_f(p, a, b, ident))
        out.extend(make_e_ij_f(p, b, a, f) for f in perms if f != ident)
        return out
    for s, t in itertools.combinations(range(mu), 2):
        i, j = blocks[s], blocks[t]
        if (s, t) == (0, mu - 1):
            i, j = j, i
        out.extend(make_e_ij_f(p, i, j, f) for f in perms)
    return out


def in_component(p: Partition, size: int, f: PartTransformation) -> bool:
    """Whether f fixes every point outside the blocks of ``size`` and maps
    those blocks among themselves."""
    for i, (t, fi) in enumerate(zip(f.fbar, f.blocks), start=1):
        if p.block_sizes[i - 1] == size:
            if p.block_sizes[t - 1] != size:
                return False
        elif t != i or fi != identity_map(len(fi)):
            return False
    return True


def uniform_partition_of(p: Partition, size: int) -> Partition:
    return make_partition([size] * profile(p).mu_of(size))


def lift_component(p: Partition, size: int, f: PartTransformation) -> PartTransformation:
    """Embed an element over the uniform partition of the size-``size`` blocks
    into T(X,P), acting as the identity elsewhere."""
    blocks_of_size = profile(p).M[size - 1]
    pos = {b: t for t, b in enumerate(blocks_of_size, start=1)}
    fbar, maps = [], []
    for i, s in enumerate(p.block_sizes, start=1):
        if i in pos:
            fbar.append(blocks_of_size[f.fbar[pos[i] - 1] - 1])
            maps.append(f.blocks[pos[i] - 1])
        else:
            fbar.append(i)
            maps.append(identity_map(s))
    return PartTransformation(p, tuple(fbar), tuple(maps))


def restrict_component(p: Partition, size: int, f: PartTransformation) -> PartTransformation:
    """Inverse of ``lift_component`` for elements satisfying ``in_component``."""
    blocks_of_size = profile(p).M[size - 1]
    pos = {b: t for t, b in enumerate(blocks_of_size, start=1)}
    q = uniform_partition_of(p, size)
    return PartTransformation(
        q,
        tuple(pos[f.fbar[b - 1]] for b in blocks_of_size),
        tuple(f.blocks[b - 1] for b in blocks_of_size),
    )


# ---------------------------------------------------------------------------
# Generating set specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratingSetSpec:
    """Choices defining a generating set ``U_1 u ... u U_n u W1 u W2``.

    ``component_sets[q]`` is the idempotent generating set chosen for S_q.
    ``transfers[i]`` maps each block ``j`` in J_i to the surjection
    ``f_ij: [n_i] -> [n_j]`` (a tuple of 1-indexed images).
    """

    partition: Partition
    component_sets: Mapping[int, tuple[PartTransformation, ...]]
    transfers: Mapping[int, Mapping[int, tuple[int, ...]]] = field(default_factory=dict)

    def J(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(self.transfers.get(i, {})))


def default_transfer(ni: int, nj: int) -> tuple[int, ...]:
    return tuple(min(k, nj) for k in range(1, ni + 1))


def default_spec(p: Partition) -> GeneratingSetSpec:
    sizes = p.block_sizes
    largest_of_size = {s: max(b for b, t in enumerate(sizes, start=1) if t == s) for s in set(sizes)}
    transfers = {}
    for i, ni in enumerate(sizes, start=1):
        transfers[i] = {
            largest_of_size[s]: default_transfer(ni, s) for s in sorted(set(sizes)) if s < ni
        }
    components = {s: tuple(component_generators(p, s)) for s in sorted(set(sizes))}
    return GeneratingSetSpec(p, components, transfers)


def validate_spec(p: Partition, spec: GeneratingSetSpec) -> None:
    if spec.partition != p:
        raise InvalidSpec(f"spec is for {spec.partition}, not {p}")
    sizes = p.block_sizes
    for q, elems in spec.component_sets.items():
        if q not in sizes:
            raise InvalidSpec(f"no blocks of size {q}")
        for e in elems:
            if e.partition != p or not is_idempotent(e) or not in_component(p, q, e):
                raise InvalidSpec(f"{e} is not an idempotent acting only on the blocks of size {q}")
    for i, ni in enumerate(sizes, start=1):
        chosen = spec.transfers.get(i, {})
        smaller = {s for s in sizes if s < ni}
        got = [sizes[j - 1] for j in chosen if 1 <= j <= p.m]
        if len(got) != len(chosen) or sorted(got) != sorted(smaller):
            raise InvalidSpec(f"J_{i} must hold exactly one block of each size in {sorted(smaller)}")
        for j, f in chosen.items():
            if len(f) != ni or not is_surjective(f, sizes[j - 1]):
                raise InvalidSpec(f"f_{i}{j} = {f} is not a surjection [{ni}] -> [{sizes[j - 1]}]")


def w1_elements(p: Partition) -> list[PartTransformation]:
    sizes = p.block_sizes
    out = []
    for i, j in itertools.combinations(range(1, p.m + 1), 2):
        if sizes[i - 1] > sizes[j - 1]:
            out.extend(make_e_ij_f(p, i, j, f) for f in injections(sizes[j - 1], sizes[i - 1]))
    return out


def w2_elements(p: Partition, spec: GeneratingSetSpec) -> list[PartTransformation]:
    return [
        make_e_ij_f(p, j, i, f)
        for i in sorted(spec.transfers)
        for j, f in sorted(spec.transfers[i].items())
    ]


def minimal_generating_set(p: Partition, spec: GeneratingSetSpec | None = None) -> ElementSet:
    if spec is None:
        spec = default_spec(p)
    validate_spec(p, spec)
    out = ElementSet(p)
    for q in sorted(spec.component_sets):
        for e in spec.component_sets[q]:
            out.add(e)
    for e in w1_elements(p) + w2_elements(p, spec):
        out.add(e)
    return out


def rank_generating_set(p: Partition) -> ElementSet:
    """A generating set of size rank(S).

    When exactly two blocks have size 1 (and P is not uniform), the two
    size-1 collapses f, g and the collapse e of the last block into block 1
    are traded for the single non-idempotent ``eg``: ``e = (eg)f`` and
    ``g = f(eg)``.
    """
    base = minimal_generating_set(p, default_spec(p))
    if not rank_and_idrank(p).special_mu1_eq_2:
        return base
    m = p.m
    # f = e_{m-1,m;1} stays in the set; only e and g are replaced
    g = make_e_ij_f(p, m, m - 1, (1,))
    e = make_e_ij_f(p, 1, m, (1,))
    out = ElementSet(p)
    for x in base:
        if x == e:
            out.add(compose(e, g))
        elif x != g:
            out.add(x)
    return out


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorWord:
    """A product of letters, given as 0-based positions in ``alphabet``."""

    alphabet: ElementSet
    letters: tuple[int, ...]

    def evaluate(self) -> PartTransformation:
        out = identity(self.alphabet.partition)
        for k in self.letters:
            out = compose(out, self.alphabet[k])
        return out

    def __len__(self):
        return len(self.letters)

    def to_json(self) -> dict:
        return {"letters": list(self.letters)}


def idempotent_as_collapses(e: Sequence[int]) -> list[tuple[int, int]]:
    """Write an idempotent of T_k as a product of ``e_xy``.

    Each non-fixed point ``y`` is sent to its image ``x``, which is a fixed
    point and so is never moved again; the order of the factors is irrelevant.
    """
    if not is_idempotent_map(e):
        raise NotIdempotent(f"{tuple(e)} is not idempotent")
    return [(x, y) for y, x in enumerate(e, start=1) if x != y]


def _kernel_retraction(g: Sequence[int]) -> tuple[int, ...]:
    """The idempotent with the same kernel as ``g`` sending each class to its minimum."""
    first: dict[int, int] = {}
    for x, y in enumerate(g, start=1):
        first.setdefault(y, x)
    return tuple(first[y] for y in g)


def _extend(partial: dict[int, int], domain: int, codomain: int) -> tuple[int, ...]:
    """Extend an injective partial map to an injection or surjection
    [domain] -> [codomain]; free points take the smallest unused values in
    increasing order, then (surjective case) the smallest value."""
    used = set(partial.values())
    free = iter(y for y in range(1, codomain + 1) if y not in used)
    out = []
    for x in range(1, domain + 1):
        if x in partial:
            out.append(partial[x])
        else:
            out.append(next(free, 1))
    return tuple(out)


def factorize_idempotent(f: PartTransformation, alphabet: ElementSet | None = None) -> GeneratorWord:
    """A word over G1 u G2 evaluating to the idempotent ``f``."""
    if not is_idempotent(f):
        raise NotIdempotent(f"{f} is not an idempotent")
    p = f.partition
    if alphabet is None:
        alphabet = full_idempotent_generators(p)
    sizes = p.block_sizes
    letters: list[int] = []

    def emit_block_idempotent(k: int, e: Sequence[int]):
        for x, y in idempotent_as_collapses(e):
            letters.append(alphabet.index(make_g_k(p, k, e_xy(sizes[k - 1], x, y))))

    classes: dict[int, list[int]] = {}
    for i, t in enumerate(f.fbar, start=1):
        classes.setdefault(t, []).append(i)
    for target, members in sorted(classes.items()):
        # target is fixed by fbar, so it belongs to its own class
        g_target = f.blocks[target - 1]
        others = [b for b in members if b != target]
        transfers = []
        nt = sizes[target - 1]
        for b in others:
            gb = f.blocks[b - 1]
            nb = sizes[b - 1]
            if (nb <= nt and is_injective(gb)) or (nb >= nt and is_surjective(gb, nt)):
                # already an admissible collapse map: one transfer letter suffices
                transfers.append((b, tuple(gb)))
                continue
            eb = _kernel_retraction(gb)
            emit_block_idempotent(b, eb)
            partial = {eb[x]: gb[x] for x in range(len(gb))}
            transfers.append((b, _extend(partial, nb, nt)))
        emit_block_idempotent(target, g_target)
        for b, h in transfers:
            letters.append(alphabet.index(make_e_ij_f(p, target, b, h)))
    return GeneratorWord(alphabet, tuple(letters))


def transfer_choices(p: Partition, i: int) -> list[dict[int, tuple[int, ...]]]:
    """Every admissible (J_i, f_ij) choice for block i."""
    sizes = p.block_sizes
    ni = sizes[i - 1]
    per_size = []
    for s in sorted(set(x for x in sizes if x < ni)):
        opts = [(j, f) for j, t in enumerate(sizes, start=1) if t == s for f in surjections(ni, s)]
        per_size.append(opts)
    return [dict(combo) for combo in itertools.product(*per_size)]
