"""Partitions of a finite set and the monoid T(X,P) of partition-preserving maps.

Points of X are pairs (block, position).  Externally blocks and positions are
1-indexed.  A transformation is stored in block form ``[f_1, ..., f_m; fbar]``:
``fbar[i-1]`` is the block that block ``i`` is sent to and ``blocks[i-1][k-1]``
is the position (inside block ``fbar[i-1]``) that point ``(i, k)`` goes to.

Maps act on the right, so ``compose(f, g)`` first applies ``f`` and then ``g``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class InvalidInput(ValueError):
    pass


class IncompatiblePartitions(ValueError):
    pass


class InvalidGenerator(ValueError):
    pass


class SizeLimitExceeded(RuntimeError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"T(X,P) has {required} elements, above the cap of {cap}")
        self.required = required
        self.cap = cap


DEFAULT_ENUMERATION_CAP = 10**6


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    block_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(self.block_sizes)
        if any(not isinstance(s, int) or s < 1 for s in sizes):
            raise InvalidInput(f"block sizes must be positive integers, got {list(sizes)}")
        object.__setattr__(self, "block_sizes", tuple(sorted(sizes, reverse=True)))

    @property
    def m(self) -> int:
        return len(self.block_sizes)

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Flat index of the first point of each block."""
        out, acc = [], 0
        for s in self.block_sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    @cached_property
    def block_of_point(self) -> tuple[int, ...]:
        return tuple(b for b, s in enumerate(self.block_sizes) for _ in range(s))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.block_sizes)) <= 1

    def __str__(self):
        return "(" + ",".join(map(str, self.block_sizes)) + ")"


def make_partition(block_sizes: Iterable[int]) -> Partition:
    return Partition(tuple(block_sizes))


def integer_partitions(n: int) -> Iterator[Partition]:
    """All partitions of n, largest parts first."""

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, cap), 0, -1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    for sizes in rec(n, n):
        yield Partition(sizes)


@dataclass(frozen=True)
class Profile:
    """Block statistics of a partition, indexed by block size ``i`` in ``1..n``.

    ``M[i-1]`` holds the (1-indexed) blocks of size ``i``, ``mu[i-1] = |M_i|``,
    ``N[i-1]`` the occurring sizes below ``i`` and ``nu[i-1] = |N_i|``.
    """

    M: tuple[tuple[int, ...], ...]
    mu: tuple[int, ...]
    N: tuple[tuple[int, ...], ...]
    nu: tuple[int, ...]

    def mu_of(self, i: int) -> int:
        return self.mu[i - 1] if 1 <= i <= len(self.mu) else 0

    def nu_of(self, i: int) -> int:
        return self.nu[i - 1] if 1 <= i <= len(self.nu) else 0


def profile(p: Partition) -> Profile:
    sizes = set(p.block_sizes)
    M, N = [], []
    for i in range(1, p.n + 1):
        M.append(tuple(q + 1 for q, s in enumerate(p.block_sizes) if s == i))
        N.append(tuple(sorted(s for s in sizes if s < i)))
    return Profile(
        M=tuple(M),
        mu=tuple(len(x) for x in M),
        N=tuple(N),
        nu=tuple(len(x) for x in N),
    )


# ---------------------------------------------------------------------------
# Maps [k] -> [l], as tuples of 1-indexed images
# ---------------------------------------------------------------------------


def identity_map(k: int) -> tuple[int, ...]:
    return tuple(range(1, k + 1))


def is_injective(f: Sequence[int]) -> bool:
    return len(set(f)) == len(f)


def is_surjective(f: Sequence[int], codomain: int) -> bool:
    return set(f) == set(range(1, codomain + 1))


def is_idempotent_map(f: Sequence[int]) -> bool:
    return all(f[y - 1] == y for y in f)


def is_permutation(f: Sequence[int]) -> bool:
    return is_surjective(f, len(f)) and len(f) == len(set(f))


def compose_maps(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """``x(fg) = (xf)g``."""
    return tuple(g[y - 1] for y in f)


def e_xy(k: int, x: int, y: int) -> tuple[int, ...]:
    """The idempotent of T_k sending ``y`` to ``x`` and fixing everything else."""
    if x == y or not (1 <= x <= k and 1 <= y <= k):
        raise InvalidInput(f"e_xy needs distinct x, y in [1, {k}], got {x}, {y}")
    return tuple(x if z == y else z for z in range(1, k + 1))


def all_maps(k: int, l: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(1, l + 1), repeat=k)


def injections(k: int, l: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1, l + 1), k)


def surjections(k: int, l: int) -> Iterator[tuple[int, ...]]:
    for f in all_maps(k, l):
        if is_surjective(f, l):
            yield f


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelRelation:
    """An equivalence relation given by its classes (sorted, 1-indexed)."""

    classes: tuple[tuple[int, ...], ...]

    @classmethod
    def of_map(cls, f: Sequence) -> "KernelRelation":
        groups: dict = {}
        for x, y in enumerate(f, start=1):
            groups.setdefault(y, []).append(x)
        return cls(tuple(sorted(tuple(g) for g in groups.values())))

    @property
    def is_trivial(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for c in self.classes for a in c for b in c)

    def contains(self, other: "KernelRelation") -> bool:
        """True when ``other`` is contained in (refines) this relation."""
        return other.pairs() <= self.pairs()


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatTransformation:
    """A map on the flattened point set ``0..n-1`` (block 1's points first).

    This is the private working form used by the closure machinery; it is
    0-indexed, unlike every serialized form.
    """

    partition: Partition
    point_map: tuple[int, ...]

    def __post_init__(self):
        p = self.partition
        if len(self.point_map) != p.n or any(not 0 <= y < p.n for y in self.point_map):
            raise InvalidInput("point map must send [0, n) into itself")
        owner = p.block_of_point
        for b, start in enumerate(p.offsets):
            targets = {owner[self.point_map[x]] for x in range(start, start + p.block_sizes[b])}
            if len(targets) > 1:
                raise InvalidInput(f"block {b + 1} is split across blocks {sorted(t + 1 for t in targets)}")


@dataclass(frozen=True)
class PartTransformation:
    partition: Partition
    fbar: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    _flat: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        p = self.partition
        fbar = tuple(self.fbar)
        blocks = tuple(tuple(b) for b in self.blocks)
        if len(fbar) != p.m or len(blocks) != p.m:
            raise InvalidInput(f"expected {p.m} blocks, got fbar of length {len(fbar)} and {len(blocks)} block maps")
        for i, (t, bmap) in enumerate(zip(fbar, blocks)):
            if not 1 <= t <= p.m:
                raise InvalidInput(f"fbar[{i + 1}] = {t} is not a block index")
            if len(bmap) != p.block_sizes[i]:
                raise InvalidInput(f"block map {i + 1} has length {len(bmap)}, expected {p.block_sizes[i]}")
            target = p.block_sizes[t - 1]
            if any(not 1 <= y <= target for y in bmap):
                raise InvalidInput(f"block map {i + 1} leaves [1, {target}]")
        object.__setattr__(self, "fbar", fbar)
        object.__setattr__(self, "blocks", blocks)
        offs = p.offsets
        flat = tuple(offs[t - 1] + y - 1 for t, bmap in zip(fbar, blocks) for y in bmap)
        object.__setattr__(self, "_flat", flat)

    @property
    def flat(self) -> tuple[int, ...]:
        return self._flat

    def __mul__(self, other: "PartTransformation") -> "PartTransformation":
        return compose(self, other)

    def __lt__(self, other: "PartTransformation") -> bool:
        return self._flat < other._flat

    def to_json(self) -> dict:
        return {
            "blocks_sizes": list(self.partition.block_sizes),
            "fbar": list(self.fbar),
            "blocks": [list(b) for b in self.blocks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __str__(self):
        inner = ", ".join("".join(map(str, b)) or "-" for b in self.blocks)
        return f"[{inner}; {''.join(map(str, self.fbar))}]"


def from_json(obj) -> PartTransformation:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        sizes, fbar, blocks = obj["blocks_sizes"], obj["fbar"], obj["blocks"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"not a transformation object: {obj!r}") from exc
    p = make_partition(sizes)
    if list(p.block_sizes) != list(sizes):
        raise InvalidInput("blocks_sizes must be listed in non-increasing order")
    return PartTransformation(p, tuple(fbar), tuple(tuple(b) for b in blocks))


def identity(p: Partition) -> PartTransformation:
    return PartTransformation(p, identity_map(p.m), tuple(identity_map(s) for s in p.block_sizes))


def compose(f: PartTransformation, g: PartTransformation) -> PartTransformation:
    """``fg = [f_1 g_{1fbar}, ..., f_m g_{m fbar}; fbar gbar]``."""
    if f.partition != g.partition:
        raise IncompatiblePartitions(f"cannot compose over {f.partition} and {g.partition}")
    blocks = tuple(compose_maps(fi, g.blocks[t - 1]) for fi, t in zip(f.blocks, f.fbar))
    return PartTransformation(f.partition, compose_maps(f.fbar, g.fbar), blocks)


def is_idempotent(f: PartTransformation) -> bool:
    fbar = f.fbar
    if not is_idempotent_map(fbar):
        return False
    image = set(fbar)
    for i, (t, fi) in enumerate(zip(fbar, f.blocks), start=1):
        if i in image:
            if not is_idempotent_map(fi):
                return False
        elif not set(fi) <= set(f.blocks[t - 1]):
            return False
    return True


def image_size(f: PartTransformation) -> int:
    return len(set(f.flat))


def kernel(f: PartTransformation) -> KernelRelation:
    return KernelRelation.of_map(f.flat)


def to_flat(f: PartTransformation) -> FlatTransformation:
    return FlatTransformation(f.partition, f.flat)


def from_flat(p: Partition, point_map: Sequence[int]) -> PartTransformation:
    flat = FlatTransformation(p, tuple(point_map))
    owner, offs = p.block_of_point, p.offsets
    fbar, blocks = [], []
    for b, start in enumerate(offs):
        pts = flat.point_map[start:start + p.block_sizes[b]]
        t = owner[pts[0]]
        fbar.append(t + 1)
        blocks.append(tuple(y - offs[t] + 1 for y in pts))
    return PartTransformation(p, tuple(fbar), tuple(blocks))


def flat_compose(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    return tuple(g[y] for y in f)


def make_e_ij_f(p: Partition, i: int, j: int, f: Sequence[int]) -> PartTransformation:
    """``[1, ..., f, ..., 1; e_ij]`` with ``f: [n_j] -> [n_i]`` in position ``j``."""
    if i == j or not (1 <= i <= p.m and 1 <= j <= p.m):
        raise InvalidGenerator(f"need distinct block indices in [1, {p.m}], got i={i}, j={j}")
    ni, nj = p.block_sizes[i - 1], p.block_sizes[j - 1]
    f = tuple(f)
    if len(f) != nj or any(not 1 <= y <= ni for y in f):
        raise InvalidGenerator(f"f must map [{nj}] into [{ni}], got {f}")
    if nj <= ni and not is_injective(f):
        raise InvalidGenerator(f"f must be injective when n_j <= n_i, got {f}")
    if nj >= ni and not is_surjective(f, ni):
        raise InvalidGenerator(f"f must be surjective when n_j >= n_i, got {f}")
    fbar = e_xy(p.m, i, j)
    blocks = tuple(f if b == j else identity_map(s) for b, s in enumerate(p.block_sizes, start=1))
    return PartTransformation(p, fbar, blocks)


def make_g_k(p: Partition, k: int, g: Sequence[int]) -> PartTransformation:
    """``[1, ..., g, ..., 1; 1]`` with ``g`` acting on block ``k``."""
    if not 1 <= k <= p.m:
        raise InvalidInput(f"block index {k} out of range [1, {p.m}]")
    g = tuple(g)
    blocks = tuple(g if b == k else identity_map(s) for b, s in enumerate(p.block_sizes, start=1))
    return PartTransformation(p, identity_map(p.m), blocks)


def count_all(p: Partition) -> int:
    """|T(X,P)|: each block independently picks a target block and a map into it."""
    return math.prod(sum(t**s for t in p.block_sizes) for s in p.block_sizes)


def enumerate_all(p: Partition, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[PartTransformation]:
    """Every element of T(X,P) exactly once, in the same deterministic order
    as ``enumerate_flat``."""
    total = count_all(p)
    if total > cap:
        raise SizeLimitExceeded(total, cap)
    return (from_flat(p, f) for f in _enumerate_flat(p))


def enumerate_flat(p: Partition, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[tuple[int, ...]]:
    """Flat point maps of every element of T(X,P).

    Elements are ordered lexicographically by (target block, block map) of
    block 1, then of block 2, and so on.
    """
    total = count_all(p)
    if total > cap:
        raise SizeLimitExceeded(total, cap)
    return _enumerate_flat(p)


def _enumerate_flat(p: Partition) -> Iterator[tuple[int, ...]]:
    sizes, offs = p.block_sizes, p.offsets
    options = [
        [tuple(offs[t] + y for y in bmap) for t in range(p.m) for bmap in itertools.product(range(sizes[t]), repeat=s)]
        for s in sizes
    ]
    chain = itertools.chain.from_iterable
    for parts in itertools.product(*options):
        yield tuple(chain(parts))
