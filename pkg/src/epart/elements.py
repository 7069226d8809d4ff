from __future__ import annotations

import json
from typing import Iterable, Iterator, Sequence, Union

from .core import IncompatiblePartitions, Partition, PartTransformation, from_flat, from_json

Element = Union[PartTransformation, Sequence[int]]


class ElementSet:
    """Deduplicated, ordered collection of transformations over one partition.

    Elements are keyed by their flat point maps; insertion order is kept, so a
    closure or a constructed generating set always lists its members in the
    same order.  Equality ignores order.
    """

    __slots__ = ("partition", "_flats", "_index", "_cache")

    def __init__(self, partition: Partition, elements: Iterable[Element] = ()):
        self.partition = partition
        self._flats: list[tuple[int, ...]] = []
        self._index: dict[tuple[int, ...], int] = {}
        self._cache: dict[int, PartTransformation] = {}
        for x in elements:
            self.add(x)

    @classmethod
    def from_flats(cls, partition: Partition, flats: Iterable[tuple[int, ...]]) -> "ElementSet":
        out = cls(partition)
        for f in flats:
            if f not in out._index:
                out._index[f] = len(out._flats)
                out._flats.append(f)
        return out

    def _key(self, x: Element) -> tuple[int, ...]:
        if isinstance(x, PartTransformation):
            if x.partition != self.partition:
                raise IncompatiblePartitions(f"{x} is not over {self.partition}")
            return x.flat
        return tuple(x)

    def add(self, x: Element) -> bool:
        key = self._key(x)
        if key in self._index:
            return False
        self._index[key] = len(self._flats)
        self._flats.append(key)
        if isinstance(x, PartTransformation):
            self._cache[len(self._flats) - 1] = x
        return True

    @property
    def flats(self) -> list[tuple[int, ...]]:
        return self._flats

    def __len__(self):
        return len(self._flats)

    def __getitem__(self, k: int) -> PartTransformation:
        if k < 0:
            k += len(self._flats)
        elem = self._cache.get(k)
        if elem is None:
            elem = from_flat(self.partition, self._flats[k])
            self._cache[k] = elem
        return elem

    def __iter__(self) -> Iterator[PartTransformation]:
        return (self[k] for k in range(len(self._flats)))

    def __contains__(self, x) -> bool:
        try:
            return self._key(x) in self._index
        except IncompatiblePartitions:
            return False

    def index(self, x: Element) -> int:
        return self._index[self._key(x)]

    def keys(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self._index)

    def __eq__(self, other):
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.partition == other.partition and self._index.keys() == other._index.keys()

    def __hash__(self):
        return hash((self.partition, self.keys()))

    def issubset(self, other: "ElementSet") -> bool:
        return self._index.keys() <= other._index.keys()

    def sorted(self) -> "ElementSet":
        return ElementSet.from_flats(self.partition, sorted(self._flats))

    def without(self, x: Element) -> "ElementSet":
        key = self._key(x)
        return ElementSet.from_flats(self.partition, (f for f in self._flats if f != key))

    def __repr__(self):
        return f"ElementSet({self.partition}, {len(self)} elements)"

    def to_json(self) -> list[dict]:
        return [x.to_json() for x in self]

    def to_jsonl(self) -> str:
        return "".join(x.dumps() + "\n" for x in self)

    @classmethod
    def from_jsonl(cls, partition: Partition, text: str) -> "ElementSet":
        out = cls(partition)
        for line in text.splitlines():
            if line.strip():
                out.add(from_json(json.loads(line)))
        return out
