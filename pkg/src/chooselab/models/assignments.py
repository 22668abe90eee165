"""List assignments, size functions and colorings."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from chooselab.models.graph import VertexId

Color = int
Coloring = dict[VertexId, Color]
ColorPair = tuple[Color, Color]


@dataclass(frozen=True)
class ListAssignment(Mapping[VertexId, frozenset[Color]]):
    """Map vertex -> nonempty finite set of integer colors."""

    lists: Mapping[VertexId, frozenset[Color]] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        normalized = {v: frozenset(colors) for v, colors in self.lists.items()}
        for vertex, colors in normalized.items():
            if not colors:
                raise ValueError(f"List of vertex {vertex} is empty.")
        object.__setattr__(self, "lists", normalized)

    @classmethod
    def of(cls, lists: Mapping[VertexId, Iterable[Color]]) -> "ListAssignment":
        return cls({v: frozenset(colors) for v, colors in lists.items()})

    def __getitem__(self, vertex: VertexId) -> frozenset[Color]:
        return self.lists[vertex]

    def __iter__(self) -> Iterator[VertexId]:
        return iter(self.lists)

    def __len__(self) -> int:
        return len(self.lists)

    def __hash__(self) -> int:
        return hash(frozenset(self.lists.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ListAssignment):
            return dict(self.lists) == dict(other.lists)
        return NotImplemented

    def colors(self) -> frozenset[Color]:
        used: set[Color] = set()
        for colors in self.lists.values():
            used.update(colors)
        return frozenset(used)

    def sizes(self) -> "SizeFunction":
        return SizeFunction({v: len(colors) for v, colors in self.lists.items()})

    def with_lists(self, updates: Mapping[VertexId, Iterable[Color]]) -> "ListAssignment":
        merged = dict(self.lists)
        merged.update({v: frozenset(colors) for v, colors in updates.items()})
        return ListAssignment(merged)

    def restrict(self, vertices: Iterable[VertexId]) -> "ListAssignment":
        keep = set(vertices)
        return ListAssignment({v: c for v, c in self.lists.items() if v in keep})

    def renamed(self, mapping: Mapping[Color, Color]) -> "ListAssignment":
        """Rename colors; colors missing from ``mapping`` are kept."""
        return ListAssignment(
            {v: frozenset(mapping.get(c, c) for c in colors) for v, colors in self.lists.items()}
        )


@dataclass(frozen=True)
class SizeFunction(Mapping[VertexId, int]):
    """Map vertex -> positive list size (the ``f`` of f-choosability)."""

    sizes: Mapping[VertexId, int] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        for vertex, size in self.sizes.items():
            if int(size) < 1:
                raise ValueError(f"Size of vertex {vertex} must be >= 1, got {size}.")
        object.__setattr__(self, "sizes", {v: int(s) for v, s in self.sizes.items()})

    @classmethod
    def constant(cls, vertices: Iterable[VertexId], k: int) -> "SizeFunction":
        return cls({v: k for v in vertices})

    def __getitem__(self, vertex: VertexId) -> int:
        return self.sizes[vertex]

    def __iter__(self) -> Iterator[VertexId]:
        return iter(self.sizes)

    def __len__(self) -> int:
        return len(self.sizes)

    def __hash__(self) -> int:
        return hash(frozenset(self.sizes.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SizeFunction):
            return dict(self.sizes) == dict(other.sizes)
        return NotImplemented

    def with_size(self, vertex: VertexId, size: int) -> "SizeFunction":
        merged = dict(self.sizes)
        merged[vertex] = size
        return SizeFunction(merged)

    def values_set(self) -> frozenset[int]:
        return frozenset(self.sizes.values())


__all__ = ["Color", "ColorPair", "Coloring", "ListAssignment", "SizeFunction"]
