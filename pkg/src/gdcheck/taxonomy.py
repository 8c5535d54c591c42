"""The fixed BFO fragment taxonomy, optionally extended with user classes."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from types import MappingProxyType

from .errors import CategoryError, UnknownNameError

ROOT = "Entity"

_PARENTS: dict[str, str | None] = {
    "Entity": None,
    "Continuant": "Entity",
    "Occurrent": "Entity",
    "Process": "Occurrent",
    "IndependentContinuant": "Continuant",
    "MaterialEntity": "IndependentContinuant",
    "ImmaterialEntity": "IndependentContinuant",
    "Site": "ImmaterialEntity",
    "Boundary": "ImmaterialEntity",
    "SpatialRegion": "ImmaterialEntity",
    "GenericallyDependentContinuant": "Continuant",
    "SpecificallyDependentContinuant": "Continuant",
    "Quality": "SpecificallyDependentContinuant",
    "RelationalQuality": "Quality",
    "PhysicalQuality": "Quality",
    "RealizableEntity": "SpecificallyDependentContinuant",
    "Disposition": "RealizableEntity",
    "Function": "Disposition",
    "Role": "RealizableEntity",
}

BASE_PARENTS: Mapping[str, str | None] = MappingProxyType(_PARENTS)
CATEGORIES: tuple[str, ...] = tuple(_PARENTS)

# Short names accepted wherever a category is expected.
ALIASES: Mapping[str, str] = MappingProxyType({
    "GDC": "GenericallyDependentContinuant",
    "SDC": "SpecificallyDependentContinuant",
})


def canonical(name: str) -> str:
    return ALIASES.get(name, name)


class Taxonomy:
    """A category tree: the fixed fragment plus any user-declared subclasses.

    User classes must hang below an existing category and may not shadow a
    fixed one, so the tree stays rooted at ``Entity``.
    """

    def __init__(self, user_classes: Iterable[tuple[str, str]] = ()) -> None:
        parents = dict(_PARENTS)
        for name, parent in user_classes:
            parent = canonical(parent)
            if name in parents or name in ALIASES:
                raise CategoryError(f"class {name!r} is already defined")
            if parent not in parents:
                raise UnknownNameError("category", parent)
            parents[name] = parent
        self._parents = parents

    def __contains__(self, name: object) -> bool:
        return isinstance(name, str) and canonical(name) in self._parents

    def __iter__(self):
        return iter(self._parents)

    def resolve(self, name: str) -> str:
        name = canonical(name)
        if name not in self._parents:
            raise UnknownNameError("category", name)
        return name

    def parent(self, name: str) -> str | None:
        return self._parents[self.resolve(name)]

    def ancestors(self, name: str) -> list[str]:
        """Ancestor chain of ``name``, nearest first, excluding ``name``."""
        chain = []
        node = self._parents[self.resolve(name)]
        while node is not None:
            chain.append(node)
            node = self._parents[node]
        return chain

    def subsumes(self, ancestor: str, descendant: str) -> bool:
        ancestor = self.resolve(ancestor)
        node: str | None = self.resolve(descendant)
        while node is not None:
            if node == ancestor:
                return True
            node = self._parents[node]
        return False

    def is_user_class(self, name: str) -> bool:
        return canonical(name) in self._parents and canonical(name) not in _PARENTS


BASE = Taxonomy()


def subsumes(ancestor: str, descendant: str) -> bool:
    """True iff ``descendant`` is ``ancestor`` or lies below it in the fixed taxonomy."""
    return BASE.subsumes(ancestor, descendant)
