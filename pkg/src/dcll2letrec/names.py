"""Identifiers and the fresh-name supply shared by both calculi.

Binders are identified by a globally unique integer uid, so substitution and
hoisting never capture: two distinct binders are distinct Names even when
their display text collides.  Names invented by the toolkit itself (pattern
scrutinees, continuation variables, ...) carry a reserved ``$`` prefix that
no parser accepts, so they can never collide with user identifiers; the
pretty-printer strips the prefix and renumbers on collision.
"""

from __future__ import annotations

from dataclasses import dataclass

GENERATED_PREFIX = "$"


@dataclass(frozen=True)
class Name:
    text: str
    uid: int

    @property
    def generated(self) -> bool:
        return self.text.startswith(GENERATED_PREFIX)

    @property
    def display(self) -> str:
        base = self.text.lstrip(GENERATED_PREFIX)
        return base if base else f"v{self.uid}"

    def __str__(self) -> str:
        return self.display

    def __repr__(self) -> str:
        return f"{self.display}#{self.uid}"


class FreshSupply:
    """Monotone uid counter; every draw is strictly larger than all before."""

    def __init__(self, start: int = 0):
        self._next = start

    def _draw(self) -> int:
        uid = self._next
        self._next += 1
        return uid

    def fresh(self, hint: str = "v") -> Name:
        """A toolkit-invented name; reserved prefix keeps it out of user space."""
        return Name(GENERATED_PREFIX + hint, self._draw())

    def named(self, text: str) -> Name:
        """A user-written identifier bound at parse time."""
        return Name(text, self._draw())

    def rename(self, name: Name) -> Name:
        """A fresh uid with the same display text (binder renaming)."""
        return Name(name.text, self._draw())

    def reserve_above(self, uid: int) -> None:
        """Make sure future draws do not collide with uids up to ``uid``."""
        if uid >= self._next:
            self._next = uid + 1
