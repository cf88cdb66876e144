"""Monomial orders.

An order is represented by a key function mapping an exponent tuple to a flat
tuple of ints; a larger key means a larger monomial.
"""
from __future__ import annotations

from typing import Sequence, Tuple

from .polynomial import Monomial


class MonomialOrder:
    name = "order"

    def key(self, m: Monomial) -> Tuple[int, ...]:
        raise NotImplementedError

    def __call__(self, m: Monomial) -> Tuple[int, ...]:
        return self.key(m)

    def __repr__(self):
        return self.name


class GradedRevLex(MonomialOrder):
    name = "grevlex"

    def key(self, m):
        return (sum(m),) + tuple(-e for e in reversed(m))


class GradedLex(MonomialOrder):
    name = "grlex"

    def key(self, m):
        return (sum(m),) + tuple(m)


class Lex(MonomialOrder):
    """Lexicographic order; ``priority`` lists variable indices from largest down
    (default: ring order, so x0 > x1 > ...)."""

    def __init__(self, priority: Sequence[int] | None = None):
        self.priority = None if priority is None else tuple(priority)

    @property
    def name(self):
        return "lex" if self.priority is None else f"lex{list(self.priority)}"

    def key(self, m):
        if self.priority is None:
            return tuple(m)
        return tuple(m[i] for i in self.priority)


class BlockOrder(MonomialOrder):
    """Product order: blocks compared left to right, each by grevlex on its variables.

    Every variable must belong to exactly one block.  Earlier blocks dominate,
    so ``BlockOrder([elim, keep])`` is an elimination order for ``elim``.
    """

    def __init__(self, blocks: Sequence[Sequence[int]], nvars: int | None = None):
        self.blocks = tuple(tuple(b) for b in blocks)
        seen = [i for b in self.blocks for i in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks overlap")
        if nvars is not None and sorted(seen) != list(range(nvars)):
            raise ValueError("blocks must partition the variables")

    @property
    def name(self):
        return f"block{[list(b) for b in self.blocks]}"

    def key(self, m):
        out = []
        for b in self.blocks:
            sub = [m[i] for i in b]
            out.append(sum(sub))
            out.extend(-e for e in reversed(sub))
        return tuple(out)


def BlockElimination(block1: Sequence[int], block2: Sequence[int]) -> BlockOrder:
    """Two-block elimination order with ``block1`` >> ``block2``."""
    return BlockOrder([block1, block2])
