"""Braid words in Artin generators, closure permutations, and square detection.

Letters act left to right on strand positions: reading the word is reading
the diagram bottom to top, and the letter (i, +1) swaps the strands at
positions i and i+1 with the strand moving rightwards passing over.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[tuple[int, int], ...]  # (generator index 1..strands-1, sign ±1)

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError(f"strand count must be positive, got {self.strands}")
        for i, sign in self.letters:
            if not 1 <= i <= self.strands - 1:
                raise BraidError(
                    f"generator index {i} out of range for {self.strands} strands")
            if sign not in (1, -1):
                raise BraidError(f"letter sign must be ±1, got {sign}")

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise BraidError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def to_text(self) -> str:
        return " ".join(f"s{i}" if sign > 0 else f"s{i}^-1"
                        for i, sign in self.letters)


@dataclass(frozen=True)
class Component:
    strands: tuple[int, ...]  # cycle of π_B, in cycle order, 1-based

    @property
    def size(self) -> int:
        return len(self.strands)


@dataclass(frozen=True)
class ClosureStructure:
    permutation: tuple[int, ...]  # π_B(j) at index j-1, 1-based values
    components: tuple[Component, ...]

    def to_json(self) -> dict:
        return {
            "permutation": list(self.permutation),
            "components": [{"strands": list(c.strands), "size": c.size}
                           for c in self.components],
        }


_TOKEN = re.compile(r"^s(\d+)(?:\^(-?\d+))?$")


def parse_braid_word(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated tokens sI, sI^-1, sI^K into a braid word.

    An exponent K expands into |K| letters; the empty string is the identity
    braid.
    """
    if strands < 1:
        raise BraidError(f"strand count must be positive, got {strands}")
    letters: list[tuple[int, int]] = []
    for token in text.split():
        m = _TOKEN.match(token)
        if not m:
            raise BraidError(f"unknown token {token!r}")
        i = int(m.group(1))
        k = int(m.group(2)) if m.group(2) is not None else 1
        if k == 0:
            raise BraidError(f"zero exponent in token {token!r}")
        if not 1 <= i <= strands - 1:
            raise BraidError(
                f"generator index {i} out of range for {strands} strands")
        sign = 1 if k > 0 else -1
        letters.extend([(i, sign)] * abs(k))
    return BraidWord(strands, tuple(letters))


def permutation_of_word(b: BraidWord) -> tuple[int, ...]:
    """Compose the per-letter transpositions (i, i+1) left to right.

    Returns π with π[j-1] = final position of the strand starting at j.
    """
    pos = list(range(b.strands + 1))  # pos[j] = current position of strand j
    for i, _sign in b.letters:
        for j in range(1, b.strands + 1):
            if pos[j] == i:
                pos[j] = i + 1
            elif pos[j] == i + 1:
                pos[j] = i
    return tuple(pos[1:])


def closure_structure(b: BraidWord) -> ClosureStructure:
    perm = permutation_of_word(b)
    seen = [False] * (b.strands + 1)
    components = []
    for j in range(1, b.strands + 1):
        if seen[j]:
            continue
        cycle = []
        k = j
        while not seen[k]:
            seen[k] = True
            cycle.append(k)
            k = perm[k - 1]
        components.append(Component(tuple(cycle)))
    return ClosureStructure(perm, tuple(components))


def is_syntactic_square(b: BraidWord) -> bool:
    """True iff the letter list is w·w for some word w, checked elementwise."""
    n = len(b.letters)
    if n % 2:
        return False
    h = n // 2
    return b.letters[:h] == b.letters[h:]


def half_word(b: BraidWord) -> BraidWord:
    """The w with b = w·w; only valid when is_syntactic_square(b)."""
    if not is_syntactic_square(b):
        raise BraidError("braid word is not a syntactic square")
    return BraidWord(b.strands, b.letters[: len(b.letters) // 2])
