"""Finite-index subgroups of the rank-2 free group as permutation pairs.

A subgroup of index k is stored as the pair of permutations that its
generators induce on the k cosets, with the subgroup itself the stabilizer
of coset 0.  Tables are compared after breadth-first relabeling from the
basepoint with letter order a, a^-1, b, b^-1, which picks one canonical
labeling per subgroup.

enumerate_subgroups generates every index-k subgroup exactly once by
backtracking over partially defined tables: slots are filled in the scan
order above and a fresh coset always receives the smallest unused label, so
completed tables are canonical by construction.  hall_count evaluates
Marshall Hall's recursion

    a_k = k * k! - sum_{i=1}^{k-1} (k - i)! * a_i

which the enumeration must reproduce.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cache
from math import factorial

# Letter codes; the integer order is the lexicographic order used throughout.
LETTER_A, LETTER_A_INV, LETTER_B, LETTER_B_INV = range(4)
INVERSE_LETTER = (LETTER_A_INV, LETTER_A, LETTER_B_INV, LETTER_B)
_LETTER_CHARS = "aAbB"  # uppercase marks the inverse of a generator

MAX_INDEX = 7  # desk-scale cap for enumeration

BASEPOINT = 0


def _inverse_permutation(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, image in enumerate(perm):
        inv[image] = i
    return tuple(inv)


def _validate_permutation(perm, degree: int, name: str) -> None:
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise ValueError(f"{name}={perm!r} is not a permutation of 0..{degree - 1}")


def step_tables(perm_a: tuple[int, ...], perm_b: tuple[int, ...]):
    """Images of every vertex under the four letters, in letter order."""
    return (perm_a, _inverse_permutation(perm_a), perm_b, _inverse_permutation(perm_b))


def _bfs_relabel(
    degree: int, perm_a: tuple[int, ...], perm_b: tuple[int, ...], start: int = BASEPOINT
) -> tuple[tuple[int, ...], tuple[int, ...], list[int]]:
    """Relabel by breadth-first discovery order from `start`.

    Returns the relabeled permutation pair plus the discovery order (new
    label -> old label).  Requires the pair to act transitively.
    """
    steps = step_tables(perm_a, perm_b)
    label = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for letter in range(4):
            image = steps[letter][v]
            if image not in label:
                label[image] = len(order)
                order.append(image)
    if len(order) != degree:
        raise ValueError("the permutation pair does not act transitively")
    new_a = tuple(label[perm_a[order[j]]] for j in range(degree))
    new_b = tuple(label[perm_b[order[j]]] for j in range(degree))
    return new_a, new_b, order


@dataclass(frozen=True, eq=False)
class SubgroupTable:
    """Coset table of a finite-index subgroup; equality is subgroup equality."""

    degree: int
    perm_a: tuple[int, ...]
    perm_b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm_a", tuple(self.perm_a))
        object.__setattr__(self, "perm_b", tuple(self.perm_b))
        _validate_permutation(self.perm_a, self.degree, "perm_a")
        _validate_permutation(self.perm_b, self.degree, "perm_b")
        # Transitivity check; also caches nothing yet.
        _bfs_relabel(self.degree, self.perm_a, self.perm_b)
        object.__setattr__(self, "_canonical_key", None)

    @property
    def basepoint(self) -> int:
        return BASEPOINT

    def canonical_key(self) -> tuple:
        key = self._canonical_key
        if key is None:
            new_a, new_b, _ = _bfs_relabel(self.degree, self.perm_a, self.perm_b)
            key = (self.degree, new_a, new_b)
            object.__setattr__(self, "_canonical_key", key)
        return key

    def canonical(self) -> "SubgroupTable":
        degree, new_a, new_b = self.canonical_key()
        return SubgroupTable(degree, new_a, new_b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubgroupTable):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())


def enumerate_subgroups(k: int) -> list[SubgroupTable]:
    """All index-k subgroups, each as its canonical table, in search order.

    Backtracking over coset tables: the next undefined slot in scan order
    (coset ascending; letters a, a^-1, b, b^-1) is filled either with an
    existing coset lacking the matching inverse edge or with the next unused
    label.  Every completed table with exactly k cosets is canonical, and
    each subgroup appears exactly once.
    """
    if not 1 <= k <= MAX_INDEX:
        raise ValueError(f"index must lie in 1..{MAX_INDEX}, got {k}")
    forward_a = [-1] * k
    backward_a = [-1] * k
    forward_b = [-1] * k
    backward_b = [-1] * k
    # Column order realizes the letter order a, a^-1, b, b^-1.
    columns = (forward_a, backward_a, forward_b, backward_b)
    partners = (backward_a, forward_a, backward_b, forward_b)
    tables: list[SubgroupTable] = []

    def fill(slot: int, used: int) -> None:
        while slot < 4 * used and columns[slot % 4][slot // 4] != -1:
            slot += 1
        if slot == 4 * used:
            # Table closed on `used` cosets; only exact index k is kept.
            if used == k:
                tables.append(SubgroupTable(k, tuple(forward_a), tuple(forward_b)))
            return
        vertex, column = slot // 4, slot % 4
        col, partner = columns[column], partners[column]
        for target in range(used):
            if partner[target] == -1:
                col[vertex] = target
                partner[target] = vertex
                fill(slot + 1, used)
                col[vertex] = -1
                partner[target] = -1
        if used < k:
            target = used
            col[vertex] = target
            partner[target] = vertex
            fill(slot + 1, used + 1)
            col[vertex] = -1
            partner[target] = -1

    fill(0, 1)
    return tables


@cache
def hall_count(k: int) -> int:
    """Number of index-k subgroups of the rank-2 free group (Hall's recursion)."""
    if k < 1:
        raise ValueError(f"index must be positive, got {k}")
    total = k * factorial(k)
    for i in range(1, k):
        total -= factorial(k - i) * hall_count(i)
    return total


@dataclass(frozen=True)
class Word:
    """A word in the generators; letters are codes in {0: a, 1: a^-1, 2: b, 3: b^-1}."""

    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if any(letter not in (0, 1, 2, 3) for letter in self.letters):
            raise ValueError(f"invalid letter codes in {self.letters!r}")

    @classmethod
    def from_string(cls, text: str) -> "Word":
        """Parse compact notation: 'aB' is a * b^-1; 'e' or '' is the identity."""
        if text in ("", "e"):
            return cls(())
        try:
            return cls(tuple(_LETTER_CHARS.index(ch) for ch in text))
        except ValueError:
            raise ValueError(f"cannot parse word {text!r}; use letters from 'aAbB'")

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return "".join(_LETTER_CHARS[letter] for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)


def free_reduce(word: Word) -> Word:
    """Delete adjacent inverse pairs until none remain."""
    stack: list[int] = []
    for letter in word.letters:
        if stack and stack[-1] == INVERSE_LETTER[letter]:
            stack.pop()
        else:
            stack.append(letter)
    return Word(tuple(stack))


def trace_vertex(table: SubgroupTable, word: Word, start: int | None = None) -> int:
    """Endpoint of the path reading `word` from `start` (default: basepoint)."""
    steps = step_tables(table.perm_a, table.perm_b)
    v = table.basepoint if start is None else start
    for letter in word.letters:
        v = steps[letter][v]
    return v


def word_membership(table: SubgroupTable, word: Word) -> bool:
    """Whether the word lies in the subgroup: its path returns to the basepoint."""
    return trace_vertex(table, word) == table.basepoint


def distinguishing_word(h1: SubgroupTable, h2: SubgroupTable) -> Word | None:
    """Shortest word lying in exactly one of the two subgroups; None iff equal.

    Breadth-first search on the product of the two coset actions from the
    basepoint pair, expanding letters in the order a, a^-1, b, b^-1, so the
    first hit is the lexicographically least among shortest separators.  The
    membership asymmetry of the result is asserted before returning.
    """
    steps1 = step_tables(h1.perm_a, h1.perm_b)
    steps2 = step_tables(h2.perm_a, h2.perm_b)
    start = (h1.basepoint, h2.basepoint)
    parents: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for letter in range(4):
            image = (steps1[letter][state[0]], steps2[letter][state[1]])
            if image in parents:
                continue
            parents[image] = (state, letter)
            if (image[0] == h1.basepoint) != (image[1] == h2.basepoint):
                letters: list[int] = []
                cursor = image
                while parents[cursor] is not None:
                    cursor, step = parents[cursor]
                    letters.append(step)
                word = Word(tuple(reversed(letters)))
                if word_membership(h1, word) == word_membership(h2, word):
                    raise RuntimeError(f"separator {word} failed its membership check")
                return word
            queue.append(image)
    return None
