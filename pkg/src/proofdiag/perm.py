"""Permutations as twist diagrams.

Conventions:

- A permutation is stored in one-line notation ``[s(1), ..., s(n)]``,
  1-based: the wire entering at position i leaves at position s(i).
- Sequential composition of diagrams maps to function composition the same
  way: stacking psi below phi gives ``perm(psi) . perm(phi)``.
- ``ladder('left', n, k)`` realizes the cycle (1,k,k-1,...,2) on the first k
  of n wires (the leftmost wire climbs to position k); ``ladder('right', n,
  k)`` realizes (k,1,2,...,k-1).

The canonical diagram of a permutation is built by the recursion
``lad_left(s(1)) . (id_1 * canonical(erase_first(s)))`` and is irreducible
under the permutation polygraph's two rules.
"""
from __future__ import annotations

from dataclasses import dataclass

from .formula import Atom
from .diagram import (
    Diagram,
    DiagramError,
    TwistGate,
    compose_par,
    compose_seq,
    identity,
    interchange_canonical_form,
    is_gate,
    slot_inputs,
)


class NonTwistGate(DiagramError):
    pass


class BadIndex(DiagramError):
    pass


#: wire label used for plain (monochrome) permutation diagrams
STRAND = Atom("~")


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise BadIndex(f"not a permutation: {self.images}")

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n: int, k: int) -> "Permutation":
        """The adjacent transposition (k, k+1) in S_n."""
        if not 1 <= k < n:
            raise BadIndex(f"transposition index {k} out of range for n={n}")
        images = list(range(1, n + 1))
        images[k - 1], images[k] = images[k], images[k - 1]
        return Permutation(tuple(images))

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        if len(self) != len(other):
            raise BadIndex("size mismatch")
        return Permutation(tuple(self(other(i)) for i in range(1, len(self) + 1)))

    def inverse(self) -> "Permutation":
        images = [0] * len(self)
        for i, v in enumerate(self.images, start=1):
            images[v - 1] = i
        return Permutation(tuple(images))

    def apply(self, word: tuple) -> tuple:
        """Reorder a word: output position s(i) carries input i's entry."""
        out = [None] * len(self)
        for i, v in enumerate(self.images, start=1):
            out[v - 1] = word[i - 1]
        return tuple(out)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.images) + "]"

    @staticmethod
    def parse(text: str) -> "Permutation":
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise BadIndex(f"expected one-line notation [..]: {text!r}")
        body = text[1:-1].strip()
        if not body:
            return Permutation(())
        return Permutation(tuple(int(p) for p in body.split(",")))


def _plain(n: int) -> tuple:
    return (STRAND,) * n


def ladder_left_word(word: tuple) -> Diagram:
    """Staircase carrying the first wire of ``word`` to the last position."""
    m = len(word)
    if m <= 1:
        return identity(word)
    layers = []
    cur = list(word)
    for j in range(m - 1):
        layer = cur[:j] + [TwistGate(cur[j], cur[j + 1])] + cur[j + 2 :]
        layers.append(tuple(layer))
        cur[j], cur[j + 1] = cur[j + 1], cur[j]
    return Diagram(tuple(word), layers)


def ladder_right_word(word: tuple) -> Diagram:
    """Staircase carrying the last wire of ``word`` to the first position."""
    m = len(word)
    if m <= 1:
        return identity(word)
    layers = []
    cur = list(word)
    for j in range(m - 2, -1, -1):
        layer = cur[:j] + [TwistGate(cur[j], cur[j + 1])] + cur[j + 2 :]
        layers.append(tuple(layer))
        cur[j], cur[j + 1] = cur[j + 1], cur[j]
    return Diagram(tuple(word), layers)


def ladder(side: str, n: int, k: int, word: tuple = None) -> Diagram:
    """Lad^side_k padded with identities to n wires."""
    if not 1 <= k <= n:
        raise BadIndex(f"ladder index k={k} out of range for n={n}")
    if word is None:
        word = _plain(n)
    if len(word) != n:
        raise BadIndex("word length disagrees with n")
    head, tail = tuple(word[:k]), tuple(word[k:])
    lad = ladder_left_word(head) if side == "left" else ladder_right_word(head)
    if side not in ("left", "right"):
        raise BadIndex(f"side must be left or right: {side!r}")
    return compose_par(lad, identity(tail))


def erase_first(sigma: Permutation) -> Permutation:
    """Remove s(1) from the image list, closing the gap.

    This is the bijection S_{n+1} -> S_n used by the canonical-diagram
    recursion; validated by the exhaustive round trip in the test suite.
    """
    k = sigma(1)
    images = []
    for i in range(2, len(sigma) + 1):
        v = sigma(i)
        images.append(v if v < k else v - 1)
    return Permutation(tuple(images))


def canonical_perm_diagram(sigma: Permutation, word: tuple = None) -> Diagram:
    """The unique irreducible twist diagram realizing sigma."""
    n = len(sigma)
    if word is None:
        word = _plain(n)
    if len(word) != n:
        raise BadIndex("word length disagrees with permutation size")
    if n <= 1:
        return identity(word)
    sub = canonical_perm_diagram(erase_first(sigma), tuple(word[1:]))
    top = compose_par(identity(word[:1]), sub)
    k = sigma(1)
    lad = compose_par(ladder_left_word(top.output[:k]), identity(top.output[k:]))
    return interchange_canonical_form(compose_seq(top, lad))


def diagram_to_perm(phi: Diagram) -> Permutation:
    """Interpret a twist-only diagram as the permutation it computes."""
    n = len(phi.input)
    positions = list(range(1, n + 1))  # positions[p] = input index at position p+1
    for layer in phi.layers:
        pos = 0
        for s in layer:
            if is_gate(s):
                if not isinstance(s, TwistGate):
                    raise NonTwistGate(f"non-twist gate in permutation diagram: {s}")
                positions[pos], positions[pos + 1] = positions[pos + 1], positions[pos]
                pos += 2
            else:
                pos += 1
    images = [0] * n
    for p, i in enumerate(positions, start=1):
        images[i - 1] = p
    return Permutation(tuple(images))


def perm_twist_count(sigma: Permutation) -> int:
    """Number of inversions = twists in the canonical diagram."""
    n = len(sigma)
    return sum(
        1
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if sigma(i) > sigma(j)
    )
