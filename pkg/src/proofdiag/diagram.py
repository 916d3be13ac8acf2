"""String diagrams over formula-labelled wires with two control colours.

A diagram is a chain of layers read top to bottom.  Each layer is a tuple of
slots; a slot is either a wire label (an identity wire) or a gate.  The input
word of every layer must equal the output word of the layer above, and the
first layer's input word must equal the diagram's input.

Wire labels are MLL formulas plus the two non-twisting control colours L and
R.  Gates carry their formula parameters and, where the two signatures
differ, a ``controlled`` flag choosing between the plain arity and the
control-string arity (tensor, axiom, cut and the one-gate differ; par, twist
and bottom do not).

Equality of diagrams is structural.  Interchange-equal diagrams are
identified by ``interchange_canonical_form``, which hoists every gate to the
earliest layer its wires permit, ties broken left to right; the result is the
Foata normal form of the underlying trace and is idempotent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

from .formula import Formula, FVar, NVar, Tensor, Par, negate, is_concrete, show


class DiagramError(ValueError):
    pass


class BoundaryMismatch(DiagramError):
    def __init__(self, position: int, expected, got):
        self.position = position
        self.expected = expected
        self.got = got
        super().__init__(
            f"boundary mismatch at position {position}: "
            f"expected {label_str(expected) if expected is not None else '<end>'}, "
            f"got {label_str(got) if got is not None else '<end>'}"
        )


@dataclass(frozen=True)
class Ctrl:
    """Control wire colour; L and R bracket every sequent region."""

    side: str  # 'L' or 'R'


L = Ctrl("L")
R = Ctrl("R")

Label = Union[Formula, Ctrl]
Word = tuple  # tuple[Label, ...]


def label_str(lab: Label) -> str:
    if isinstance(lab, Ctrl):
        return lab.side
    return show(lab)


def word_str(word: Word) -> str:
    return ",".join(label_str(l) for l in word) if word else "-"


def is_formula_label(lab: Label) -> bool:
    return not isinstance(lab, Ctrl)


# ---------------------------------------------------------------------------
# Gate types


@dataclass(frozen=True)
class TwistGate:
    left: Formula
    right: Formula
    family = "twist"

    @property
    def inputs(self) -> Word:
        return (self.left, self.right)

    @property
    def outputs(self) -> Word:
        return (self.right, self.left)


@dataclass(frozen=True)
class ParGate:
    left: Formula
    right: Formula
    family = "par"

    @property
    def inputs(self) -> Word:
        return (self.left, self.right)

    @property
    def outputs(self) -> Word:
        return (Par(self.left, self.right),)


@dataclass(frozen=True)
class TensorGate:
    left: Formula
    right: Formula
    controlled: bool = True
    family = "tensor"

    @property
    def inputs(self) -> Word:
        if self.controlled:
            return (self.left, R, L, self.right)
        return (self.left, self.right)

    @property
    def outputs(self) -> Word:
        return (Tensor(self.left, self.right),)


@dataclass(frozen=True)
class AxGate:
    formula: Formula
    controlled: bool = True
    family = "ax"

    @property
    def inputs(self) -> Word:
        return ()

    @property
    def outputs(self) -> Word:
        if self.controlled:
            return (L, self.formula, negate(self.formula), R)
        return (self.formula, negate(self.formula))


@dataclass(frozen=True)
class CutGate:
    formula: Formula
    controlled: bool = True
    family = "cut"

    @property
    def inputs(self) -> Word:
        if self.controlled:
            return (self.formula, R, L, negate(self.formula))
        return (self.formula, negate(self.formula))

    @property
    def outputs(self) -> Word:
        return ()


@dataclass(frozen=True)
class OneGate:
    controlled: bool = True
    family = "one"

    @property
    def inputs(self) -> Word:
        return ()

    @property
    def outputs(self) -> Word:
        from .formula import ONE

        if self.controlled:
            return (L, ONE, R)
        return (ONE,)


@dataclass(frozen=True)
class BotGate:
    family = "bot"

    @property
    def inputs(self) -> Word:
        return ()

    @property
    def outputs(self) -> Word:
        from .formula import BOT

        return (BOT,)


@dataclass(frozen=True)
class BigGate:
    """Big twisting operator swapping two bracketed sheafs of wires.

    The sheaf words may contain interior R,L pairs, so whole groups of
    sequent regions can be exchanged at once.
    """

    left_word: Word
    right_word: Word
    family = "big"

    @property
    def inputs(self) -> Word:
        return (L,) + tuple(self.left_word) + (R, L) + tuple(self.right_word) + (R,)

    @property
    def outputs(self) -> Word:
        return (L,) + tuple(self.right_word) + (R, L) + tuple(self.left_word) + (R,)


Gate = Union[TwistGate, ParGate, TensorGate, AxGate, CutGate, OneGate, BotGate, BigGate]

GATE_FAMILIES = ("twist", "par", "tensor", "ax", "cut", "one", "bot", "big")


def is_gate(slot) -> bool:
    return hasattr(slot, "family")


def gate_str(g: Gate) -> str:
    if isinstance(g, TwistGate):
        return f"twist({label_str(g.left)},{label_str(g.right)})"
    if isinstance(g, ParGate):
        return f"par({label_str(g.left)},{label_str(g.right)})"
    if isinstance(g, TensorGate):
        tag = "" if g.controlled else "!"
        return f"tensor{tag}({label_str(g.left)},{label_str(g.right)})"
    if isinstance(g, AxGate):
        tag = "" if g.controlled else "!"
        return f"ax{tag}({label_str(g.formula)})"
    if isinstance(g, CutGate):
        tag = "" if g.controlled else "!"
        return f"cut{tag}({label_str(g.formula)})"
    if isinstance(g, OneGate):
        return "one" if g.controlled else "one!"
    if isinstance(g, BotGate):
        return "bot"
    if isinstance(g, BigGate):
        return f"big([{word_str(g.left_word)}],[{word_str(g.right_word)}])"
    raise TypeError(g)


# ---------------------------------------------------------------------------
# Diagrams

Layer = tuple  # tuple of slots; slot = Label | Gate
Slot = Union[Label, Gate]


def slot_inputs(slot: Slot) -> Word:
    return slot.inputs if is_gate(slot) else (slot,)


def slot_outputs(slot: Slot) -> Word:
    return slot.outputs if is_gate(slot) else (slot,)


def layer_inputs(layer: Layer) -> Word:
    out = []
    for s in layer:
        out.extend(slot_inputs(s))
    return tuple(out)


def layer_outputs(layer: Layer) -> Word:
    out = []
    for s in layer:
        out.extend(slot_outputs(s))
    return tuple(out)


class Diagram:
    """Immutable layered string diagram."""

    __slots__ = ("input", "layers", "output", "_hash")

    def __init__(self, input_word: Iterable[Label], layers: Iterable[Layer] = ()):
        word = tuple(input_word)
        lys = tuple(tuple(layer) for layer in layers)
        cur = word
        for li, layer in enumerate(lys):
            need = layer_inputs(layer)
            if need != cur:
                k = 0
                while k < min(len(need), len(cur)) and need[k] == cur[k]:
                    k += 1
                exp = cur[k] if k < len(cur) else None
                got = need[k] if k < len(need) else None
                raise BoundaryMismatch(k, exp, got)
            cur = layer_outputs(layer)
        object.__setattr__(self, "input", word)
        object.__setattr__(self, "layers", lys)
        object.__setattr__(self, "output", cur)
        object.__setattr__(self, "_hash", hash((word, lys)))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Diagram is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Diagram)
            and self._hash == other._hash
            and self.input == other.input
            and self.layers == other.layers
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(
            "[" + " ".join(gate_str(s) if is_gate(s) else label_str(s) for s in layer) + "]"
            for layer in self.layers
        )
        return f"Diagram({word_str(self.input)} => {word_str(self.output)} : {body})"

    def gates(self) -> Iterator[tuple[int, int, Gate]]:
        """Yield (layer index, wire offset, gate) for every gate occurrence."""
        for li, layer in enumerate(self.layers):
            pos = 0
            for s in layer:
                if is_gate(s):
                    yield li, pos, s
                pos += len(slot_inputs(s))

    def gate_list(self) -> list[Gate]:
        return [g for _, _, g in self.gates()]

    def is_concrete(self) -> bool:
        for lab in self.input:
            if is_formula_label(lab) and not is_concrete(lab):
                return False
        for _, _, g in self.gates():
            for lab in tuple(g.inputs) + tuple(g.outputs):
                if is_formula_label(lab) and not is_concrete(lab):
                    return False
        return True


def identity(word: Iterable[Label]) -> Diagram:
    return Diagram(tuple(word), ())


EMPTY = identity(())


def single(gate: Gate) -> Diagram:
    return Diagram(gate.inputs, ((gate,),))


def gate_count(phi: Diagram, families: Optional[Iterable[str]] = None) -> int:
    """Number of gates, optionally restricted to a set of gate families."""
    fams = set(families) if families is not None else None
    n = 0
    for _, _, g in phi.gates():
        if fams is None or g.family in fams:
            n += 1
    return n


def compose_seq(phi: Diagram, psi: Diagram) -> Diagram:
    """Stack psi below phi; boundary words must agree label-for-label."""
    if phi.output != psi.input:
        a, b = phi.output, psi.input
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        raise BoundaryMismatch(
            k, a[k] if k < len(a) else None, b[k] if k < len(b) else None
        )
    return Diagram(phi.input, phi.layers + psi.layers)


def compose_par(phi: Diagram, psi: Diagram) -> Diagram:
    """Place psi to the right of phi; always defined.

    The shorter side is padded with identity layers at the bottom so layer
    counts line up.
    """
    n = max(len(phi.layers), len(psi.layers))
    layers = []
    for i in range(n):
        left = phi.layers[i] if i < len(phi.layers) else tuple(phi.output)
        right = psi.layers[i] if i < len(psi.layers) else tuple(psi.output)
        layers.append(left + right)
    return Diagram(phi.input + psi.input, layers)


def parallel(*parts: Diagram) -> Diagram:
    out = EMPTY
    for p in parts:
        out = compose_par(out, p)
    return out


def build(input_word: Iterable[Label], *layers: Iterable[Slot]) -> Diagram:
    return Diagram(tuple(input_word), tuple(tuple(l) for l in layers))


# ---------------------------------------------------------------------------
# Interchange canonical form

def _try_hoist(grid: list[list[Slot]], li: int, si: int) -> bool:
    """Move the gate at grid[li][si] into layer li-1 if its wires permit."""
    gate = grid[li][si]
    above = grid[li - 1]
    # Input position range of the gate within layer li's input word.
    p = 0
    for s in grid[li][:si]:
        p += len(slot_inputs(s))
    k = len(slot_inputs(gate))
    # Map output positions of `above` to slots.
    bounds = []  # (start, end, slot index) per slot of `above`
    q = 0
    for idx, s in enumerate(above):
        w = len(slot_outputs(s))
        bounds.append((q, q + w, idx))
        q += w
    if k == 0:
        # Insertion point p must fall on a slot boundary of `above`.
        at = None
        for start, end, idx in bounds:
            if start == p:
                at = idx
                break
        if at is None:
            if p == q:
                at = len(above)
            else:
                return False  # inside some gate's output block
    else:
        touched = [idx for start, end, idx in bounds if start < p + k and end > p]
        if not touched:
            return False
        for idx in touched:
            if is_gate(above[idx]):
                return False
        # Slots must be contiguous (a zero-output gate in between blocks hoisting).
        if touched != list(range(touched[0], touched[0] + len(touched))):
            return False
        if len(touched) != k:
            return False
        at = touched[0]
    # Perform the move.
    if k == 0:
        above[at:at] = [gate]
    else:
        above[at : at + k] = [gate]
    grid[li][si : si + 1] = list(slot_outputs(gate))
    return True


def interchange_canonical_form(phi: Diagram) -> Diagram:
    """Hoist every gate to its earliest layer; drop identity layers.

    The result is a canonical representative of the interchange class:
    idempotent, boundary- and gate-multiset-preserving.
    """
    grid = [list(layer) for layer in phi.layers]
    changed = True
    while changed:
        changed = False
        for li in range(1, len(grid)):
            si = 0
            while si < len(grid[li]):
                if is_gate(grid[li][si]) and _try_hoist(grid, li, si):
                    changed = True
                else:
                    si += 1
    layers = [tuple(layer) for layer in grid if any(is_gate(s) for s in layer)]
    return Diagram(phi.input, layers)


canonical = interchange_canonical_form


# ---------------------------------------------------------------------------
# Whisker-op view: one gate at a time, with explicit positions and tokens.


@dataclass
class Op:
    gate: Gate
    pos: int  # offset in the live word where the gate's inputs start
    in_tokens: tuple
    out_tokens: tuple


class OpSeq:
    """A diagram as a sequence of single-gate firings over a token word.

    Tokens are integers; ``producer[t]``/``consumer[t]`` give the op index (or
    None for boundary).  Used by the matching engine to reorder independent
    firings and splice rule instances.
    """

    def __init__(self, input_word: Word):
        self.input_word = tuple(input_word)
        self.ops: list[Op] = []
        self._next = len(self.input_word)
        self.in_tokens = tuple(range(len(self.input_word)))
        self.labels = {t: lab for t, lab in zip(self.in_tokens, self.input_word)}
        self.producer: dict = {t: None for t in self.in_tokens}
        self.consumer: dict = {}
        self.word: list = list(self.in_tokens)

    @staticmethod
    def of(phi: Diagram) -> "OpSeq":
        seq = OpSeq(phi.input)
        for layer in phi.layers:
            cur = 0
            for s in layer:
                if is_gate(s):
                    seq.fire_at(s, cur)
                    cur += len(slot_outputs(s))
                else:
                    cur += 1
        return seq

    def fire_at(self, gate: Gate, pos: int) -> tuple:
        """Fire a gate whose inputs sit at [pos, pos+k) of the live word."""
        k = len(slot_inputs(gate))
        if pos < 0 or pos + k > len(self.word):
            raise DiagramError(f"gate {gate_str(gate)} out of range at {pos}")
        toks = tuple(self.word[pos : pos + k])
        for t, lab in zip(toks, slot_inputs(gate)):
            if self.labels[t] != lab:
                raise BoundaryMismatch(pos, self.labels[t], lab)
        outs = tuple(range(self._next, self._next + len(slot_outputs(gate))))
        self._next += len(outs)
        idx = len(self.ops)
        for t, lab in zip(outs, slot_outputs(gate)):
            self.labels[t] = lab
            self.producer[t] = idx
        for t in toks:
            self.consumer[t] = idx
        self.ops.append(Op(gate, pos, toks, outs))
        self.word[pos : pos + k] = list(outs)
        return outs

    def to_diagram(self) -> Diagram:
        word = list(self.in_tokens)
        layers = []
        for op in self.ops:
            layer: list[Slot] = [self.labels[t] for t in word]
            k = len(op.in_tokens)
            if tuple(word[op.pos : op.pos + k]) != tuple(op.in_tokens):
                raise DiagramError("op replay mismatch")
            layer[op.pos : op.pos + k] = [op.gate]
            layers.append(tuple(layer))
            word[op.pos : op.pos + k] = list(op.out_tokens)
        return Diagram(self.input_word, layers)


def swap_adjacent(ops: list[Op], i: int) -> Optional[tuple[Op, Op]]:
    """If ops[i] and ops[i+1] are independent, return them swapped.

    Returns the replacement (ops[i]', ops[i+1]') with positions adjusted, or
    None when the two firings do not commute.
    """
    a, b = ops[i], ops[i + 1]
    ia, oa = len(a.in_tokens), len(a.out_tokens)
    ib = len(b.in_tokens)
    if set(b.in_tokens) & set(a.out_tokens):
        return None
    if ib == 0:
        # b is 0-ary: its gap must exist before a fires.
        if a.pos < b.pos < a.pos + oa:
            return None
        new_bpos = b.pos if b.pos <= a.pos else b.pos - oa + ia
    else:
        if b.pos + ib <= a.pos:
            new_bpos = b.pos
        elif b.pos >= a.pos + oa:
            new_bpos = b.pos - oa + ia
        else:
            return None
    if ib == 0 and b.pos <= a.pos:
        new_apos = a.pos + len(b.out_tokens)
    elif ib > 0 and b.pos + ib <= a.pos:
        new_apos = a.pos - ib + len(b.out_tokens)
    else:
        new_apos = a.pos
    return (Op(b.gate, new_bpos, b.in_tokens, b.out_tokens), Op(a.gate, new_apos, a.in_tokens, a.out_tokens))
