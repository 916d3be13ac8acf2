"""The denotational equivalence oracle.

The semantics rewriting terminates but is not confluent, so denotations are
compared by a bidirectional search over the unoriented congruence, not by
normal forms. Cut steps never change a denotation; genuinely different
axiom linkings are never identified.
"""
from proofdiag.formula import atom, negate
from proofdiag.perm import Permutation
from proofdiag.polygraph import apply_once, normalize, polygraph
from proofdiag.sequent import ax, cut, cut_step, derivation_str, exchange, one, par, bot, tensor
from proofdiag.oracle import denotation, equivalent

a = atom("a")
sw = Permutation((2, 1))

# property 1: cut steps preserve the denotation
d = cut(bot(one()), one())
stepped = cut_step(d, ())
print("cut step:", derivation_str(d), "->", derivation_str(stepped))
print("equivalent:", equivalent(d, stepped, mode="sem").verdict)
print()

# property 2: different axiom linkings are kept apart
core = tensor(exchange(ax(a), sw), ax(a))
other = exchange(core, Permutation((3, 2, 1)))
print("two linkings of |-", derivation_str(core), "vs", derivation_str(other))
print("verdict (must not be yes):", equivalent(core, other, bound=3, node_budget=250).verdict)
print()

# denotations come with their traces; the caveat is part of the bundle
den = denotation(d)
print("denotation normal form:", den.normal_form)
print("note:", den.note)
print()

# the non-confluent critical peak: normal forms genuinely differ
from proofdiag.formula import Tensor
from proofdiag.diagram import Diagram, R, L, TensorGate, TwistGate, interchange_canonical_form

b, c, dd = atom("b"), atom("c"), atom("d")
peak = interchange_canonical_form(
    Diagram(
        (a, b, c, R, L, dd),
        (
            (TwistGate(a, b), c, R, L, dd),
            (b, TwistGate(a, c), R, L, dd),
            (TwistGate(b, c), TensorGate(a, dd, True)),
            (c, TwistGate(b, Tensor(a, dd))),
            (TwistGate(c, Tensor(a, dd)), b),
        ),
    )
)
sem = polygraph("Sem")
yb = sem.rule("yang-baxter")
s1, s2 = yb.find(peak)
n1, _ = normalize(sem, yb.apply(peak, s1))
n2, _ = normalize(sem, yb.apply(peak, s2))
print("critical peak reducts are distinct normal forms:", n1 != n2)
