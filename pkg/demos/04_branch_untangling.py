"""Crossing splits and big twisting operators.

Two derivations that differ by reordering the branches of two tensors get
different diagrams: one of them contains a crossing split. A B-gate
introduction swaps the two branch blocks, the untangle relations drive the
branch gates through it one at a time, and the B-gate disappears - landing
exactly on the other diagram's normal form.
"""
from proofdiag.formula import atom
from proofdiag.bigtwist import crossing_splits_of
from proofdiag.diagramio import diagram_text
from proofdiag.perm import Permutation
from proofdiag.polygraph import normalize, polygraph
from proofdiag.sequent import ax, derivation_str, exchange, one, tensor
from proofdiag.translate import represent
from proofdiag.oracle import equivalent, untangle

a = atom("a")
sw = Permutation((2, 1))

d_left = exchange(tensor(exchange(tensor(ax(a), one()), sw), one()), sw)
d_right = tensor(exchange(tensor(exchange(ax(a), sw), one()), sw), one())
print("left-first build: ", derivation_str(d_left))
print("right-first build:", derivation_str(d_right))
print()

p_left, p_right = represent(d_left), represent(d_right)
print("crossing splits, left-first build: ", len(crossing_splits_of(p_left)))
print("crossing splits, right-first build:", len(crossing_splits_of(p_right)))
print()

out, trace = untangle(p_right)
print("untangle steps:", [r for r, _ in trace.steps])
print("splits after:", len(crossing_splits_of(out)))
print()

big = polygraph("MLL_big")
n_left, _ = normalize(big, p_left)
n_right, tr = normalize(big, p_right)
print("full normalization of the right-first diagram:", [r for r, _ in tr.steps])
print("the two builds now coincide:", n_left == n_right)
print()
print(diagram_text(n_left))

cert = equivalent(d_left, d_right, mode="sim")
print("equivalence oracle verdict:", cert.verdict)
