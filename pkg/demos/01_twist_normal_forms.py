"""Permutations as twist diagrams and their unique normal forms.

Every diagram built from crossings computes a permutation; rewriting with
the involution and Yang-Baxter rules always lands on the same canonical
staircase diagram, which can also be built directly by the ladder
recursion.
"""
import itertools
import random

from proofdiag.diagram import Diagram, TwistGate, compose_seq, gate_count, identity
from proofdiag.perm import (
    Permutation,
    STRAND,
    canonical_perm_diagram,
    diagram_to_perm,
    ladder,
)
from proofdiag.polygraph import normalize, polygraph

rng = random.Random(0)
S = polygraph("S")

print("The permutation polygraph has rules:", [r.name for r in S.rules])
print()

# a ladder carries one wire across the others
lad = ladder("right", 4, 4)
print("right ladder on 4 wires computes", diagram_to_perm(lad))
print(lad)
print()

# a random tangle of crossings
n = 4
d = identity((STRAND,) * n)
for _ in range(7):
    p = rng.randint(0, n - 2)
    layer = list(d.output)
    layer[p : p + 2] = [TwistGate(d.output[p], d.output[p + 1])]
    d = compose_seq(d, Diagram(d.output, (tuple(layer),)))

sigma = diagram_to_perm(d)
print(f"random tangle with {gate_count(d)} crossings computes {sigma}")
nf, trace = normalize(S, d)
print("rewriting steps:", [r for r, _ in trace.steps])
print("normal form:", nf)
print("equals the canonical diagram of the permutation:", nf == canonical_perm_diagram(sigma))
print()

# one canonical representative per permutation
forms = {canonical_perm_diagram(Permutation(p)) for p in itertools.permutations(range(1, n + 1))}
print(f"S_{n} has {len(forms)} distinct canonical diagrams (= {n}! )")
