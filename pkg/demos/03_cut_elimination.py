"""Cut elimination by diagram rewriting.

Cuts disappear under the semantics polygraph; the 3^degree weight certifies
termination: it is untouched by the structural rules and strictly drops at
every cut rule.
"""
from proofdiag.formula import atom, negate
from proofdiag.diagram import gate_count, interchange_canonical_form
from proofdiag.diagramio import diagram_text
from proofdiag.interp import cut_weight
from proofdiag.perm import Permutation
from proofdiag.polygraph import polygraph
from proofdiag.sequent import ax, cut, derivation_str, exchange, one, par, tensor
from proofdiag.translate import represent, sequentialize
from proofdiag.oracle import eliminate_cuts

a = atom("a")
sw = Permutation((2, 1))

# a tensor cut against a par
left = exchange(
    tensor(exchange(ax(a), sw), ax(negate(a))), Permutation((1, 3, 2))
)
d = cut(left, par(ax(a), 1))
print("derivation with a cut:", derivation_str(d))

phi = represent(d)
print("cut weight before:", cut_weight(phi))

nf, trace = eliminate_cuts(phi)
sem = polygraph("Sem")
cur = interchange_canonical_form(phi)
w = cut_weight(cur)
for rule, site in trace.steps:
    cur = sem.rule(rule).apply(cur, site)
    print(f"  {rule:<18} weight {w} -> {cut_weight(cur)}")
    w = cut_weight(cur)

print("cut and B gates left:", gate_count(nf, {"cut", "big"}))
print()
print(diagram_text(nf))
print("cut-free sequentialization:", derivation_str(sequentialize(nf)))
