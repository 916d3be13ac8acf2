"""Property-based checks over the rewrite systems."""
import random

from hypothesis import given, settings, strategies as st

from proofdiag.formula import atom, negate
from proofdiag.diagram import (
    Diagram,
    TwistGate,
    compose_seq,
    gate_count,
    identity,
    interchange_canonical_form as canon,
)
from proofdiag.perm import STRAND, canonical_perm_diagram, diagram_to_perm
from proofdiag.polygraph import apply_once, normalize, polygraph
from proofdiag.sequent import check_derivation, rule_count, sim_neighbors
from proofdiag.translate import represent, sequentialize

from conftest import random_cutfree, random_with_cut

S = polygraph("S")
CTRL = polygraph("MLL_ctrl")


@st.composite
def twist_diagrams(draw):
    n = draw(st.integers(2, 5))
    k = draw(st.integers(0, 9))
    positions = draw(st.lists(st.integers(0, n - 2), min_size=k, max_size=k))
    d = identity((STRAND,) * n)
    for p in positions:
        word = d.output
        layer = list(word)
        layer[p : p + 2] = [TwistGate(word[p], word[p + 1])]
        d = compose_seq(d, Diagram(word, (tuple(layer),)))
    return d


@given(twist_diagrams())
@settings(max_examples=60, deadline=None)
def test_normal_form_is_canonical_diagram_of_the_permutation(d):
    nf, _ = normalize(S, d)
    assert nf == canonical_perm_diagram(diagram_to_perm(d))


@given(twist_diagrams())
@settings(max_examples=40, deadline=None)
def test_single_steps_preserve_boundary_and_permutation(d):
    phi = canon(d)
    res = apply_once(S, phi)
    if res is None:
        return
    nxt, rule, site = res
    assert nxt.input == phi.input and nxt.output == phi.output
    assert diagram_to_perm(nxt).images == diagram_to_perm(phi).images


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_random_derivations_round_trip_and_represent_counts(seed):
    rng = random.Random(seed)
    d = random_cutfree(rng, rng.randint(1, 6))
    phi = represent(d)
    fams = {"ax", "one", "bot", "par", "tensor", "cut"}
    assert gate_count(phi, fams) == rule_count(d, include_exchange=False)
    rt = sequentialize(phi)
    assert check_derivation(rt) == check_derivation(d)


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_random_cut_derivations_eliminate(seed):
    from proofdiag.oracle import eliminate_cuts

    rng = random.Random(seed)
    d = random_with_cut(rng, rng.randint(2, 5))
    nf, _ = eliminate_cuts(represent(d))
    assert gate_count(nf, {"cut", "big"}) == 0


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_neighbors_are_valid_and_symmetric(seed):
    rng = random.Random(seed)
    d = random_cutfree(rng, rng.randint(1, 5))
    for n in sim_neighbors(d)[:4]:
        assert check_derivation(n) == d.conclusion
        assert d in sim_neighbors(n)
