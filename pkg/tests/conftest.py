"""Shared fixtures: derivation corpus and random generators."""
from __future__ import annotations

import random

import pytest

from proofdiag.formula import Atom, Bot, One, Par, Tensor, atom, negate
from proofdiag.perm import Permutation
from proofdiag.sequent import (
    Derivation,
    ax,
    bot,
    check_derivation,
    cut,
    exchange,
    one,
    par,
    rule_count,
    tensor,
)

A = atom("a")
B = atom("b")


def random_formula(rng: random.Random, depth: int = 2):
    if depth <= 0 or rng.random() < 0.4:
        return rng.choice([A, B, negate(A), negate(B), One(), Bot()])
    l = random_formula(rng, depth - 1)
    r = random_formula(rng, depth - 1)
    return Tensor(l, r) if rng.random() < 0.5 else Par(l, r)


def random_exchange(rng: random.Random, d: Derivation) -> Derivation:
    n = len(d.conclusion)
    if n < 2:
        return d
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return exchange(d, Permutation(tuple(images)))


def random_cutfree(rng: random.Random, budget: int) -> Derivation:
    """A random valid derivation with at most `budget` non-exchange rules."""
    pool = [ax(A), ax(B), ax(negate(A)), one()]
    d = rng.choice(pool)
    used = 1
    while used < budget:
        roll = rng.random()
        if roll < 0.25 and len(d.conclusion) >= 2:
            p = rng.randint(1, len(d.conclusion) - 1)
            d = par(d, p)
        elif roll < 0.45:
            d = bot(d)
        elif roll < 0.75:
            other = rng.choice(pool)
            d = tensor(d, other) if rng.random() < 0.5 else tensor(other, d)
            used += 1
        else:
            d = random_exchange(rng, d)
        used += 1
    check_derivation(d)
    return d


def random_with_cut(rng: random.Random, budget: int) -> Derivation:
    d1 = random_cutfree(rng, max(1, budget - 2))
    f = d1.conclusion[-1]
    d = cut(d1, ax(negate(f)))
    check_derivation(d)
    return d


def _handmade() -> list[Derivation]:
    sw = Permutation((2, 1))
    out = [
        ax(A),
        one(),
        bot(one()),
        exchange(bot(one()), sw),
        par(ax(A)),
        par(bot(bot(one())), 2),
        tensor(ax(A), ax(B)),
        tensor(exchange(ax(A), sw), ax(negate(A))),
        cut(ax(A), ax(A)),
        cut(par(ax(A)), ax(Tensor(A, negate(A)))),
        cut(bot(one()), one()),
        cut(one(), exchange(bot(one()), sw)),
        # the paired tensor example built both ways
        exchange(tensor(exchange(tensor(ax(A), one()), sw), one()), sw),
        tensor(exchange(tensor(exchange(ax(A), sw), one()), sw), one()),
        # principal tensor/par cut
        cut(
            exchange(
                tensor(exchange(ax(A), sw), ax(negate(A))), Permutation((1, 3, 2))
            ),
            par(ax(A), 1),
        ),
        bot(bot(one())),
        par(exchange(par(bot(bot(one())), 1), sw)),
        tensor(one(), bot(one())),
        cut(
            tensor(one(), one()),
            par(exchange(bot(bot(one())), Permutation((3, 1, 2))), 1),
        ),
    ]
    for d in out:
        check_derivation(d)
    return out


@pytest.fixture(scope="session")
def corpus() -> list[Derivation]:
    rng = random.Random(20240817)
    out = _handmade()
    while len(out) < 40:
        out.append(random_cutfree(rng, rng.randint(1, 6)))
    while len(out) < 56:
        out.append(random_with_cut(rng, rng.randint(2, 6)))
    assert all(rule_count(d, include_exchange=False) <= 8 for d in out)
    return out


@pytest.fixture(scope="session")
def cut_corpus(corpus) -> list[Derivation]:
    from proofdiag.sequent import CutR, subderivations

    return [
        d
        for d in corpus
        if any(isinstance(n.rule, CutR) for _, n in subderivations(d))
    ]
