"""Seeded random descriptions and formulas for differential testing.

Generation is biased toward boundary shapes: strictness violations (Q next
to unbounded parts, torsion-free or divisible parts at unbounded-length
primes), coprime torsion mixtures, and tails.  Sizes are kept small enough
that the oracle's exhaustive search stays fast at B0 = max exponent + 2.
"""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from .core import (OMEGA, Div, Mult, PPFormula, SzmielewDescription,
                   TailSpec, Tor, make_description, make_prime_tail)

PRIMES = (2, 3, 5, 7)
MAX_EXP = 5


def _mult(rng: random.Random, allow_omega: bool = True) -> Mult:
    if allow_omega:
        return rng.choice([1, 2, OMEGA])
    return rng.choice([1, 2])


def random_description(rng: random.Random,
                       finite_dp_only: bool = True) -> SzmielewDescription:
    primes = rng.sample(PRIMES, rng.randint(1, 3))
    cyclic: Dict[Tuple[int, int], Mult] = {}
    tf: Dict[int, Mult] = {}
    div: Dict[int, Mult] = {}
    tails: Dict[int, TailSpec] = {}
    for p in primes:
        for _ in range(rng.randint(1, 2)):
            kind = rng.choices(["cyclic", "tf", "div", "tail"],
                               weights=[5, 2, 2, 2])[0]
            if kind == "cyclic":
                n = rng.randint(1, MAX_EXP)
                cyclic[(p, n)] = _mult(rng)
            elif kind == "tf":
                tf[p] = _mult(rng)
            elif kind == "div":
                div[p] = _mult(rng)
            else:
                exps = [n for (q, n) in cyclic if q == p]
                base = max(exps) if exps else 0
                mult = 1 if finite_dp_only else rng.choice([1, OMEGA])
                tails[p] = TailSpec(max(base, rng.randint(0, MAX_EXP)), mult)
    for p, spec in list(tails.items()):
        # a cyclic block drawn after the tail may sit above its cutoff
        exps = [n for (q, n) in cyclic if q == p]
        if exps and spec.cutoff < max(exps):
            tails[p] = TailSpec(max(exps), spec.mult)
    q_mult: Mult = 0
    if rng.random() < 0.3:
        q_mult = rng.choice([1, OMEGA])
    prime_tail = None
    if rng.random() < 0.15:
        allow = not finite_dp_only
        pattern = {}
        if rng.random() < 0.7:
            pattern[rng.randint(1, 3)] = _mult(rng, allow_omega=allow)
        prime_tail = make_prime_tail(
            pattern,
            tf_mult=rng.choice([0, 1, OMEGA] if allow else [0, 1, 2]),
            div_mult=rng.choice([0, 1, OMEGA] if allow else [0, 1, 2]))
        if prime_tail.is_trivial:
            prime_tail = None
    return make_description(cyclic, tf, div, q_mult, tails, prime_tail)


def random_finite_description(rng: random.Random,
                              size_cap: int = 10 ** 4) -> SzmielewDescription:
    """A finite group (cyclic blocks only) of order at most size_cap."""
    cyclic: Dict[Tuple[int, int], Mult] = {}
    size = 1
    for _ in range(rng.randint(1, 3)):
        p = rng.choice((2, 3, 5))
        n = rng.randint(1, 3 if p == 2 else 2)
        mult = rng.randint(1, 2)
        if size * (p ** n) ** mult > size_cap:
            continue
        size *= (p ** n) ** mult
        cyclic[(p, n)] = cyclic.get((p, n), 0) + mult
    if not cyclic:
        cyclic[(2, 1)] = 1
    return make_description(cyclic)


def random_formula(rng: random.Random, primes: Tuple[int, ...] = PRIMES,
                   max_exp: int = 4) -> PPFormula:
    atoms: List = []
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            m = 1
            for p in rng.sample(primes, rng.randint(1, 2)):
                m *= p ** rng.randint(1, max_exp)
            atoms.append(Tor(m))
        else:
            p = rng.choice(primes)
            r = rng.randint(1, max_exp)
            s = rng.randint(0, r - 1)
            atoms.append(Div(p, r, s))
    return PPFormula.of(*atoms)
