"""Seeded random instance generators shared by the CLI sweep and the tests."""

from __future__ import annotations

import itertools
import random

from .chainring import ChainRing, RingElement, SubsetSpec, make_chain_ring
from .mpoly import MPoly
from .warning import RestrictedSystem

SWEEP_RINGS = [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 1, 2), (2, 2, 1), (2, 2, 2), (3, 2, 1), (3, 2, 2)]


def random_element(ring: ChainRing, rng: random.Random) -> RingElement:
    return ring.element([rng.randrange(ring.pv) for _ in range(ring.ell)])


def random_condition_f_set(ring: ChainRing, size: int, rng: random.Random) -> SubsetSpec:
    """``size`` elements with distinct residues, each lifted by a random
    element of the maximal ideal."""
    residues = rng.sample(range(ring.q), size)
    out = []
    for r in residues:
        digits = [(r // ring.p ** k) % ring.p for k in range(ring.ell)]
        noise = [ring.p * rng.randrange(ring.pv // ring.p) for _ in range(ring.ell)]
        out.append(ring.element([d + e for d, e in zip(digits, noise)]))
    return SubsetSpec(out, ring)


def random_poly(ring: ChainRing, nvars: int, max_deg: int, rng: random.Random,
                max_terms: int = 4) -> MPoly:
    monos = [e for e in itertools.product(range(max_deg + 1), repeat=nvars) if sum(e) <= max_deg]
    terms = {}
    for e in rng.sample(monos, min(len(monos), rng.randint(1, max_terms))):
        terms[e] = random_element(ring, rng)
    return MPoly(ring, nvars, terms)


def random_system(rng: random.Random, rings=SWEEP_RINGS, max_n: int = 3, max_r: int = 2,
                  max_deg: int = 2) -> RestrictedSystem:
    p, ell, v = rng.choice(rings)
    ring = make_chain_ring(p, ell, v)
    n = rng.randint(1, max_n)
    r = rng.randint(1, max_r)
    inputs = [random_condition_f_set(ring, rng.randint(1, ring.q), rng) for _ in range(n)]
    polys = [random_poly(ring, n, max_deg, rng) for _ in range(r)]
    exps = [rng.randint(1, v) for _ in range(r)]
    outputs = [random_condition_f_set(ring, rng.randint(1, ring.q), rng) for _ in range(r)]
    return RestrictedSystem(ring, inputs, polys, exps, outputs)


def random_systems(seed: int, count: int, **kw):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_system(rng, **kw)
