"""Shared constructions for the test suite."""

import itertools

import numpy as np

from rackcover import core
from rackcover.cover import ConstantCocycle
from rackcover.permgroup import Permutation


def conj_quandle(n):
    """Transpositions of the symmetric group on n points under conjugation."""
    elems = [tuple(sorted(t)) for t in itertools.combinations(range(n), 2)]
    idx = {t: i for i, t in enumerate(elems)}
    size = len(elems)
    mul = np.empty((size, size), dtype=np.int64)
    for i, (a, b) in enumerate(elems):
        swap = {a: b, b: a}
        for j, (c, d) in enumerate(elems):
            mul[i, j] = idx[tuple(sorted((swap.get(c, c), swap.get(d, d))))]
    return core.from_table(mul)


def min_symmetry(Q, cap=24):
    """Least m with L_x^m = 1 for all x, or None past the cap."""
    order = 1
    for row in Q.mul:
        k = Permutation(row).order()
        order = order * k // np.gcd(order, k)
        if order > cap:
            return None
    return order


def random_perm_cocycle(rng, n, m):
    """Uniform random (not necessarily valid) constant cocycle values."""
    perms = np.empty((n, n, m), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            perms[x, y] = rng.permutation(m)
    return ConstantCocycle.from_perms(perms)


def gamma_twist(Q, theta, gamma):
    """The cocycle eps with eps_{x,y} = gamma_{x*y} theta_{x,y} gamma_y^-1."""
    m = theta.degree
    perms = np.empty((Q.size, Q.size, m), dtype=np.int64)
    for x in range(Q.size):
        for y in range(Q.size):
            p = gamma[Q.mul[x, y]] * theta.perm(x, y) * gamma[y].inverse()
            perms[x, y] = p.image
    return ConstantCocycle.from_perms(perms)
