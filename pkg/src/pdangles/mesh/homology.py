# this_file: src/pdangles/mesh/homology.py
"""Betti numbers from exact integer ranks of the incidence matrices."""

from __future__ import annotations

import numpy as np
from loguru import logger
from scipy import sparse

from .complex import SimplicialComplex

# Large primes below 2**31 keep every product inside int64.
PRIMES = (2_147_483_629, 2_147_483_587)


def rank_mod_prime(matrix, prime: int) -> int:
    """Rank of an integer matrix over the field with ``prime`` elements."""
    if sparse.issparse(matrix):
        matrix = matrix.toarray()
    a = np.mod(np.asarray(matrix, dtype=np.int64), prime)
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        candidates = np.flatnonzero(a[rank:, col])
        if candidates.size == 0:
            continue
        pivot = rank + int(candidates[0])
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        inverse = pow(int(a[rank, col]), prime - 2, prime)
        a[rank] = (a[rank] * inverse) % prime
        below = rank + 1 + np.flatnonzero(a[rank + 1 :, col])
        if below.size:
            a[below] = (a[below] - (a[below, col][:, None] * a[rank]) % prime) % prime
        rank += 1
    return rank


def integer_rank(matrix) -> int:
    """Rank over the rationals, taken as the largest rank modulo two large primes."""
    return max(rank_mod_prime(matrix, prime) for prime in PRIMES)


def betti_numbers(complex_: SimplicialComplex) -> tuple[int, ...]:
    """Betti numbers b_0..b_dim of the complex (absolute cohomology)."""
    ranks = [integer_rank(d) for d in complex_.incidence]
    betti = []
    for p in range(complex_.dim + 1):
        outgoing = ranks[p] if p < complex_.dim else 0
        incoming = ranks[p - 1] if p > 0 else 0
        betti.append(complex_.count(p) - outgoing - incoming)
    logger.debug(f"Betti numbers {betti}")
    return tuple(betti)


def relative_betti_numbers(complex_: SimplicialComplex) -> tuple[int, ...]:
    """Betti numbers of cohomology relative to the boundary.

    Relative cochains vanish on the boundary subcomplex, so the relative coboundary is
    the incidence matrix restricted to interior simplices in both degrees. A closed
    complex gives the absolute numbers.
    """
    if complex_.boundary is None:
        return betti_numbers(complex_)
    inside = [complex_.interior_indices(p) for p in range(complex_.dim + 1)]
    ranks = [
        integer_rank(sparse.csr_matrix(d)[inside[p + 1]][:, inside[p]])
        for p, d in enumerate(complex_.incidence)
    ]
    betti = []
    for p in range(complex_.dim + 1):
        outgoing = ranks[p] if p < complex_.dim else 0
        incoming = ranks[p - 1] if p > 0 else 0
        betti.append(int(inside[p].size) - outgoing - incoming)
    logger.debug(f"Relative Betti numbers {betti}")
    return tuple(betti)


def boundary_components(complex_: SimplicialComplex) -> int:
    """Number of connected components of the boundary (0 for closed complexes)."""
    if complex_.boundary is None:
        return 0
    return complex_.boundary.complex.vertex_components()


def euler_characteristic(complex_: SimplicialComplex) -> int:
    return complex_.euler_characteristic()
