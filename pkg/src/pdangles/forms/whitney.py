# this_file: src/pdangles/forms/whitney.py
"""Exact integrals of Whitney forms over flat simplices.

Everything here is vectorised over the top simplices of one complex. Integrals of
barycentric monomials use ``int lambda^a = n! a! vol / (n + |a|)!`` and products
of barycentric gradients come from the gradient Gram matrix ``G = B g^-1 B^T``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..errors import MeshValidationError
from ..mesh.complex import SimplicialComplex
from ..mesh.geometry import metric_grams, simplex_volumes


def _det(blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[-1] == 0:
        return np.ones(blocks.shape[0])
    return np.linalg.det(blocks)


def _monomial_factor(n: int, indices: tuple[int, ...]) -> float:
    """``n! prod(a!) / (n + |a|)!`` for the multi-index counted from ``indices``."""
    alpha = math.prod(math.factorial(c) for c in Counter(indices).values())
    return math.factorial(n) * alpha / math.factorial(n + len(indices))


@dataclass(frozen=True, eq=False)
class WhitneyGeometry:
    """Gradient Gram matrices and volumes of every top simplex of a complex."""

    complex: SimplicialComplex
    gradient_grams: np.ndarray
    volumes: np.ndarray

    @classmethod
    def from_lengths(cls, complex_: SimplicialComplex, lengths: np.ndarray) -> WhitneyGeometry:
        n = complex_.dim
        if n == 0:
            count = complex_.count(0)
            return cls(complex_, np.zeros((count, 1, 1)), np.ones(count))
        grams = metric_grams(complex_, lengths)
        volumes = simplex_volumes(grams)
        if not np.all(volumes > 0):
            raise MeshValidationError("simplex with non-positive volume")
        inverse = np.linalg.inv(grams)
        lift = np.vstack([-np.ones((1, n)), np.eye(n)])
        gradient_grams = np.einsum("ia,tab,jb->tij", lift, inverse, lift)
        return cls(complex_, gradient_grams, volumes)

    @property
    def dim(self) -> int:
        return self.complex.dim

    def local_mass(self, p: int) -> np.ndarray:
        """Element mass matrices of p-forms, shape (N_top, m, m) with m = C(dim+1, p+1)."""
        n = self.dim
        faces = self.complex.local_faces[p]
        grams = self.gradient_grams
        out = np.zeros((grams.shape[0], len(faces), len(faces)))
        scale = math.factorial(p) ** 2
        for a, sigma in enumerate(faces):
            for b in range(a, len(faces)):
                tau = faces[b]
                total = np.zeros(grams.shape[0])
                for i, si in enumerate(sigma):
                    rows = list(sigma[:i] + sigma[i + 1 :])
                    for j, tj in enumerate(tau):
                        cols = list(tau[:j] + tau[j + 1 :])
                        block = grams[:, rows][:, :, cols]
                        total += (-1) ** (i + j) * _monomial_factor(n, (si, tj)) * _det(block)
                out[:, a, b] = out[:, b, a] = scale * total * self.volumes
        return out

    def mass_matrix(self, p: int) -> sparse.csr_matrix:
        """Assembled mass matrix of p-forms."""
        return _assemble(self.complex.count(p), self.local_mass(p), self.complex.top_face_indices(p))

    def local_wedge(self, p: int, q: int) -> np.ndarray:
        """Element tensors ``<W_s ^ W_t, W_r>``, shape (N_top, m_p, m_q, m_{p+q})."""
        n = self.dim
        k = p + q
        grams = self.gradient_grams
        faces_p, faces_q, faces_k = (self.complex.local_faces[d] for d in (p, q, k))
        out = np.zeros((grams.shape[0], len(faces_p), len(faces_q), len(faces_k)))
        scale = math.factorial(p) * math.factorial(q) * math.factorial(k)
        for a, sigma in enumerate(faces_p):
            for b, tau in enumerate(faces_q):
                for c, rho in enumerate(faces_k):
                    total = np.zeros(grams.shape[0])
                    for i, si in enumerate(sigma):
                        for j, tj in enumerate(tau):
                            rows = list(sigma[:i] + sigma[i + 1 :] + tau[:j] + tau[j + 1 :])
                            for r, rr in enumerate(rho):
                                cols = list(rho[:r] + rho[r + 1 :])
                                block = grams[:, rows][:, :, cols]
                                total += (
                                    (-1) ** (i + j + r)
                                    * _monomial_factor(n, (si, tj, rr))
                                    * _det(block)
                                )
                    out[:, a, b, c] = scale * total * self.volumes
        return out

    def face_signs(self, p: int) -> np.ndarray:
        """Orientation of each local p-face relative to its global simplex."""
        if p == self.dim:
            return self.complex.top_signs[:, None].astype(float)
        return np.ones((self.complex.count(self.dim), len(self.complex.local_faces[p])))


def _assemble(size: int, local: np.ndarray, index: np.ndarray) -> sparse.csr_matrix:
    m = index.shape[1]
    rows = np.repeat(index, m, axis=1).ravel()
    cols = np.tile(index, (1, m)).ravel()
    return sparse.coo_matrix((local.ravel(), (rows, cols)), shape=(size, size)).tocsr()
