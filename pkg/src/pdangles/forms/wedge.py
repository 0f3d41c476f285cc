# this_file: src/pdangles/forms/wedge.py
"""Wedge product of Whitney forms, projected back onto Whitney forms."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..errors import DegreeError
from .cochain import Carrier, Cochain
from .linalg import cholesky_solve

if TYPE_CHECKING:
    from .operators import DiscreteForms


def _signed_tensor(forms: DiscreteForms, carrier: Carrier, p: int, q: int) -> np.ndarray:
    key = (carrier, p, q)
    if key not in forms._wedge_tensors:
        whitney = forms.whitney if carrier is Carrier.INTERIOR else forms.boundary_whitney
        k = p + q
        tensor = whitney.local_wedge(p, q)
        tensor *= whitney.face_signs(p)[:, :, None, None]
        tensor *= whitney.face_signs(q)[:, None, :, None]
        tensor *= whitney.face_signs(k)[:, None, None, :]
        forms._wedge_tensors[key] = tensor
    return forms._wedge_tensors[key]


def wedge_product(forms: DiscreteForms, alpha: Cochain, beta: Cochain) -> Cochain | None:
    """L2 projection of ``alpha ^ beta`` onto Whitney (p+q)-forms of the same carrier."""
    if alpha.carrier is not beta.carrier:
        raise DegreeError("wedge factors live on different carriers")
    carrier = alpha.carrier
    p, q = alpha.degree, beta.degree
    forms._expect(alpha, p)
    forms._expect(beta, q)
    top = forms._top_degree(carrier)
    if p + q > top:
        return None

    complex_ = forms.complex if carrier is Carrier.INTERIOR else forms.complex.boundary.complex
    tensor = _signed_tensor(forms, carrier, p, q)
    local_a = alpha.values[complex_.top_face_indices(p)]
    local_b = beta.values[complex_.top_face_indices(q)]
    local_rhs = np.einsum("tabc,ta,tb->tc", tensor, local_a, local_b)

    k = p + q
    rhs = np.zeros(forms.size(k, carrier))
    np.add.at(rhs, complex_.top_face_indices(k).ravel(), local_rhs.ravel())
    return Cochain(k, carrier, cholesky_solve(forms.factor(k, carrier), rhs))


def wedge_pairing(forms: DiscreteForms, p: int, carrier: Carrier = Carrier.BOUNDARY) -> np.ndarray:
    """Matrix of ``(chi, psi) -> integral of chi ^ psi`` for p- and (top-p)-forms.

    The integral of a top-degree form over one simplex is its coefficient against
    the global top Whitney form divided by that form's mass.
    """
    top = forms._top_degree(carrier)
    forms._check_degree(p, carrier)
    key = (carrier, p)
    if key not in forms._pairings:
        complex_ = forms.complex if carrier is Carrier.INTERIOR else forms.complex.boundary.complex
        tensor = _signed_tensor(forms, carrier, p, top - p)[:, :, :, 0]
        cells = complex_.top_face_indices(top)[:, 0]
        volumes = 1.0 / np.diag(forms.mass(top, carrier))[cells]
        rows = complex_.top_face_indices(p)
        cols = complex_.top_face_indices(top - p)
        out = np.zeros((forms.size(p, carrier), forms.size(top - p, carrier)))
        np.add.at(out, (rows[:, :, None], cols[:, None, :]), tensor * volumes[:, None, None])
        forms._pairings[key] = out
    return forms._pairings[key]
