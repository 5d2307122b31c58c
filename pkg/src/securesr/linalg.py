"""
Complex matrix primitives: generalized Hermitian eigenvectors and
orthonormal null-space bases.

Both routines return deterministic output so that repeated calls on the same
input are bit-identical.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, IllConditionedPairError

__all__ = ['HermitianPair', 'canonical_phase', 'generalized_principal_eigenvector',
           'null_space_basis']

HERMITIAN_RTOL = 1e-12
SINGULAR_RTOL = 1e-12


class HermitianPair(NamedTuple):
    """Matrix pair (numerator, denominator) of a generalized Rayleigh quotient."""
    numerator: np.ndarray
    denominator: np.ndarray

    def quotient(self, w: np.ndarray) -> np.ndarray | float:
        """Evaluate ``(w^H N w) / (w^H D w)``; `w` may be stacked row-wise."""
        w = np.asarray(w)
        num = np.einsum('...i,ij,...j->...', w.conj(), self.numerator, w).real
        den = np.einsum('...i,ij,...j->...', w.conj(), self.denominator, w).real
        return num / den

    def validate(self) -> None:
        for name, mat in zip(self._fields, self):
            mat = np.asarray(mat)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise ValueError(f'{name} must be a square matrix, got shape {mat.shape}')
            scale = max(np.abs(mat).max(), 1.0)
            if np.abs(mat - mat.conj().T).max() > HERMITIAN_RTOL * scale:
                raise ValueError(f'{name} is not Hermitian')
        if self.numerator.shape != self.denominator.shape:
            raise ValueError('numerator and denominator shapes differ')


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate `v` so its largest-magnitude entry is real and non-negative."""
    v = np.array(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    mag = abs(v[k])
    if mag > 0:
        v *= np.conj(v[k]) / mag
        v[k] = mag
    return v


def generalized_principal_eigenvector(pair: HermitianPair) -> tuple[np.ndarray, float]:
    """
    Principal eigenpair of ``N v = lam D v`` for Hermitian N and Hermitian
    positive-definite D.

    The problem is reduced through the Cholesky factor ``D = L L^H`` to the
    standard Hermitian problem for ``L^-1 N L^-H``.

    Returns
    -------
    v : ndarray
        Unit-norm eigenvector, phase fixed by :func:`canonical_phase`.
    lam : float
        Largest generalized eigenvalue, i.e. the maximum Rayleigh quotient.

    Raises
    ------
    IllConditionedPairError
        If the smallest eigenvalue of D is below ``1e-12`` times its largest.
    """
    pair = HermitianPair(np.asarray(pair.numerator, dtype=complex),
                         np.asarray(pair.denominator, dtype=complex))
    pair.validate()
    num, den = pair
    den_eigs = sla.eigvalsh(den)
    if den_eigs[0] <= SINGULAR_RTOL * abs(den_eigs[-1]):
        raise IllConditionedPairError(
            f'denominator is numerically singular (eigenvalues {den_eigs[0]:.3e}'
            f' .. {den_eigs[-1]:.3e})')

    chol = sla.cholesky(den, lower=True)
    half = sla.solve_triangular(chol, num, lower=True)
    reduced = sla.solve_triangular(chol, half.conj().T, lower=True)
    reduced = 0.5 * (reduced + reduced.conj().T)
    n = num.shape[0]
    lams, ys = sla.eigh(reduced, subset_by_index=[n - 1, n - 1])
    v = sla.solve_triangular(chol.conj().T, ys[:, 0], lower=False)
    v = canonical_phase(v / np.linalg.norm(v))
    return v, float(lams[0])


def null_space_basis(rows: Sequence[np.ndarray], target_dim: int) -> np.ndarray:
    """
    Orthonormal columns orthogonal to every vector in `rows`.

    Every returned column ``b`` satisfies ``r^H b = 0`` for each ``r`` in
    `rows`. The basis is taken from the trailing right singular vectors of
    the stacked rows, so rank-deficient inputs leave a larger null space to
    choose from.

    Raises
    ------
    DimensionError
        If `target_dim` exceeds the dimension of the null space.
    """
    stacked = np.atleast_2d(np.array(rows, dtype=complex))
    nt = stacked.shape[1]
    if target_dim < 0:
        raise DimensionError('target_dim must be non-negative')
    # rows of vh span C^nt; r^H b = 0 is the null space of conj(stacked)
    _, s, vh = np.linalg.svd(stacked.conj(), full_matrices=True)
    tol = max(stacked.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    if target_dim > nt - rank:
        raise DimensionError(
            f'null space has dimension {nt - rank}, requested {target_dim}')
    if target_dim == 0:
        return np.zeros((nt, 0), dtype=complex)
    return vh[nt - target_dim:].conj().T
