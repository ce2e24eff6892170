"""Minimal projective dilations of finite-outcome POVMs.

Each effect factors through its spectral decomposition, E = A* A with A built
from the scaled eigenvector rows sqrt(lambda_k) <v_k|; stacking the per-outcome
blocks gives an isometry J into the direct sum of outcome spaces, on which the
measurement becomes a family of coordinate projections.  The dilation is
minimal: the block sizes are exactly the effect ranks, and J is unitary
precisely when the measurement was projective to begin with.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPsd, UnknownLabel
from .linalg import DEFAULT_TOL, Tolerance, herm_eig, opnorm
from .povm import OutcomeWeight, Povm, outcome_weights

__all__ = [
    "OutcomeFactorization",
    "NaimarkDilation",
    "factorize_outcome",
    "build_dilation",
    "reconstruct",
    "dilation_is_unitary",
]

UNITARITY_EPS = 1e-9


@dataclass(frozen=True)
class OutcomeFactorization:
    """One effect written as E = factor* @ factor.

    ``factor`` has shape (multiplicity, dim): row k is sqrt(lambda_k) <v_k|,
    so the rows are orthogonal with squared norms equal to the retained
    eigenvalues.  The columns are the dilation vectors of the basis states.
    """

    label: str
    multiplicity: int
    factor: np.ndarray

    @property
    def row_vectors(self) -> np.ndarray:
        return self.factor

    @property
    def column_vectors(self) -> np.ndarray:
        return self.factor.T


@dataclass(frozen=True)
class NaimarkDilation:
    """Stacked factorization blocks: an isometry J with J*J = identity.

    ``block_index`` maps each outcome label to its half-open row range in J;
    zero effects occupy empty ranges.
    """

    dim: int
    total_dim: int
    isometry: np.ndarray
    block_index: dict[str, tuple[int, int]]
    weights: OutcomeWeight

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.block_index)

    def block(self, label: str) -> np.ndarray:
        if label not in self.block_index:
            raise UnknownLabel(f"no outcome labelled {label!r}")
        lo, hi = self.block_index[label]
        return self.isometry[lo:hi]


def factorize_outcome(effect, tol: Tolerance = DEFAULT_TOL, label: str = "") -> OutcomeFactorization:
    """Spectral factorization E = A* A of a single PSD effect.

    The multiplicity is the numeric rank of E; eigenvalues at or below
    ``tol.abs_eps`` are treated as zero, so a vanishing effect yields an
    empty (0 x dim) factor.
    """
    eig = herm_eig(effect, tol)
    w = eig.eigenvalues
    d = w.shape[0]
    if w.size and float(w[-1]) < -tol.abs_eps:
        raise NotPsd(f"effect {label!r} has negative eigenvalue {float(w[-1]):.3e}")
    wmax = float(w[0]) if w.size else 0.0
    if wmax <= tol.abs_eps:
        rank = 0
    else:
        rank = int(np.count_nonzero(w > tol.rank_rel * wmax))
    rows = np.sqrt(np.clip(w[:rank], 0.0, None))[:, None] * eig.eigenvectors[:, :rank].conj().T
    return OutcomeFactorization(label=label, multiplicity=rank, factor=rows.reshape(rank, d))


def build_dilation(p: Povm, tol: Tolerance = DEFAULT_TOL) -> NaimarkDilation:
    """Stack the per-outcome factors of a validated POVM into an isometry."""
    blocks = []
    index: dict[str, tuple[int, int]] = {}
    start = 0
    for lab, eff in p:
        f = factorize_outcome(eff, tol, label=lab)
        index[lab] = (start, start + f.multiplicity)
        start += f.multiplicity
        if f.multiplicity:
            blocks.append(f.factor)
    j = np.vstack(blocks) if blocks else np.zeros((0, p.dim), dtype=np.complex128)
    return NaimarkDilation(
        dim=p.dim,
        total_dim=start,
        isometry=j,
        block_index=index,
        weights=outcome_weights(p),
    )


def reconstruct(dilation: NaimarkDilation, labels) -> np.ndarray:
    """Compress the coordinate projection of an outcome set back to C^dim.

    Returns J* chi_X J = sum over the named blocks of A_i* A_i.  Unknown
    labels raise; the empty set gives the zero matrix.
    """
    out = np.zeros((dilation.dim, dilation.dim), dtype=np.complex128)
    for lab in labels:
        a = dilation.block(lab)
        out += a.conj().T @ a
    return out


def dilation_is_unitary(dilation: NaimarkDilation, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the dilation adds nothing: square J with JJ* = identity.

    Equivalent to the source measurement being projective.
    """
    if dilation.total_dim != dilation.dim:
        return False
    j = dilation.isometry
    return opnorm(j @ j.conj().T - np.eye(dilation.total_dim)) <= UNITARITY_EPS
