"""Purity (extremality) analysis for finite-outcome POVMs.

A measurement is pure when it is extremal in the convex set of POVMs with its
outcome labels.  Working through the minimal dilation, purity is equivalent
to triviality of the kernel of the block perturbation map

    D = (D_1, ..., D_k)  |->  sum_i  A_i* D_i A_i,

where E_i = A_i* A_i are the outcome factorizations and each D_i is Hermitian
of size rank(E_i).  The map is assembled as a real matrix over orthonormal
Hermitian bases, its kernel read off an SVD; a kernel direction doubles as a
witness from which an explicit convex split E_i -> A_i*(1 +/- D_i)A_i of the
measurement is produced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dilation import OutcomeFactorization, factorize_outcome
from .errors import IsPure, LabelMismatch
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    coords_to_herm,
    herm_to_coords,
    numeric_rank,
    opnorm,
)
from .povm import Povm, validate

__all__ = [
    "BlockHermitian",
    "PerturbationMap",
    "PurityVerdict",
    "ConvexSplit",
    "ScreeningReport",
    "build_perturbation_map",
    "purity_verdict",
    "convex_split",
    "screen_necessary",
]

# A smallest singular value within this factor of the rank threshold, on
# either side, makes the verdict numerically delicate.
MARGINAL_FACTOR = 10.0


@dataclass(frozen=True)
class BlockHermitian:
    """A Hermitian block per nonzero effect, keyed by outcome label."""

    labels: tuple[str, ...]
    blocks: tuple[np.ndarray, ...]

    def items(self):
        return zip(self.labels, self.blocks)

    def block(self, label: str) -> np.ndarray:
        try:
            return self.blocks[self.labels.index(label)]
        except ValueError:
            raise LabelMismatch(f"no block for label {label!r}") from None

    def sup_norm(self) -> float:
        return max((opnorm(b) for b in self.blocks), default=0.0)


@dataclass(frozen=True)
class PerturbationMap:
    """The real matrix of D |-> sum_i A_i* D_i A_i over Hermitian coordinates.

    Domain: the direct sum of Hermitian spaces of the nonzero-effect block
    sizes (real dimension sum of n_i^2); codomain: Hermitian matrices on C^d
    (real dimension d^2).  Zero effects contribute no blocks.
    """

    dim: int
    labels: tuple[str, ...]
    block_dims: tuple[int, ...]
    factors: tuple[OutcomeFactorization, ...]
    matrix: np.ndarray

    @property
    def domain_dim(self) -> int:
        return int(sum(n * n for n in self.block_dims))

    @property
    def codomain_dim(self) -> int:
        return self.dim * self.dim

    def coords_from_blocks(self, d: BlockHermitian) -> np.ndarray:
        if d.labels != self.labels:
            raise LabelMismatch(f"witness labels {d.labels} do not match map labels {self.labels}")
        segs = [herm_to_coords(b) for b in d.blocks]
        return np.concatenate(segs) if segs else np.zeros(0)

    def blocks_from_coords(self, coords) -> BlockHermitian:
        c = np.asarray(coords, dtype=np.float64)
        blocks = []
        pos = 0
        for n in self.block_dims:
            blocks.append(coords_to_herm(c[pos : pos + n * n], n))
            pos += n * n
        return BlockHermitian(labels=self.labels, blocks=tuple(blocks))

    def apply(self, d: BlockHermitian) -> np.ndarray:
        """Evaluate sum_i A_i* D_i A_i directly from the factors."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for f, b in zip(self.factors, d.blocks):
            out += f.factor.conj().T @ b @ f.factor
        return out


def build_perturbation_map(p: Povm, tol: Tolerance = DEFAULT_TOL) -> PerturbationMap:
    """Factorize each outcome and assemble the perturbation matrix."""
    labels = []
    factors = []
    for lab, eff in p:
        f = factorize_outcome(eff, tol, label=lab)
        if f.multiplicity:
            labels.append(lab)
            factors.append(f)
    d = p.dim
    cols = []
    for f in factors:
        n = f.multiplicity
        a = f.factor
        eye = np.eye(n * n)
        for b in range(n * n):
            g = coords_to_herm(eye[b], n)
            cols.append(herm_to_coords(a.conj().T @ g @ a))
    matrix = np.stack(cols, axis=1) if cols else np.zeros((d * d, 0))
    return PerturbationMap(
        dim=d,
        labels=tuple(labels),
        block_dims=tuple(f.multiplicity for f in factors),
        factors=tuple(factors),
        matrix=matrix,
    )


@dataclass(frozen=True)
class PurityVerdict:
    """Outcome of the kernel test.

    ``smallest_singular_value`` is taken over the full domain (zero when the
    domain outstrips the codomain); ``marginal`` flags values within a factor
    of ten of the rank threshold on either side.  ``witness`` is present iff
    the measurement is not pure: a sup-normalized Hermitian kernel direction.
    """

    pure: bool
    kernel_dim: int
    smallest_singular_value: float
    marginal: bool
    witness: BlockHermitian | None


def _fix_sign(coords: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(coords))) if coords.size else 0.0
    if scale == 0.0:
        return coords
    idx = np.flatnonzero(np.abs(coords) > 1e-8 * scale)
    if idx.size and coords[idx[0]] < 0.0:
        return -coords
    return coords


def purity_verdict(p: Povm, tol: Tolerance = DEFAULT_TOL) -> PurityVerdict:
    """Decide purity of a validated POVM via the perturbation-map kernel."""
    pmap = build_perturbation_map(p, tol)
    dom = pmap.domain_dim
    # full_matrices so vh is square: its trailing rows span the null space
    # even when the domain outstrips the codomain.
    _, s, vh = np.linalg.svd(pmap.matrix, full_matrices=True)
    smax = float(s[0]) if s.size else 0.0
    thr = tol.rank_rel * smax
    rank = int(np.count_nonzero(s > thr)) if smax > 0.0 else 0
    kernel_dim = dom - rank
    # Effective smallest singular value over the whole domain: the SVD only
    # returns min(domain, codomain) values, the rest are exact zeros.
    if dom == 0:
        smallest = 0.0
    elif s.size >= dom:
        smallest = float(s[dom - 1])
    else:
        smallest = 0.0
    pure = kernel_dim == 0
    marginal = bool(smax > 0.0 and thr / MARGINAL_FACTOR <= smallest <= thr * MARGINAL_FACTOR)
    witness = None
    if not pure:
        coords = _fix_sign(vh[dom - 1].copy())
        d = pmap.blocks_from_coords(coords)
        # Hermitian by construction (real coordinates); symmetrize anyway to
        # scrub float noise, then scale the largest block to unit norm so the
        # split operators 1 +/- D_i stay positive.
        blocks = tuple((b + b.conj().T) / 2.0 for b in d.blocks)
        sup = max((opnorm(b) for b in blocks), default=0.0)
        if sup > 0.0:
            blocks = tuple(b / sup for b in blocks)
        witness = BlockHermitian(labels=d.labels, blocks=blocks)
    return PurityVerdict(
        pure=pure,
        kernel_dim=kernel_dim,
        smallest_singular_value=smallest,
        marginal=marginal,
        witness=witness,
    )


@dataclass(frozen=True)
class ConvexSplit:
    """Two POVMs averaging back to the original: proof of non-extremality."""

    plus: Povm
    minus: Povm


def convex_split(p: Povm, verdict: PurityVerdict, tol: Tolerance = DEFAULT_TOL) -> ConvexSplit:
    """Split an impure POVM along its witness, E_i -> A_i*(1 +/- D_i)A_i.

    Zero effects stay zero on both sides.  Both halves are validated, and
    their average reproduces the input exactly (the cross terms cancel).
    """
    if verdict.pure:
        raise IsPure("measurement is extremal; no convex split exists")
    if verdict.witness is None:
        raise ValueError("impure verdict lacks a witness")
    w = verdict.witness
    plus_outcomes = []
    minus_outcomes = []
    for lab, eff in p:
        if lab not in w.labels:
            zero = np.zeros((p.dim, p.dim))
            plus_outcomes.append((lab, zero))
            minus_outcomes.append((lab, zero))
            continue
        f = factorize_outcome(eff, tol, label=lab)
        a = f.factor
        d = w.block(lab)
        eye = np.eye(f.multiplicity)
        plus_outcomes.append((lab, a.conj().T @ (eye + d) @ a))
        minus_outcomes.append((lab, a.conj().T @ (eye - d) @ a))
    return ConvexSplit(
        plus=validate(p.dim, plus_outcomes, tol),
        minus=validate(p.dim, minus_outcomes, tol),
    )


@dataclass(frozen=True)
class ScreeningReport:
    """Linear-independence screen over the nonzero effects."""

    effects_independent: bool
    max_dependent_set: tuple[str, ...] | None


def screen_necessary(p: Povm, tol: Tolerance = DEFAULT_TOL) -> ScreeningReport:
    """Necessary condition for purity: nonzero effects linearly independent.

    When they are not, ``max_dependent_set`` lists the labels whose effects
    are linear combinations of their predecessors (scanning in outcome
    order), i.e. the outcomes one could drop without shrinking the span.
    """
    labels = [lab for lab, eff in p if opnorm(eff) > tol.abs_eps]
    vecs = [p.effect(lab).reshape(-1) for lab in labels]
    if not vecs:
        return ScreeningReport(effects_independent=True, max_dependent_set=None)
    stack = np.stack(vecs, axis=1)
    total = numeric_rank(stack, tol)
    if total == len(vecs):
        return ScreeningReport(effects_independent=True, max_dependent_set=None)
    dependent = []
    rank = 0
    for k, lab in enumerate(labels):
        r = numeric_rank(stack[:, : k + 1], tol)
        if r == rank:
            dependent.append(lab)
        rank = r
    return ScreeningReport(effects_independent=False, max_dependent_set=tuple(dependent))
