"""Hilbert-Schmidt orthonormal Hermitian operator bases.

A basis here is an ordered family of d^2 Hermitian operators with
``ops[0] = I/sqrt(d)`` and the remaining members traceless and mutually
orthonormal in the Hilbert-Schmidt inner product. The normalized traceless
Hamiltonian direction is installed as ``ops[1]`` and the rest of the family
is completed by Gram-Schmidt over the generalized Gell-Mann candidates in a
fixed, documented order (symmetric pairs (j,k) lexicographically, then
antisymmetric pairs, then diagonal generators). That ordering makes bases
deterministic and therefore golden-testable; any other completion is related
to it by a tail rotation, which leaves every reported physical quantity
unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .exceptions import DegenerateDirectionError, ValidationError
from .linalg import (
    DEFAULT_TOLS,
    DensityMatrix,
    HermitianOperator,
    hs_inner,
)

__all__ = [
    "OperatorBasis",
    "StateCoordinates",
    "hamiltonian_unit",
    "gell_mann_candidates",
    "complete_basis",
    "expand_state",
    "reconstruct_state",
    "rotate_tail",
]

#: Candidates whose post-projection norm falls below this are discarded.
DROP_TOL = 1e-8


def hamiltonian_unit(H: HermitianOperator, tol_rank: float = DEFAULT_TOLS.rank) -> tuple[HermitianOperator, float]:
    """Normalized traceless part of H and its Hilbert-Schmidt weight h.

    Returns ``(O1, h)`` with ``O1 = (H - (Tr H / d) I)/h`` and
    ``h = sqrt(Tr[H^2] - (Tr H)^2/d)``. Adding a multiple of the identity to
    H leaves the output unchanged.

    :raises DegenerateDirectionError: if H is proportional to the identity
        (the temperature direction is then undefined, the energy variance
        w.r.t. I/d being zero).
    """
    if not isinstance(H, HermitianOperator):
        H = HermitianOperator(H)
    d = H.dim
    traceless = H.matrix - (H.trace / d) * np.eye(d)
    h = math.sqrt(max(0.0, float(np.sum(np.abs(traceless) ** 2))))
    scale = max(1.0, float(np.max(np.abs(H.matrix))))
    if h <= tol_rank * scale:
        raise DegenerateDirectionError(
            "Hamiltonian is proportional to the identity; its traceless direction "
            "(and hence the temperature) is undefined"
        )
    return HermitianOperator(traceless / h), h


def gell_mann_candidates(d: int) -> Iterator[np.ndarray]:
    """Generalized Gell-Mann family for dimension d, unit HS norm.

    Yields, in this fixed order: symmetric generators
    ``(|j><k| + |k><j|)/sqrt(2)`` for j < k lexicographically, then the
    antisymmetric generators ``(-i|j><k| + i|k><j|)/sqrt(2)``, then the
    diagonal generators ``diag(1,...,1,-l,0,...)/sqrt(l(l+1))``.
    """
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0 / math.sqrt(2.0)
            yield m
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / math.sqrt(2.0)
            m[k, j] = 1j / math.sqrt(2.0)
            yield m
    for level in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        norm = math.sqrt(level * (level + 1))
        for j in range(level):
            m[j, j] = 1.0 / norm
        m[level, level] = -level / norm
        yield m


@dataclass(frozen=True)
class OperatorBasis:
    """Ordered Hilbert-Schmidt orthonormal Hermitian basis of d^2 operators."""

    dim: int
    ops: tuple[HermitianOperator, ...]

    def __post_init__(self):
        d = self.dim
        if len(self.ops) != d * d:
            raise ValidationError(f"basis must contain {d * d} operators, got {len(self.ops)}")
        ident = np.eye(d) / math.sqrt(d)
        if float(np.max(np.abs(self.ops[0].matrix - ident))) > 1e-12:
            raise ValidationError("ops[0] must be the normalized identity I/sqrt(d)")
        mats = np.stack([op.matrix for op in self.ops])
        traces = np.einsum("kii->k", mats[1:])
        if traces.size and float(np.max(np.abs(traces))) > 1e-12:
            raise ValidationError("basis operators beyond ops[0] must be traceless")
        gram = np.einsum("kij,lij->kl", mats.conj(), mats).real
        dev = float(np.max(np.abs(gram - np.eye(d * d))))
        if dev > 1e-10:
            raise ValidationError(f"basis is not HS-orthonormal: Gram deviation {dev:.3e}")

    def __len__(self) -> int:
        return len(self.ops)

    def __getitem__(self, i: int) -> HermitianOperator:
        return self.ops[i]


@dataclass(frozen=True)
class StateCoordinates:
    """Real expansion coordinates x_i = Tr[rho O_i] of a state."""

    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.array(self.x, dtype=float))
        self.x.setflags(write=False)


def complete_basis(d: int, seeds: list[HermitianOperator]) -> OperatorBasis:
    """Complete ``(I/sqrt(d), *seeds)`` to a full orthonormal basis.

    Seeds must be traceless, unit-norm and mutually orthogonal; they are kept
    verbatim at positions 1..len(seeds). Gell-Mann candidates are then
    orthogonalized against everything accepted so far, keeping those whose
    residual norm is at least ``DROP_TOL``.
    """
    if d < 1 or d > 256:
        raise ValidationError(f"unsupported basis dimension {d}")
    accepted: list[np.ndarray] = [np.eye(d, dtype=complex) / math.sqrt(d)]
    for s in seeds:
        m = s.matrix if isinstance(s, HermitianOperator) else HermitianOperator(s).matrix
        if m.shape != (d, d):
            raise ValidationError("seed dimension mismatch")
        if abs(np.trace(m)) > 1e-10:
            raise ValidationError("seeds must be traceless")
        for prev in accepted[1:]:
            if abs(np.sum(prev.conj() * m).real) > 1e-10:
                raise ValidationError("seeds must be mutually orthogonal")
        norm = math.sqrt(float(np.sum(np.abs(m) ** 2)))
        if abs(norm - 1.0) > 1e-10:
            raise ValidationError("seeds must have unit Hilbert-Schmidt norm")
        accepted.append(m)
    for cand in gell_mann_candidates(d):
        if len(accepted) == d * d:
            break
        v = cand.copy()
        for prev in accepted:
            v -= np.sum(prev.conj() * v) * prev
        v = (v + v.conj().T) / 2.0
        norm = math.sqrt(float(np.sum(np.abs(v) ** 2)))
        if norm >= DROP_TOL:
            accepted.append(v / norm)
    if len(accepted) != d * d:
        raise ValidationError(
            f"basis completion produced {len(accepted)} of {d * d} operators; "
            "seeds were likely not independent of the candidate family"
        )
    return OperatorBasis(d, tuple(HermitianOperator(m) for m in accepted))


def expand_state(rho: DensityMatrix, basis: OperatorBasis) -> StateCoordinates:
    """Coordinates x_i = Tr[rho O_i]; satisfies Parseval and reconstruction."""
    if rho.dim != basis.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, basis {basis.dim}")
    x = np.array([hs_inner(op, rho.operator) for op in basis.ops])
    return StateCoordinates(x)


def reconstruct_state(coords: StateCoordinates, basis: OperatorBasis) -> np.ndarray:
    """Resum sum_i x_i O_i; inverse of expand_state."""
    if coords.x.size != len(basis):
        raise ValidationError("coordinate count does not match basis size")
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    for xi, op in zip(coords.x, basis.ops):
        out += xi * op.matrix
    return out


def rotate_tail(basis: OperatorBasis, R: np.ndarray) -> OperatorBasis:
    """Rotate the tail operators ops[2:] by an orthogonal matrix R.

    ops[0] and ops[1] are untouched; the new tail is O'_k = sum_i R[i, k] O_i.
    Physical outputs (beta, the Helmholtz tail sum) are invariant under this.
    """
    n = len(basis) - 2
    r = np.array(R, dtype=float)
    if r.shape != (n, n):
        raise ValidationError(f"rotation must be {n}x{n}, got {r.shape}")
    dev = float(np.max(np.abs(r.T @ r - np.eye(n)))) if n else 0.0
    if dev > 1e-10:
        raise ValidationError(f"rotation matrix is not orthogonal: deviation {dev:.3e}")
    tail = np.stack([op.matrix for op in basis.ops[2:]]) if n else np.zeros((0, basis.dim, basis.dim))
    new_tail = np.einsum("ik,iab->kab", r, tail)
    ops = basis.ops[:2] + tuple(HermitianOperator(m) for m in new_tail)
    return OperatorBasis(basis.dim, ops)
