"""Bipartite decomposition and the correlation temperature.

A bipartite system carries local Hamiltonians H_S, H_B, an interaction H_I on
the joint space and a joint state rho_SB (S is always the left tensor
factor). The correlation content of the state is chi = rho_SB - rho_S x
rho_B; its energy is the binding energy U_chi = Tr[chi H_I_eff] and its
entropy the mutual information S_chi. The correlation temperature is the
constrained partial derivative dS_chi/dU_chi at fixed local energies,
evaluated in the operator frame frozen at the state:

    beta_chi = -Tr[O_chi HH_I] / (h_I h_chi),

where HH_I = -log rho_SB + log rho_S x I + I x log rho_B is the correlation
part of the log-Hamiltonian, O_I the unit direction of the effective
interaction, and O_chi the component of O_I orthogonal to the local
directions. The 1/h_I factor is the Jacobian dU_chi = h_I h_chi dy_chi of
the coordinate the derivative is taken along; it is required for the
Gibbs-family identity beta_chi = -beta to hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import hamiltonian_unit
from .exceptions import NumericalError, ValidationError
from .linalg import (
    DEFAULT_TOLS,
    DensityMatrix,
    HermitianOperator,
    MatrixLog,
    Tolerances,
    hs_inner,
    matrix_log,
    partial_trace,
    tensor_product,
)
from .thermometry import DEFAULT_CLIP, von_neumann_entropy

__all__ = [
    "BipartiteSystem",
    "EffectiveHamiltonians",
    "ChiUnit",
    "CorrelationReport",
    "effective_hamiltonians",
    "correlation_operator",
    "binding_energy",
    "mutual_information",
    "correlation_log_hamiltonian",
    "interaction_unit",
    "chi_unit",
    "correlation_inverse_temperature",
]


class BipartiteSystem:
    """Bipartite Hamiltonian data and joint state, with cached derived parts.

    Marginals and effective Hamiltonians are computed once at construction;
    instances are immutable afterwards and safe to share.
    """

    __slots__ = (
        "d_S", "d_B", "H_S", "H_B", "H_I", "rho_SB",
        "rho_S", "rho_B", "effective",
    )

    def __init__(
        self,
        d_S: int,
        d_B: int,
        H_S: HermitianOperator,
        H_B: HermitianOperator,
        H_I: HermitianOperator,
        rho_SB: DensityMatrix,
        tols: Tolerances = DEFAULT_TOLS,
    ):
        d_S, d_B = int(d_S), int(d_B)
        if d_S < 2 or d_B < 2:
            raise ValidationError("both factors must have dimension at least 2")
        d = d_S * d_B
        if H_S.dim != d_S or H_B.dim != d_B:
            raise ValidationError("local Hamiltonian dimensions do not match (d_S, d_B)")
        if H_I.dim != d or rho_SB.dim != d:
            raise ValidationError("joint-space dimensions do not match d_S * d_B")
        self.d_S, self.d_B = d_S, d_B
        self.H_S, self.H_B, self.H_I = H_S, H_B, H_I
        self.rho_SB = rho_SB
        self.rho_S = DensityMatrix(partial_trace(rho_SB.matrix, (d_S, d_B), keep=0), tols)
        self.rho_B = DensityMatrix(partial_trace(rho_SB.matrix, (d_S, d_B), keep=1), tols)
        self.effective = _effective_hamiltonians(self)

    @property
    def dim(self) -> int:
        return self.d_S * self.d_B

    def H_SB(self) -> HermitianOperator:
        """Total Hamiltonian H_S x I + I x H_B + H_I on the joint space."""
        total = (
            tensor_product(self.H_S, np.eye(self.d_B))
            + tensor_product(np.eye(self.d_S), self.H_B)
            + self.H_I.matrix
        )
        return HermitianOperator(total)

    def embed_S(self, op: HermitianOperator | np.ndarray) -> np.ndarray:
        """op x I_B on the joint space."""
        return tensor_product(op, np.eye(self.d_B))

    def embed_B(self, op: HermitianOperator | np.ndarray) -> np.ndarray:
        """I_S x op on the joint space."""
        return tensor_product(np.eye(self.d_S), op)


@dataclass(frozen=True)
class EffectiveHamiltonians:
    """Mean-field-shifted local Hamiltonians and the recentered interaction.

    H_S_eff = H_S + Tr_B[(I x rho_B) H_I] and symmetrically for B; H_I_eff is
    H_I with both Lamb-shift-like terms removed and the doubly-averaged scalar
    restored, so that its partner-averaged means vanish exactly.
    """

    H_S_eff: HermitianOperator
    H_B_eff: HermitianOperator
    H_I_eff: HermitianOperator


def _effective_hamiltonians(sys: BipartiteSystem) -> EffectiveHamiltonians:
    dims = (sys.d_S, sys.d_B)
    hi = sys.H_I.matrix
    lamb_S = partial_trace(sys.embed_B(sys.rho_B.matrix) @ hi, dims, keep=0)
    lamb_B = partial_trace(sys.embed_S(sys.rho_S.matrix) @ hi, dims, keep=1)
    mean = float(
        np.trace(tensor_product(sys.rho_S.matrix, sys.rho_B.matrix) @ hi).real
    )
    hi_eff = (
        hi
        - tensor_product(lamb_S, np.eye(sys.d_B))
        - tensor_product(np.eye(sys.d_S), lamb_B)
        + mean * np.eye(sys.dim)
    )
    return EffectiveHamiltonians(
        H_S_eff=HermitianOperator(sys.H_S.matrix + lamb_S),
        H_B_eff=HermitianOperator(sys.H_B.matrix + lamb_B),
        H_I_eff=HermitianOperator(hi_eff),
    )


def effective_hamiltonians(sys: BipartiteSystem) -> EffectiveHamiltonians:
    """Effective local Hamiltonians and recentered interaction of ``sys``."""
    return sys.effective


def correlation_operator(sys: BipartiteSystem) -> HermitianOperator:
    """chi = rho_SB - rho_S x rho_B: traceless with vanishing partial traces."""
    chi = sys.rho_SB.matrix - tensor_product(sys.rho_S.matrix, sys.rho_B.matrix)
    return HermitianOperator(chi)


def binding_energy(sys: BipartiteSystem) -> float:
    """U_chi = Tr[chi H_I_eff], the interaction energy held in correlations.

    Equal to Tr[chi H_I] and to Tr[rho_SB H_SB] - Tr[rho_S x rho_B H_SB]; the
    three expressions are cross-asserted.
    """
    chi = correlation_operator(sys).matrix
    u1 = float(np.trace(chi @ sys.effective.H_I_eff.matrix).real)
    u2 = float(np.trace(chi @ sys.H_I.matrix).real)
    hsb = sys.H_SB().matrix
    prod = tensor_product(sys.rho_S.matrix, sys.rho_B.matrix)
    u3 = float(np.trace(sys.rho_SB.matrix @ hsb).real) - float(np.trace(prod @ hsb).real)
    scale = max(1.0, abs(u1))
    if abs(u1 - u2) > 1e-10 * scale or abs(u1 - u3) > 1e-10 * scale:
        raise NumericalError(
            f"binding-energy expressions disagree: {u1!r}, {u2!r}, {u3!r}"
        )
    return u1


def mutual_information(sys: BipartiteSystem) -> float:
    """S_chi = S(rho_S) + S(rho_B) - S(rho_SB) >= 0."""
    return (
        von_neumann_entropy(sys.rho_S)
        + von_neumann_entropy(sys.rho_B)
        - von_neumann_entropy(sys.rho_SB)
    )


def correlation_log_hamiltonian(sys: BipartiteSystem, clip: float = DEFAULT_CLIP) -> MatrixLog:
    """HH_I = -log rho_SB + log rho_S x I + I x log rho_B.

    Vanishes identically iff the state is the product of its marginals.
    Rank-deficient states are handled through the clip regularization; the
    clipped flag propagates from any of the three logarithms.
    """
    log_sb = matrix_log(sys.rho_SB, clip)
    log_s = matrix_log(sys.rho_S, clip)
    log_b = matrix_log(sys.rho_B, clip)
    m = -log_sb.operator.matrix + sys.embed_S(log_s.operator) + sys.embed_B(log_b.operator)
    return MatrixLog(
        HermitianOperator(m),
        clipped=log_sb.clipped or log_s.clipped or log_b.clipped,
    )


def interaction_unit(sys: BipartiteSystem) -> tuple[HermitianOperator, float]:
    """Unit direction O_I and weight h_I of the effective interaction.

    :raises DegenerateDirectionError: when H_I_eff is proportional to the
        identity (which includes H_I = 0).
    """
    return hamiltonian_unit(sys.effective.H_I_eff)


@dataclass(frozen=True)
class ChiUnit:
    """O_chi and the local-frame data entering every correlation formula.

    ``overlap_S`` and ``overlap_B`` are Tr[O_I (O_S x I)] and
    Tr[O_I (I x O_B)]; h_chi = sqrt(1 - overlap_S^2/d_B - overlap_B^2/d_S)
    measures how much of the interaction direction survives orthogonalization
    against the local directions.
    """

    O_chi: HermitianOperator
    h_chi: float
    O_S: HermitianOperator
    O_B: HermitianOperator
    h_S: float
    h_B: float
    O_I: HermitianOperator
    h_I: float
    overlap_S: float
    overlap_B: float


def chi_unit(sys: BipartiteSystem) -> ChiUnit:
    """Orthogonalize O_I against the embedded local directions.

    Local units are built from the effective local Hamiltonians; overlaps are
    evaluated on the joint space, where the embedded O_S x I has squared norm
    d_B (hence the 1/d_B, 1/d_S weights).

    :raises NumericalError: if the interaction direction lies entirely in the
        local span (h_chi at numerical zero).
    """
    o_i, h_i = interaction_unit(sys)
    o_s, h_s = hamiltonian_unit(sys.effective.H_S_eff)
    o_b, h_b = hamiltonian_unit(sys.effective.H_B_eff)
    emb_s = sys.embed_S(o_s)
    emb_b = sys.embed_B(o_b)
    c_s = hs_inner(o_i, HermitianOperator(emb_s))
    c_b = hs_inner(o_i, HermitianOperator(emb_b))
    h_chi_sq = 1.0 - c_s**2 / sys.d_B - c_b**2 / sys.d_S
    if h_chi_sq <= 1e-20:
        raise NumericalError(
            "interaction direction lies in the span of the local directions; "
            "no correlation direction remains (h_chi ~ 0)"
        )
    h_chi = math.sqrt(h_chi_sq)
    o_chi = HermitianOperator(
        (o_i.matrix - (c_s / sys.d_B) * emb_s - (c_b / sys.d_S) * emb_b) / h_chi
    )
    return ChiUnit(
        O_chi=o_chi, h_chi=h_chi,
        O_S=o_s, O_B=o_b, h_S=h_s, h_B=h_b,
        O_I=o_i, h_I=h_i,
        overlap_S=c_s, overlap_B=c_b,
    )


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation operator, energy, entropy and temperature of a state."""

    chi: HermitianOperator
    U_chi: float
    S_chi: float
    beta_chi: float
    h_I: float
    h_chi: float
    O_I: HermitianOperator
    H_corr: HermitianOperator
    clipped: bool


def correlation_inverse_temperature(
    sys: BipartiteSystem, clip: float = DEFAULT_CLIP
) -> CorrelationReport:
    """Correlation inverse temperature 1/T_chi and full report.

    beta_chi = -(1/(h_I h_chi^2)) (Tr[O_I HH_I]
               - overlap_S Tr[(O_S x I) HH_I]/d_B
               - overlap_B Tr[(I x O_B) HH_I]/d_S)

    which is -Tr[O_chi HH_I]/(h_I h_chi), the constrained partial derivative
    dS_chi/dU_chi at fixed local energies in the frozen operator frame. For a
    globally Gibbs state this evaluates to exactly -beta; for a product state
    HH_I vanishes and beta_chi = 0 (T_chi -> infinity).
    """
    cu = chi_unit(sys)
    log_i = correlation_log_hamiltonian(sys, clip)
    hh = log_i.operator
    t_oi = hs_inner(cu.O_I, hh)
    t_os = hs_inner(HermitianOperator(sys.embed_S(cu.O_S)), hh)
    t_ob = hs_inner(HermitianOperator(sys.embed_B(cu.O_B)), hh)
    beta_chi = -(
        t_oi - cu.overlap_S * t_os / sys.d_B - cu.overlap_B * t_ob / sys.d_S
    ) / (cu.h_I * cu.h_chi**2)
    # Same derivative assembled through the orthogonalized direction itself.
    beta_alt = -hs_inner(cu.O_chi, hh) / (cu.h_I * cu.h_chi)
    if abs(beta_chi - beta_alt) > 1e-12 * max(1.0, abs(beta_chi)):
        raise NumericalError(
            f"correlation-temperature forms disagree: {beta_chi!r} vs {beta_alt!r}"
        )
    return CorrelationReport(
        chi=correlation_operator(sys),
        U_chi=binding_energy(sys),
        S_chi=mutual_information(sys),
        beta_chi=beta_chi,
        h_I=cu.h_I,
        h_chi=cu.h_chi,
        O_I=cu.O_I,
        H_corr=hh,
        clipped=log_i.clipped,
    )
