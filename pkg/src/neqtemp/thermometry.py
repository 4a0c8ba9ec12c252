"""Single-system temperature stack.

The central object is the nonequilibrium inverse temperature

    beta = Cov(H, HH) / Var(H),      HH = -log rho,

with covariance and variance taken with respect to the maximally mixed state
I/d. Equivalently beta = -(1/h) Tr[O1 log rho] where O1 is the normalized
traceless Hamiltonian direction and h its weight; both forms are computed
independently here and cross-asserted. On Gibbs states beta recovers the
thermodynamic inverse temperature exactly; beta = 0 for maximally mixed
states and T = 0 for pure states.

The module also provides the generalized-Gibbs decomposition of an arbitrary
full-rank state, the Helmholtz free energy with its coordinate-space
cross-check, passivity testing, and the eigenvalue/eigenprojector variation
split with its conventional and entropic heat/work functionals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import OperatorBasis, expand_state, hamiltonian_unit
from .exceptions import (
    NumericalError,
    RankDeficiencyError,
    StepTooLargeError,
    UndefinedQuantityError,
    ValidationError,
)
from .linalg import (
    DEFAULT_TOLS,
    DensityMatrix,
    HermitianOperator,
    Tolerances,
    eig_hermitian,
    hs_inner,
    matrix_exp,
    matrix_log,
)

__all__ = [
    "TemperatureReport",
    "GeneralizedGibbsForm",
    "VariationSplit",
    "HeatWork",
    "von_neumann_entropy",
    "internal_energy",
    "inverse_temperature",
    "generalized_gibbs_decomposition",
    "reconstruct_generalized_gibbs",
    "helmholtz_free_energy",
    "is_passive",
    "variation_split",
    "heat_and_work",
    "finite_difference_beta",
]

#: |beta| below this is treated as exactly zero for the derived temperature
#: (maximally mixed states produce a covariance at roundoff level, not 0.0).
BETA_ZERO_TOL = 1e-12

#: Default eigenvalue clip for the matrix logarithm. The default only guards
#: exact zeros (clipped or pure spectra); genuinely tiny thermal populations
#: (e.g. e^{-30}) must not be touched or Gibbs consistency is lost.
DEFAULT_CLIP = 1e-300


@dataclass(frozen=True)
class TemperatureReport:
    """Full output of the temperature functional at one state.

    ``beta`` and ``temperature`` are extended reals (``math.inf`` is a legal
    value); they satisfy beta * temperature = 1 whenever both are finite and
    nonzero. ``free_energy`` is NaN when undefined (beta = 0 or T = 0 limits).
    """

    beta: float
    temperature: float
    h: float
    covariance: float
    variance: float
    entropy: float
    internal_energy: float
    free_energy: float
    rank_deficient: bool
    clipped: bool


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S = -Tr[rho log rho] with 0 log 0 := 0; lies in [0, ln d]."""
    w = rho.eigenvalues
    pos = w[w > 0.0]
    return max(0.0, float(-np.sum(pos * np.log(pos))))


def internal_energy(rho: DensityMatrix, H: HermitianOperator) -> float:
    """U = Tr[rho H]."""
    if rho.dim != H.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, Hamiltonian {H.dim}")
    return float(np.trace(rho.matrix @ H.matrix).real)


def inverse_temperature(
    rho: DensityMatrix,
    H: HermitianOperator,
    clip: float = DEFAULT_CLIP,
    tols: Tolerances = DEFAULT_TOLS,
) -> TemperatureReport:
    """Nonequilibrium inverse temperature of (rho, H) with full diagnostics.

    Extended-real semantics:

    * rank-1 (pure) states report temperature exactly 0.0, with beta signed
      infinite according to the sign of the clip-regularized covariance;
    * |beta| <= BETA_ZERO_TOL reports temperature = +inf (maximally mixed
      regime);
    * otherwise temperature = 1/beta.

    :raises DegenerateDirectionError: if H is proportional to the identity.
    """
    O1, h = hamiltonian_unit(H, tols.rank)
    if rho.dim != H.dim:
        raise ValidationError(f"dimension mismatch: state {rho.dim}, Hamiltonian {H.dim}")
    d = rho.dim
    logr = matrix_log(rho, clip)
    L = logr.operator.matrix
    Hm = H.matrix
    tr_h = float(np.trace(Hm).real)
    tr_l = float(np.trace(L).real)
    # Covariance form (moments w.r.t. the maximally mixed state).
    cov = float(np.trace(Hm @ (-L)).real) / d - (tr_h / d) * (-tr_l / d)
    var = float(np.trace(Hm @ Hm).real) / d - (tr_h / d) ** 2
    if var <= 0.0:  # unreachable past hamiltonian_unit, kept as a hard guard
        raise NumericalError("vanishing energy variance")
    beta_cov = cov / var
    # Direct coordinate form, assembled through O1 rather than raw moments.
    beta_dir = -hs_inner(O1, logr.operator) / h
    # Identical algebra, different groupings: allow roundoff amplified by the
    # conditioning of the trace products (huge clipped logs, large d).
    cond = d * float(np.max(np.abs(Hm))) * float(np.max(np.abs(L))) / (h * h)
    scale = max(1.0, abs(beta_cov), cond)
    if abs(beta_cov - beta_dir) > 1e-12 * scale:
        raise NumericalError(
            f"temperature formulas disagree: {beta_cov!r} vs {beta_dir!r}"
        )
    rank_deficient = rho.rank < d
    if rho.rank == 1:
        beta = math.inf if beta_cov >= 0.0 else -math.inf
        temperature = 0.0
    elif abs(beta_cov) <= BETA_ZERO_TOL:
        beta = beta_cov
        temperature = math.inf
    else:
        beta = beta_cov
        temperature = 1.0 / beta_cov
    s = von_neumann_entropy(rho)
    u = internal_energy(rho, H)
    if math.isfinite(temperature) and temperature != 0.0:
        f = u - temperature * s
    else:
        f = math.nan
    return TemperatureReport(
        beta=beta,
        temperature=temperature,
        h=h,
        covariance=cov,
        variance=var,
        entropy=s,
        internal_energy=u,
        free_energy=f,
        rank_deficient=rank_deficient,
        clipped=logr.clipped,
    )


@dataclass(frozen=True)
class GeneralizedGibbsForm:
    """Coefficients of rho = exp(-beta H + sum_i c_i O_i - log_norm I)."""

    beta: float
    c: np.ndarray
    log_norm: float

    def __post_init__(self):
        object.__setattr__(self, "c", np.array(self.c, dtype=float))
        self.c.setflags(write=False)


def generalized_gibbs_decomposition(
    rho: DensityMatrix,
    H: HermitianOperator,
    basis: OperatorBasis,
    clip: float = DEFAULT_CLIP,
) -> GeneralizedGibbsForm:
    """Write a full-rank state in generalized-Gibbs form over ``basis``.

    ``basis[1]`` must be the Hamiltonian direction of H. The coefficients are
    beta from :func:`inverse_temperature` and c_i = Tr[O_i log rho] for
    i >= 2; the normalization is fixed by unit trace of the reconstruction
    (a closed-form expression for the normalization printed alongside the
    original derivation does not satisfy the trace condition and is not used).
    """
    if rho.rank < rho.dim:
        raise RankDeficiencyError("generalized-Gibbs decomposition needs a full-rank state")
    O1, _h = hamiltonian_unit(H)
    if float(np.max(np.abs(basis[1].matrix - O1.matrix))) > 1e-8:
        raise ValidationError("basis[1] must equal the Hamiltonian unit direction of H")
    report = inverse_temperature(rho, H, clip)
    logr = matrix_log(rho, clip).operator
    c = np.array([hs_inner(basis[i], logr) for i in range(2, len(basis))])
    exponent = -report.beta * H.matrix
    for ci, op in zip(c, basis.ops[2:]):
        exponent = exponent + ci * op.matrix
    w = eig_hermitian(HermitianOperator(exponent)).eigenvalues
    m = float(w[-1])
    log_norm = m + math.log(float(np.sum(np.exp(w - m))))
    return GeneralizedGibbsForm(beta=report.beta, c=c, log_norm=log_norm)


def reconstruct_generalized_gibbs(
    form: GeneralizedGibbsForm, H: HermitianOperator, basis: OperatorBasis
) -> np.ndarray:
    """Evaluate exp(-beta H + sum c_i O_i - log_norm I)."""
    exponent = -form.beta * H.matrix - form.log_norm * np.eye(H.dim)
    for ci, op in zip(form.c, basis.ops[2:]):
        exponent = exponent + ci * op.matrix
    return matrix_exp(HermitianOperator(exponent)).matrix


def helmholtz_free_energy(
    rho: DensityMatrix,
    H: HermitianOperator,
    basis: OperatorBasis,
    clip: float = DEFAULT_CLIP,
) -> float:
    """F = U - T S for a full-rank state with nonzero beta.

    Cross-checked internally against the coordinate-space expression
    T * (sum_{i>=2} Tr[O_i log rho] x_i + Tr[log rho]/d) + Tr[H]/d, which is
    the basis-invariant tail sum plus its identity-direction closure.
    """
    if rho.rank < rho.dim:
        raise RankDeficiencyError("free energy evaluation needs a full-rank state")
    report = inverse_temperature(rho, H, clip)
    if not math.isfinite(report.beta) or abs(report.beta) <= BETA_ZERO_TOL:
        raise UndefinedQuantityError("free energy is undefined at beta = 0")
    t = 1.0 / report.beta
    f = report.internal_energy - t * report.entropy
    logr = matrix_log(rho, clip).operator
    coords = expand_state(rho, basis)
    tail = sum(
        hs_inner(basis[i], logr) * coords.x[i] for i in range(2, len(basis))
    )
    d = rho.dim
    f_alt = t * (tail + float(np.trace(logr.matrix).real) / d) + H.trace / d
    if abs(f - f_alt) > 1e-10 * max(1.0, abs(f)):
        raise NumericalError(f"free-energy cross-check failed: {f!r} vs {f_alt!r}")
    return f


def is_passive(rho: DensityMatrix, H: HermitianOperator, tols: Tolerances = DEFAULT_TOLS) -> bool:
    """True iff populations are non-increasing along ascending energy.

    The state must commute with H (block-diagonal across the degenerate
    energy clusters); within a degenerate cluster any population ordering
    counts as passive.
    """
    if rho.dim != H.dim:
        raise ValidationError("dimension mismatch")
    spec = eig_hermitian(H, tols)
    scale = max(float(np.max(np.abs(spec.eigenvalues))), 1e-300)
    clusters = spec.clusters(tols.degeneracy * scale)
    v = spec.eigenvectors
    r = v.conj().T @ rho.matrix @ v
    # Commutation: rho must not mix distinct energy clusters.
    boundaries = np.cumsum([0] + [len(c) for c in clusters])
    for a in range(len(clusters)):
        for b in range(len(clusters)):
            if a == b:
                continue
            block = r[boundaries[a]:boundaries[a + 1], boundaries[b]:boundaries[b + 1]]
            if float(np.max(np.abs(block))) > 1e-10:
                return False
    prev_min = math.inf
    for a in range(len(clusters)):
        block = r[boundaries[a]:boundaries[a + 1], boundaries[a]:boundaries[a + 1]]
        pops = np.linalg.eigvalsh((block + block.conj().T) / 2.0)
        if float(pops[-1]) > prev_min + 1e-12:
            return False
        prev_min = float(pops[0])
    return True


@dataclass(frozen=True)
class VariationSplit:
    """Eigenvalue part and eigenprojector part of a trace-free variation."""

    d_ev: HermitianOperator
    d_ep: HermitianOperator


def variation_split(
    rho: DensityMatrix, drho: HermitianOperator, tols: Tolerances = DEFAULT_TOLS
) -> VariationSplit:
    """Split drho into its eigenvalue and eigenprojector parts w.r.t. rho.

    d_ev = sum_k P_k drho P_k over the degenerate eigenprojector clusters P_k
    of rho; d_ep is the remainder. d_ev carries the entropy change, d_ep the
    purely rotational (isentropic) part.
    """
    if rho.dim != drho.dim:
        raise ValidationError("dimension mismatch")
    tr = float(np.trace(drho.matrix).real)
    if abs(tr) > 1e-8:
        raise ValidationError(f"variation must be trace-free, got Tr drho = {tr!r}")
    scale = max(float(rho.eigenvalues[-1]), 1e-300)
    d_ev = np.zeros_like(drho.matrix)
    for p in rho.spectrum.projectors(tols.degeneracy * scale):
        d_ev += p @ drho.matrix @ p
    d_ev = (d_ev + d_ev.conj().T) / 2.0
    return VariationSplit(
        d_ev=HermitianOperator(d_ev),
        d_ep=HermitianOperator(drho.matrix - d_ev),
    )


@dataclass(frozen=True)
class HeatWork:
    """Conventional and entropic heat/work of a joint (drho, dH) variation.

    The two splits move the same total energy: conventional_heat +
    conventional_work = entropic_heat + entropic_work.
    """

    conventional_heat: float
    conventional_work: float
    entropic_heat: float
    entropic_work: float


def heat_and_work(
    rho: DensityMatrix,
    drho: HermitianOperator,
    H: HermitianOperator,
    dH: HermitianOperator,
    tols: Tolerances = DEFAULT_TOLS,
) -> HeatWork:
    """Conventional (dQ = Tr[drho H], dW = Tr[rho dH]) and entropic split.

    The entropic heat is Tr[d_ev H]: only the eigenvalue part of the state
    variation changes entropy, so only it can carry heat; the eigenprojector
    part is counted as work together with the Hamiltonian variation.
    """
    split = variation_split(rho, drho, tols)
    dq = float(np.trace(drho.matrix @ H.matrix).real)
    dw = float(np.trace(rho.matrix @ dH.matrix).real)
    dq_e = float(np.trace(split.d_ev.matrix @ H.matrix).real)
    dw_e = float(np.trace(split.d_ep.matrix @ H.matrix).real) + dw
    return HeatWork(
        conventional_heat=dq,
        conventional_work=dw,
        entropic_heat=dq_e,
        entropic_work=dw_e,
    )


def finite_difference_beta(
    rho: DensityMatrix,
    H: HermitianOperator,
    basis: OperatorBasis,
    step: float,
    tols: Tolerances = DEFAULT_TOLS,
) -> float:
    """Central-difference dS/dU along the Hamiltonian direction basis[1].

    Perturbing only along O1 holds every other coordinate x_i fixed, so this
    is a direct numerical partial derivative of entropy w.r.t. internal
    energy, the definition the closed-form beta must reproduce.
    """
    if not (step > 0.0):
        raise ValidationError(f"step must be positive, got {step!r}")
    o1 = basis[1].matrix
    states = []
    for sgn in (+1.0, -1.0):
        try:
            states.append(DensityMatrix(rho.matrix + sgn * step * o1, tols))
        except ValidationError as exc:
            raise StepTooLargeError(
                f"perturbed state left the positive cone at step {step!r}: {exc}"
            ) from exc
    s_plus, s_minus = (von_neumann_entropy(s) for s in states)
    u_plus, u_minus = (internal_energy(s, H) for s in states)
    du = u_plus - u_minus
    if du == 0.0:
        raise NumericalError("vanishing energy difference in finite-difference probe")
    return (s_plus - s_minus) / du
