"""Closed-form reference model and random-instance generators.

The reference model is two qubits with H_S = (omega_S/2) sigma_z,
H_B = (omega_B/2) sigma_z and the exchange interaction

    H_I = lambda (sigma_+ x sigma_- + sigma_- x sigma_+),

in a global Gibbs state at inverse temperature beta. The raising/lowering
convention is sigma_pm = (sigma_x pm i sigma_y)/2 throughout the package;
under it the two-magnon gap is eta = sqrt(Delta_minus^2 + lambda^2) and the
Hamiltonian weights are h_S = omega_S/sqrt(2), h_B = omega_B/sqrt(2),
h_I = sqrt(2) lambda, h_SB = sqrt(omega_S^2 + omega_B^2 + 2 lambda^2),
h_chi = 1. Every closed-form constant here was re-derived under this single
convention and frozen against the direct-diagonalization oracle in the test
suite.

Samplers take an explicit ``numpy.random.Generator``; PCG64 streams are
stable across platforms, so fixed seeds give bit-identical instances.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .correlation import BipartiteSystem
from .exceptions import ValidationError
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    eig_hermitian,
    tensor_product,
)

__all__ = [
    "PAULI_X", "PAULI_Y", "PAULI_Z", "SIGMA_PLUS", "SIGMA_MINUS",
    "TwoQubitXYParams",
    "TwoQubitClosedForm",
    "build_two_qubit_xy",
    "closed_form",
    "gue_sample",
    "sample_gibbs",
    "sample_passive_pair",
    "sample_inverted_pair",
    "sample_pure",
    "sample_full_rank",
    "sample_bipartite",
    "write_golden",
    "read_golden",
    "GOLDEN_FORMAT",
    "GOLDEN_VERSION",
]

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
#: sigma_pm = (sigma_x pm i sigma_y)/2 — the package-wide convention.
SIGMA_PLUS = (PAULI_X + 1j * PAULI_Y) / 2.0
SIGMA_MINUS = (PAULI_X - 1j * PAULI_Y) / 2.0


@dataclass(frozen=True)
class TwoQubitXYParams:
    """Parameters of the two-qubit exchange model (omega_S >= omega_B >= 0)."""

    omega_S: float
    omega_B: float
    lam: float
    beta: float

    def __post_init__(self):
        if not (self.omega_S >= self.omega_B >= 0.0):
            raise ValidationError(
                f"need omega_S >= omega_B >= 0, got ({self.omega_S}, {self.omega_B})"
            )
        if not (self.lam > 0.0):
            raise ValidationError(f"coupling must be positive, got {self.lam!r}")
        for name in ("omega_S", "omega_B", "lam", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")


@dataclass(frozen=True)
class TwoQubitClosedForm:
    """Analytic spectrum, marginal populations and local temperatures.

    ``E`` is (Delta_plus, eta, -eta, -Delta_plus); mu1 are the populations of
    the S marginal (mu1_plus on the lower level), mu2 of the B marginal.
    ``beta_B`` is NaN with ``omega_B_zero`` set when omega_B = 0.
    """

    Z: float
    E: tuple[float, float, float, float]
    zeta_plus: float
    zeta_minus: float
    mu1_plus: float
    mu1_minus: float
    mu2_plus: float
    mu2_minus: float
    beta_S: float
    beta_B: float
    h_S: float
    h_B: float
    h_I: float
    h_SB: float
    h_chi: float
    omega_B_zero: bool


def build_two_qubit_xy(p: TwoQubitXYParams) -> BipartiteSystem:
    """Assemble the model's BipartiteSystem with the global Gibbs state."""
    h_s = HermitianOperator((p.omega_S / 2.0) * PAULI_Z)
    h_b = HermitianOperator((p.omega_B / 2.0) * PAULI_Z)
    h_i = HermitianOperator(
        p.lam * (tensor_product(SIGMA_PLUS, SIGMA_MINUS) + tensor_product(SIGMA_MINUS, SIGMA_PLUS))
    )
    h_sb = HermitianOperator(
        tensor_product(h_s, np.eye(2)) + tensor_product(np.eye(2), h_b) + h_i.matrix
    )
    spec = eig_hermitian(h_sb)
    w = -p.beta * spec.eigenvalues
    w -= w.max()
    probs = np.exp(w) / float(np.sum(np.exp(w)))
    rho = DensityMatrix.from_spectrum(probs, spec.eigenvectors)
    return BipartiteSystem(2, 2, h_s, h_b, h_i, rho)


def closed_form(p: TwoQubitXYParams) -> TwoQubitClosedForm:
    """Analytic solution of the model under the sigma_pm/2 convention."""
    d_plus = (p.omega_S + p.omega_B) / 2.0
    d_minus = (p.omega_S - p.omega_B) / 2.0
    eta = math.sqrt(d_minus**2 + p.lam**2)
    b = p.beta
    z = 2.0 * (math.cosh(b * d_plus) + math.cosh(b * eta))
    zeta_plus = math.sqrt((1.0 + d_minus / eta) / 2.0)
    zeta_minus = math.sqrt((1.0 - d_minus / eta) / 2.0)
    ratio = d_minus / eta
    cosh_e, sinh_e = math.cosh(b * eta), math.sinh(b * eta)
    mu1_plus = (math.exp(b * d_plus) + cosh_e + ratio * sinh_e) / z
    mu1_minus = (math.exp(-b * d_plus) + cosh_e - ratio * sinh_e) / z
    mu2_plus = (math.exp(-b * d_plus) + cosh_e + ratio * sinh_e) / z
    mu2_minus = (math.exp(b * d_plus) + cosh_e - ratio * sinh_e) / z
    beta_s = math.log(mu1_plus / mu1_minus) / p.omega_S if p.omega_S > 0 else math.nan
    omega_b_zero = p.omega_B == 0.0
    beta_b = math.nan if omega_b_zero else math.log(mu2_minus / mu2_plus) / p.omega_B
    return TwoQubitClosedForm(
        Z=z,
        E=(d_plus, eta, -eta, -d_plus),
        zeta_plus=zeta_plus,
        zeta_minus=zeta_minus,
        mu1_plus=mu1_plus,
        mu1_minus=mu1_minus,
        mu2_plus=mu2_plus,
        mu2_minus=mu2_minus,
        beta_S=beta_s,
        beta_B=beta_b,
        h_S=p.omega_S / math.sqrt(2.0),
        h_B=p.omega_B / math.sqrt(2.0),
        h_I=math.sqrt(2.0) * p.lam,
        h_SB=math.sqrt(p.omega_S**2 + p.omega_B**2 + 2.0 * p.lam**2),
        h_chi=1.0,
        omega_B_zero=omega_b_zero,
    )


def gue_sample(d: int, rng: np.random.Generator) -> HermitianOperator:
    """A Gaussian-unitary-ensemble Hermitian matrix (entries O(1))."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return HermitianOperator((g + g.conj().T) / 2.0)


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def sample_gibbs(d: int, beta: float, rng: np.random.Generator) -> tuple[HermitianOperator, DensityMatrix]:
    """Random GUE Hamiltonian and its Gibbs state at inverse temperature beta."""
    if d < 2:
        raise ValidationError("dimension must be at least 2")
    h = gue_sample(d, rng)
    spec = eig_hermitian(h)
    w = -beta * spec.eigenvalues
    w -= w.max()
    probs = np.exp(w) / float(np.sum(np.exp(w)))
    return h, DensityMatrix.from_spectrum(probs, spec.eigenvectors)


def sample_passive_pair(d: int, rng: np.random.Generator) -> tuple[HermitianOperator, DensityMatrix]:
    """Commuting (H, rho) with populations non-increasing along energy."""
    if d < 2:
        raise ValidationError("dimension must be at least 2")
    energies = np.sort(rng.normal(scale=2.0, size=d))
    probs = np.sort(rng.dirichlet(np.ones(d)))[::-1]
    probs = (probs + 1e-9) / (1.0 + d * 1e-9)  # full rank, ordering preserved
    u = _haar_unitary(d, rng)
    h = HermitianOperator((u * energies) @ u.conj().T)
    rho = DensityMatrix.from_spectrum(probs, u)
    return h, rho


def sample_inverted_pair(d: int, rng: np.random.Generator) -> tuple[HermitianOperator, DensityMatrix]:
    """Commuting (H, rho) with populations sorted ascending in energy.

    Fully population-inverted, hence never passive for nondegenerate spectra.
    """
    if d < 2:
        raise ValidationError("dimension must be at least 2")
    energies = np.sort(rng.normal(scale=2.0, size=d))
    probs = np.sort(rng.dirichlet(np.ones(d)))
    probs = (probs + 1e-9) / (1.0 + d * 1e-9)  # full rank, ordering preserved
    u = _haar_unitary(d, rng)
    h = HermitianOperator((u * energies) @ u.conj().T)
    rho = DensityMatrix.from_spectrum(probs, u)
    return h, rho


def sample_pure(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-random pure state."""
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


#: Identity-mixing weight of sample_full_rank; keeps min eigenvalue >= FLOOR/d.
FULL_RANK_FLOOR = 1e-3


def sample_full_rank(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank state: a pure-state ensemble mixed with I/d.

    The identity floor guarantees min eigenvalue >= FULL_RANK_FLOOR/d, so
    logarithms never clip and finite-difference probes stay inside the cone.
    """
    weights = rng.dirichlet(np.ones(d))
    mix = np.zeros((d, d), dtype=complex)
    for w in weights:
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v /= np.linalg.norm(v)
        mix += w * np.outer(v, v.conj())
    rho = (1.0 - FULL_RANK_FLOOR) * mix + FULL_RANK_FLOOR * np.eye(d) / d
    return DensityMatrix(rho)


def sample_bipartite(
    d_S: int, d_B: int, coupling_scale: float, rng: np.random.Generator
) -> BipartiteSystem:
    """Random bipartite system: local GUE Hamiltonians, scaled GUE interaction
    and a generic correlated full-rank joint state."""
    h_s = gue_sample(d_S, rng)
    h_b = gue_sample(d_B, rng)
    h_i = HermitianOperator(coupling_scale * gue_sample(d_S * d_B, rng).matrix)
    rho = sample_full_rank(d_S * d_B, rng)
    return BipartiteSystem(d_S, d_B, h_s, h_b, h_i, rho)


# --- golden-file records -----------------------------------------------------

GOLDEN_FORMAT = "two-qubit-xy-closed-form"
GOLDEN_VERSION = 1


def write_golden(path, records: list[dict]) -> None:
    """Write versioned closed-form records as JSON lines.

    The first line is a header identifying format and version; each following
    line holds one ``{"params": {...}, "values": {...}}`` record.
    """
    lines = [json.dumps({"format": GOLDEN_FORMAT, "version": GOLDEN_VERSION})]
    for rec in records:
        lines.append(json.dumps(rec, sort_keys=True))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_golden(path) -> list[dict]:
    """Read and version-check a golden file written by :func:`write_golden`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ValidationError(f"empty golden file {path}")
    header = json.loads(lines[0])
    if header.get("format") != GOLDEN_FORMAT or header.get("version") != GOLDEN_VERSION:
        raise ValidationError(f"unsupported golden file header {header!r}")
    return [json.loads(ln) for ln in lines[1:]]


def golden_record(p: TwoQubitXYParams) -> dict:
    """One golden record: parameters plus every closed-form value."""
    cf = closed_form(p)
    values = asdict(cf)
    values["E"] = list(values["E"])
    return {
        "params": {"omega_S": p.omega_S, "omega_B": p.omega_B, "lam": p.lam, "beta": p.beta},
        "values": values,
    }
