"""Bipartite decomposition and correlation-temperature tests.

The correlation inverse temperature is validated against a from-scratch
term-by-term evaluation built directly from raw numpy eigendecompositions,
and the mutual information against the relative entropy S(rho || rho_S x
rho_B), both independent of the library internals.
"""

import math

import numpy as np
import pytest

from neqtemp.correlation import (
    BipartiteSystem,
    binding_energy,
    chi_unit,
    correlation_inverse_temperature,
    correlation_log_hamiltonian,
    correlation_operator,
    effective_hamiltonians,
    interaction_unit,
    mutual_information,
)
from neqtemp.exceptions import DegenerateDirectionError, NumericalError, ValidationError
from neqtemp.linalg import (
    DensityMatrix,
    HermitianOperator,
    partial_trace,
    tensor_product,
)
from neqtemp.models import TwoQubitXYParams, build_two_qubit_xy, sample_bipartite

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def bell_state():
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1.0 / math.sqrt(2.0)
    return DensityMatrix(np.outer(phi, phi.conj()))


def product_system(rng, d_s=2, d_b=3, coupling=0.4):
    """Random bipartite Hamiltonians with a product full-rank state."""

    def gue(d):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        return HermitianOperator((g + g.conj().T) / 2.0)

    def full_rank(d):
        p = rng.dirichlet(np.ones(d)) + 0.05
        p /= p.sum()
        q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
        return DensityMatrix.from_spectrum(p, q)

    h_i = HermitianOperator(coupling * gue(d_s * d_b).matrix)
    rho = DensityMatrix(tensor_product(full_rank(d_s).matrix, full_rank(d_b).matrix))
    return BipartiteSystem(d_s, d_b, gue(d_s), gue(d_b), h_i, rho)


class TestBipartiteSystem:
    def test_marginals(self):
        rng = np.random.default_rng(2)
        sys = sample_bipartite(2, 3, 0.3, rng)
        np.testing.assert_allclose(
            sys.rho_S.matrix, partial_trace(sys.rho_SB.matrix, (2, 3), 0), atol=1e-12
        )
        np.testing.assert_allclose(
            sys.rho_B.matrix, partial_trace(sys.rho_SB.matrix, (2, 3), 1), atol=1e-12
        )

    def test_total_hamiltonian(self):
        rng = np.random.default_rng(3)
        sys = sample_bipartite(2, 2, 0.3, rng)
        expected = (
            tensor_product(sys.H_S.matrix, np.eye(2))
            + tensor_product(np.eye(2), sys.H_B.matrix)
            + sys.H_I.matrix
        )
        np.testing.assert_allclose(sys.H_SB().matrix, expected, atol=1e-13)

    def test_dimension_validation(self):
        rho = DensityMatrix(np.eye(4) / 4.0)
        h2 = HermitianOperator(SZ)
        h4 = HermitianOperator(np.zeros((4, 4)))
        with pytest.raises(ValidationError):
            BipartiteSystem(2, 3, h2, h2, h4, rho)


class TestEffectiveHamiltonians:
    def test_zero_mean_conditions(self):
        # The recentered interaction must have vanishing partner-averaged
        # means on both sides and a vanishing full mean.
        rng = np.random.default_rng(5)
        for _ in range(10):
            sys = sample_bipartite(2, 3, 0.5, rng)
            eff = effective_hamiltonians(sys)
            hi = eff.H_I_eff.matrix
            mean_s = partial_trace(sys.embed_B(sys.rho_B.matrix) @ hi, (2, 3), 0)
            mean_b = partial_trace(sys.embed_S(sys.rho_S.matrix) @ hi, (2, 3), 1)
            assert np.max(np.abs(mean_s)) < 1e-12
            assert np.max(np.abs(mean_b)) < 1e-12

    def test_decomposition_reassembles_total(self):
        rng = np.random.default_rng(6)
        sys = sample_bipartite(2, 2, 0.5, rng)
        eff = effective_hamiltonians(sys)
        total = (
            tensor_product(eff.H_S_eff.matrix, np.eye(2))
            + tensor_product(np.eye(2), eff.H_B_eff.matrix)
            + eff.H_I_eff.matrix
        )
        # Effective splitting shifts pieces around but must preserve the sum
        # up to the doubly-counted scalar mean.
        diff = total - sys.H_SB().matrix
        off = diff - (np.trace(diff) / 4.0) * np.eye(4)
        assert np.max(np.abs(off)) < 1e-12

    def test_no_interaction_is_identity_map(self):
        rng = np.random.default_rng(7)
        sys = sample_bipartite(2, 2, 0.0, rng)
        eff = effective_hamiltonians(sys)
        np.testing.assert_allclose(eff.H_S_eff.matrix, sys.H_S.matrix, atol=1e-13)
        np.testing.assert_allclose(eff.H_B_eff.matrix, sys.H_B.matrix, atol=1e-13)


class TestCorrelationOperator:
    def test_bell_chi_entries(self):
        rho = bell_state()
        rng = np.random.default_rng(8)
        sys = BipartiteSystem(
            2, 2,
            HermitianOperator(SZ), HermitianOperator(SZ),
            HermitianOperator(0.1 * tensor_product(SX, SX)),
            rho,
        )
        chi = correlation_operator(sys).matrix
        # Marginals are I/2, so chi = |Phi+><Phi+| - I/4: coherence 1/2 on the
        # antidiagonal corners, 1/4 on the outer diagonal, -1/4 inner.
        assert chi[0, 3] == pytest.approx(0.5)
        assert chi[0, 0] == pytest.approx(0.25)
        assert chi[1, 1] == pytest.approx(-0.25)

    def test_partial_traces_vanish(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            sys = sample_bipartite(2, 3, 0.5, rng)
            chi = correlation_operator(sys).matrix
            assert np.max(np.abs(partial_trace(chi, (2, 3), 0))) < 1e-10
            assert np.max(np.abs(partial_trace(chi, (2, 3), 1))) < 1e-10

    def test_product_state_zero(self):
        rng = np.random.default_rng(10)
        sys = product_system(rng)
        assert np.max(np.abs(correlation_operator(sys).matrix)) < 1e-12


class TestBindingEnergyMutualInformation:
    def test_binding_energy_direct(self):
        rng = np.random.default_rng(11)
        sys = sample_bipartite(2, 2, 0.7, rng)
        chi = sys.rho_SB.matrix - tensor_product(sys.rho_S.matrix, sys.rho_B.matrix)
        expected = np.trace(chi @ sys.H_I.matrix).real
        assert binding_energy(sys) == pytest.approx(expected, abs=1e-12)

    def test_mutual_information_bell(self):
        sys = BipartiteSystem(
            2, 2,
            HermitianOperator(SZ), HermitianOperator(SZ),
            HermitianOperator(0.1 * tensor_product(SX, SX)),
            bell_state(),
        )
        assert mutual_information(sys) == pytest.approx(2.0 * math.log(2.0), rel=1e-12)

    def test_mutual_information_relative_entropy_oracle(self):
        # S_chi must equal S(rho || rho_S x rho_B), evaluated here from raw
        # eigendecompositions.
        rng = np.random.default_rng(12)
        for _ in range(10):
            sys = sample_bipartite(2, 3, 0.5, rng)
            rho = sys.rho_SB.matrix
            prod = tensor_product(sys.rho_S.matrix, sys.rho_B.matrix)
            w1, v1 = np.linalg.eigh(rho)
            w2, v2 = np.linalg.eigh(prod)
            log_prod = (v2 * np.log(w2)) @ v2.conj().T
            rel_ent = float(
                np.sum(w1 * np.log(w1))
                - np.trace(rho @ log_prod).real
            )
            assert mutual_information(sys) == pytest.approx(rel_ent, abs=1e-10)

    def test_nonnegative(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            sys = sample_bipartite(2, 2, 0.5, rng)
            assert mutual_information(sys) >= -1e-12


class TestLogHamiltonian:
    def test_vanishes_on_product_states(self):
        rng = np.random.default_rng(14)
        sys = product_system(rng)
        hh = correlation_log_hamiltonian(sys)
        assert not hh.clipped
        assert np.max(np.abs(hh.operator.matrix)) < 1e-10

    def test_clipped_flag_propagates(self):
        sys = BipartiteSystem(
            2, 2,
            HermitianOperator(SZ), HermitianOperator(SZ),
            HermitianOperator(0.1 * tensor_product(SX, SX)),
            bell_state(),
        )
        assert correlation_log_hamiltonian(sys, clip=1e-9).clipped


class TestUnits:
    def test_two_qubit_weights(self):
        p = TwoQubitXYParams(omega_S=2.0, omega_B=1.0, lam=0.3, beta=1.0)
        sys = build_two_qubit_xy(p)
        _, h_i = interaction_unit(sys)
        assert h_i == pytest.approx(math.sqrt(2.0) * 0.3, rel=1e-10)
        cu = chi_unit(sys)
        assert cu.h_chi == pytest.approx(1.0, abs=1e-12)
        assert cu.overlap_S == pytest.approx(0.0, abs=1e-12)
        assert cu.overlap_B == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(cu.O_chi.matrix, cu.O_I.matrix, atol=1e-12)

    def test_interaction_unit_normalized(self):
        rng = np.random.default_rng(15)
        sys = sample_bipartite(2, 2, 0.6, rng)
        o_i, _ = interaction_unit(sys)
        assert np.trace(o_i.matrix).real == pytest.approx(0.0, abs=1e-12)
        assert np.sum(np.abs(o_i.matrix) ** 2) == pytest.approx(1.0, rel=1e-12)

    def test_zero_interaction_degenerate(self):
        rng = np.random.default_rng(16)
        sys = sample_bipartite(2, 2, 0.0, rng)
        with pytest.raises(DegenerateDirectionError):
            interaction_unit(sys)

    def test_local_interaction_has_no_chi_direction(self):
        # H_I proportional to a purely local S operator leaves nothing after
        # orthogonalization.
        rng = np.random.default_rng(17)
        rho = DensityMatrix(np.eye(4) / 4.0)
        sys = BipartiteSystem(
            2, 2,
            HermitianOperator(0.7 * SZ), HermitianOperator(0.4 * SZ),
            HermitianOperator(0.2 * tensor_product(SZ, np.eye(2))),
            rho,
        )
        with pytest.raises(NumericalError):
            chi_unit(sys)

    def test_chi_orthogonality(self):
        rng = np.random.default_rng(18)
        for _ in range(20):
            sys = sample_bipartite(2, 3, 0.5, rng)
            cu = chi_unit(sys)
            emb_s = sys.embed_S(cu.O_S)
            emb_b = sys.embed_B(cu.O_B)
            assert abs(np.sum(emb_s.conj() * cu.O_chi.matrix).real) < 1e-10
            assert abs(np.sum(emb_b.conj() * cu.O_chi.matrix).real) < 1e-10
            assert np.sum(np.abs(cu.O_chi.matrix) ** 2) == pytest.approx(1.0, rel=1e-10)


class TestCorrelationTemperature:
    def test_term_by_term_oracle(self):
        # Rebuild the full expression from scratch with raw numpy: effective
        # interaction, orthogonalized direction and log Hamiltonian all
        # recomputed independently, then contracted term by term.
        rng = np.random.default_rng(19)
        for _ in range(15):
            d_s, d_b = 2, 3
            sys = sample_bipartite(d_s, d_b, 0.5, rng)
            rho = sys.rho_SB.matrix
            rho_s = partial_trace(rho, (d_s, d_b), 0)
            rho_b = partial_trace(rho, (d_s, d_b), 1)

            def unit(m):
                d = m.shape[0]
                t = m - (np.trace(m) / d) * np.eye(d)
                h = math.sqrt(np.sum(np.abs(t) ** 2).real)
                return t / h, h

            hi = sys.H_I.matrix
            lamb_s = partial_trace(np.kron(np.eye(d_s), rho_b) @ hi, (d_s, d_b), 0)
            lamb_b = partial_trace(np.kron(rho_s, np.eye(d_b)) @ hi, (d_s, d_b), 1)
            mean = np.trace(np.kron(rho_s, rho_b) @ hi).real
            hi_eff = hi - np.kron(lamb_s, np.eye(d_b)) - np.kron(np.eye(d_s), lamb_b) + mean * np.eye(d_s * d_b)
            o_i, h_i = unit(hi_eff)
            o_s, _ = unit(sys.H_S.matrix + lamb_s)
            o_b, _ = unit(sys.H_B.matrix + lamb_b)
            es, eb = np.kron(o_s, np.eye(d_b)), np.kron(np.eye(d_s), o_b)
            c_s = np.sum(o_i.conj() * es).real
            c_b = np.sum(o_i.conj() * eb).real
            h_chi_sq = 1.0 - c_s**2 / d_b - c_b**2 / d_s

            def logm(m):
                w, v = np.linalg.eigh(m)
                return (v * np.log(w)) @ v.conj().T

            hh = -logm(rho) + np.kron(logm(rho_s), np.eye(d_b)) + np.kron(np.eye(d_s), logm(rho_b))
            t_oi = np.sum(o_i.conj() * hh).real
            t_os = np.sum(es.conj() * hh).real
            t_ob = np.sum(eb.conj() * hh).real
            expected = -(t_oi - c_s * t_os / d_b - c_b * t_ob / d_s) / (h_i * h_chi_sq)

            got = correlation_inverse_temperature(sys).beta_chi
            assert got == pytest.approx(expected, abs=1e-10 * max(1.0, abs(expected)))

    def test_product_state_zero(self):
        rng = np.random.default_rng(20)
        for _ in range(10):
            sys = product_system(rng)
            assert abs(correlation_inverse_temperature(sys).beta_chi) < 1e-10

    def test_gibbs_grid_sample(self):
        for beta in (0.2, 1.0, 5.0):
            p = TwoQubitXYParams(omega_S=2.0, omega_B=1.0, lam=0.2, beta=beta)
            sys = build_two_qubit_xy(p)
            report = correlation_inverse_temperature(sys)
            assert report.beta_chi == pytest.approx(-beta, abs=1e-9)

    def test_maximally_entangled_limit(self):
        # Mixing weight p -> 0 drives the correlation temperature to zero
        # from above, so beta_chi grows without bound, monotonically.
        h_s = HermitianOperator(1.0 * SZ / 2.0)
        h_b = HermitianOperator(0.7 * SZ / 2.0)
        h_i = HermitianOperator(0.3 * tensor_product(SX, SX))
        bell = bell_state().matrix
        previous = -math.inf
        for p in (1e-2, 1e-4, 1e-6):
            rho = DensityMatrix((1.0 - p) * bell + p * np.eye(4) / 4.0)
            sys = BipartiteSystem(2, 2, h_s, h_b, h_i, rho)
            beta_chi = correlation_inverse_temperature(sys).beta_chi
            assert beta_chi > previous
            assert beta_chi > 0.0
            previous = beta_chi
        assert previous > 10.0

    def test_report_fields(self):
        rng = np.random.default_rng(21)
        sys = sample_bipartite(2, 2, 0.5, rng)
        report = correlation_inverse_temperature(sys)
        assert report.S_chi >= 0.0
        assert report.h_chi > 0.0
        assert not report.clipped
