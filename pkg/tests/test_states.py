import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmix.groups import Perm, symmetric_group
from qmix.irreps import tensor_rep
from qmix.states import (
    ENTROPY_FUNCTIONALS,
    DensityMatrix,
    bloch_vector,
    commutator,
    double_commutator,
    entropy,
    get_functional,
    partial_trace,
    random_density,
    tensor,
)

S3 = symmetric_group(3)


def rho_triple(seed, d=2):
    rng = np.random.default_rng(seed)
    return [random_density(d, seed=rng) for _ in range(3)]


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            DensityMatrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            DensityMatrix(np.diag([1.5, -0.5]).astype(complex))

    def test_pure_normalizes(self):
        rho = DensityMatrix.pure([2, 0])
        assert_allclose(rho.mat, [[1, 0], [0, 0]], atol=0)
        assert abs(rho.purity() - 1) < 1e-12

    def test_from_probs(self):
        rho = DensityMatrix.from_probs([0.75, 0.25])
        assert_allclose(rho.eigenvalues(), [0.25, 0.75], atol=1e-15)
        with pytest.raises(ValueError):
            DensityMatrix.from_probs([0.5, 0.6])

    def test_bloch_round_trip(self):
        v = (0.3, -0.4, 0.5)
        rho = DensityMatrix.from_bloch(*v)
        assert_allclose(bloch_vector(rho), v, atol=1e-12)
        with pytest.raises(ValueError):
            DensityMatrix.from_bloch(1.0, 1.0, 0.0)

    def test_bloch_needs_qubit(self):
        with pytest.raises(ValueError):
            bloch_vector(DensityMatrix.maximally_mixed(3))

    def test_json_round_trip(self):
        rho = random_density(3, seed=4)
        again = DensityMatrix.from_json(rho.to_json())
        assert_allclose(again.mat, rho.mat, atol=0)


class TestTensorAndTrace:
    def test_unit_factor(self):
        rho = random_density(3, seed=0)
        unit = DensityMatrix(np.array([[1.0 + 0j]]))
        assert_allclose(tensor([rho, unit]).mat, rho.mat, atol=0)

    def test_pure_product(self):
        zero = DensityMatrix.pure([1, 0])
        one = DensityMatrix.pure([0, 1])
        prod = tensor([zero, one]).mat
        expect = np.zeros((4, 4))
        expect[1, 1] = 1
        assert_allclose(prod, expect, atol=0)

    def test_trace_multiplies(self):
        states = rho_triple(1, d=3)
        assert abs(np.trace(tensor(states).mat) - 1) < 1e-12

    def test_size_cap(self):
        big = DensityMatrix.maximally_mixed(20)
        with pytest.raises(ValueError):
            tensor([big, big, big])

    def test_keep_first_factor(self):
        states = rho_triple(2, d=2)
        out = partial_trace(tensor(states).mat, {1}, 2, 3)
        assert_allclose(out, states[0].mat, atol=1e-14)

    def test_keep_set_multiple(self):
        states = rho_triple(3, d=2)
        out = partial_trace(tensor(states).mat, {1, 3}, 2, 3)
        assert_allclose(out, np.kron(states[0].mat, states[2].mat), atol=1e-14)

    def test_trace_preserving_linear(self):
        rng = np.random.default_rng(5)
        A = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        B = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        out = partial_trace(2.0 * A + B, {2}, 2, 3)
        assert_allclose(out, 2.0 * partial_trace(A, {2}, 2, 3) + partial_trace(B, {2}, 2, 3),
                        atol=1e-12)
        assert abs(np.trace(out) - np.trace(2.0 * A + B)) < 1e-12

    def test_bad_subsystem(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(8), {4}, 2, 3)
        with pytest.raises(ValueError):
            partial_trace(np.eye(8), set(), 2, 3)

    def test_conjugation_permutes_factors(self):
        states = rho_triple(6, d=2)
        big = tensor(states).mat
        Q2 = tensor_rep(Perm((3, 1, 2)), 2)
        moved = Q2 @ big @ Q2.conj().T
        assert_allclose(moved, tensor([states[1], states[2], states[0]]).mat, atol=1e-14)


class TestContractionOracles:
    """Single permutation-pair contractions against their closed forms."""

    def setup_method(self):
        self.states = rho_triple(7, d=3)
        self.big = tensor(self.states).mat
        self.Q = [tensor_rep(S3.perms[g], 3) for g in S3.elements]

    def contract(self, a, b):
        return partial_trace(self.Q[a] @ self.big @ self.Q[b].conj().T, {1}, 3, 3)

    def test_identity_pair(self):
        assert_allclose(self.contract(0, 0), self.states[0].mat, atol=1e-13)

    def test_transposition_pair(self):
        r1, r2, r3 = (s.mat for s in self.states)
        expect = r1 * np.trace(r2 @ r3)
        assert_allclose(self.contract(3, 0), expect, atol=1e-13)

    def test_cycle_pair(self):
        r1, r2, r3 = (s.mat for s in self.states)
        assert_allclose(self.contract(1, 0), r2 @ r3 @ r1, atol=1e-13)


class TestCommutators:
    def test_self_commutator(self):
        A = random_density(4, seed=8).mat
        assert_allclose(commutator(A, A), np.zeros((4, 4)), atol=1e-15)

    def test_jacobi(self):
        rng = np.random.default_rng(9)
        A, B, C = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
        total = (double_commutator(A, B, C) + double_commutator(B, C, A)
                 + double_commutator(C, A, B))
        assert_allclose(total, np.zeros((4, 4)), atol=1e-12)

    def test_expansion_coefficients(self):
        # [r1,[r2,r3]] over the six orderings r_i r_j r_k
        rng = np.random.default_rng(10)
        r1, r2, r3 = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
                      for _ in range(3))
        orderings = [r1 @ r2 @ r3, r1 @ r3 @ r2, r2 @ r1 @ r3,
                     r2 @ r3 @ r1, r3 @ r1 @ r2, r3 @ r2 @ r1]
        first = sum(c * M for c, M in zip([1, -1, 0, -1, 0, 1], orderings))
        assert_allclose(double_commutator(r1, r2, r3), first, atol=1e-12)
        second = sum(c * M for c, M in zip([1, 0, -1, 0, -1, 1], orderings))
        assert_allclose(commutator(commutator(r1, r2), r3), second, atol=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            commutator(np.eye(2), np.eye(3))


class TestRandomDensity:
    def test_rank_one_is_pure(self):
        rho = random_density(4, rank=1, seed=11)
        assert abs(rho.purity() - 1) < 1e-10

    def test_seed_reproducible(self):
        a = random_density(3, seed=12)
        b = random_density(3, seed=12)
        assert_allclose(a.mat, b.mat, atol=0)

    def test_rank_bounds(self):
        with pytest.raises(ValueError):
            random_density(2, rank=3, seed=0)

    def test_mean_bloch_vanishes(self):
        rng = np.random.default_rng(13)
        acc = np.zeros(3)
        n = 10_000
        for _ in range(n):
            acc += bloch_vector(random_density(2, seed=rng))
        assert np.linalg.norm(acc / n) < 0.05


class TestEntropies:
    def test_pure_von_neumann(self):
        f = get_functional("von-neumann")
        assert abs(entropy(f, DensityMatrix.pure([1, 1j]))) < 1e-10

    def test_maximally_mixed(self):
        f = get_functional("von-neumann")
        assert abs(entropy(f, DensityMatrix.maximally_mixed(2)) - np.log(2)) < 1e-12

    def test_diagonal_oracle(self):
        rho = DensityMatrix.from_probs([0.75, 0.25])
        expect = -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))
        assert abs(entropy(get_functional("von-neumann"), rho) - expect) < 1e-12
        assert abs(entropy(get_functional("renyi-2"), rho) + np.log(0.625)) < 1e-12
        assert abs(entropy(get_functional("renyi-0.5"), rho)
                   - 2 * np.log(np.sqrt(0.75) + np.sqrt(0.25))) < 1e-12
        assert abs(entropy(get_functional("neg-purity"), rho) + 0.625) < 1e-12

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            get_functional("tsallis")

    def test_registry_contents(self):
        assert set(ENTROPY_FUNCTIONALS) == {"von-neumann", "renyi-0.5",
                                            "renyi-2", "neg-purity"}

    def test_renyi2_concavity_guard(self):
        # renyi-2 is concave only on qubits; the registry records that
        assert get_functional("renyi-2").concave_max_dim == 2
        assert get_functional("von-neumann").concave_max_dim is None

    @pytest.mark.parametrize("name", sorted(ENTROPY_FUNCTIONALS))
    def test_concavity_spot_check(self, name):
        f = get_functional(name)
        rng = np.random.default_rng(hash(name) % 2**32)
        dims = [2] if f.concave_max_dim == 2 else [2, 3]
        for d in dims:
            for _ in range(300):
                rho, sigma = random_density(d, seed=rng), random_density(d, seed=rng)
                lam = rng.uniform()
                mix = DensityMatrix(lam * rho.mat + (1 - lam) * sigma.mat)
                gap = entropy(f, mix) - lam * entropy(f, rho) - (1 - lam) * entropy(f, sigma)
                assert gap >= -1e-9

    def test_renyi2_guard_is_conservative(self):
        # beyond qubits renyi-2 concavity is not certified, so the guarded
        # spot check above skips d=3; empirically the gap still looks
        # non-negative there, which the unasserted scan machinery explores
        f = get_functional("renyi-2")
        rng = np.random.default_rng(14)
        gaps = []
        for _ in range(200):
            rho, sigma = random_density(3, seed=rng), random_density(3, seed=rng)
            lam = rng.uniform()
            mix = DensityMatrix(lam * rho.mat + (1 - lam) * sigma.mat)
            gaps.append(entropy(f, mix) - lam * entropy(f, rho)
                        - (1 - lam) * entropy(f, sigma))
        # record-keeping only: no assertion on the open regime beyond finiteness
        assert np.isfinite(gaps).all()
