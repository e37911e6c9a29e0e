"""Graph core: hub coefficients, operator builders, lift/restrict, evolution."""
import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import starwalk as sw
from starwalk.graph import collapsed_coefficients

from conftest import random_collapsed_state, random_spec


# ---------------------------------------------------------------------------
# hub_coefficients
# ---------------------------------------------------------------------------

class TestHubCoefficients:
    def test_standard_large_n(self):
        hub = sw.hub_coefficients(10 ** 6)
        assert hub.r == pytest.approx(-1 + 2e-6, abs=1e-15)
        assert hub.t == pytest.approx(2e-6, abs=1e-15)

    def test_degree_two_is_a_swap(self):
        hub = sw.hub_coefficients(2)
        assert abs(hub.r) < 1e-15
        assert hub.t == pytest.approx(1.0, abs=1e-15)

    def test_generalized_satisfies_unitarity(self):
        # oracle: substitute the closed-form r, t into the two unitarity
        # conditions of the degree-N hub
        N = 100
        hub = sw.hub_coefficients(N, x=math.pi / 2, y=0.0)
        assert abs(abs(hub.r) ** 2 + (N - 1) * abs(hub.t) ** 2 - 1) < 1e-12
        assert abs(2 * (hub.r.conjugate() * hub.t).real
                   + (N - 2) * abs(hub.t) ** 2) < 1e-12

    @pytest.mark.parametrize("x", [0.4, math.pi / 2, 2.0, math.pi, 5.0])
    @pytest.mark.parametrize("y", [-0.9, 0.0, 0.7])
    def test_identity_grid(self, x, y):
        if math.cos(x - y) >= 1 - 1e-9:
            pytest.skip("family undefined at cos(x-y)=1")
        hub = sw.hub_coefficients(50, x=x, y=y)
        assert abs(hub.T ** 2 - hub.R_R * hub.R_L - cmath.exp(2j * y)) < 1e-12
        assert abs(abs(hub.R_R) ** 2 + abs(hub.T) ** 2 - 1) < 1e-12
        assert abs(abs(hub.R_L) ** 2 + abs(hub.T) ** 2 - 1) < 1e-12

    def test_copies_shift_reflections(self):
        hub = sw.hub_coefficients(10, M=3)
        assert hub.R_R == pytest.approx(-1 + 2 * 0.3)
        assert hub.R_L == pytest.approx(1 - 2 * 0.3)
        assert hub.T == pytest.approx(2 * math.sqrt(0.3 - 0.09))
        assert float(hub.epsilon_exact) == 0.3

    def test_rejects_bad_inputs(self):
        with pytest.raises(sw.SpecError):
            sw.hub_coefficients(10, M=10)
        with pytest.raises(sw.SpecError):
            sw.hub_coefficients(10, M=11)
        with pytest.raises(sw.SpecError):
            sw.hub_coefficients(10, x=1.0, y=1.0)  # cos(x-y) = 1


# ---------------------------------------------------------------------------
# build_collapsed
# ---------------------------------------------------------------------------

class TestBuildCollapsed:
    @pytest.mark.parametrize("phi", [0.0, 0.7])
    @pytest.mark.parametrize("N", [25, 400])
    def test_grover_matrix_closed_form(self, grover_spec, N, phi):
        eps = 1 / N
        hub = sw.hub_coefficients(N)
        U = sw.build_collapsed(grover_spec, hub, phi).matrix
        w = 2 * math.sqrt(eps - eps * eps)
        expected = np.array([
            [0, 1 - 2 * eps, 0, w],
            [cmath.exp(1j * phi), 0, 0, 0],
            [0, w, 0, 2 * eps - 1],
            [0, 0, -1, 0],
        ], dtype=complex)
        assert np.max(np.abs(U - expected)) < 1e-14

    def test_epsilon_zero_decouples_exactly(self, bolo_spec):
        U = sw.collapsed_matrix(bolo_spec, 0.0, 0.3)
        # off-blocks between {out,in} and the right side vanish identically
        assert np.all(U[2:, :2] == 0)
        assert np.all(U[:2, 2:] == 0)

    def test_bolo_collapsed_unitary(self, bolo_spec):
        hub = sw.hub_coefficients(10 ** 6)
        U = sw.build_collapsed(bolo_spec, hub, 0.0).matrix
        assert U.shape == (7, 7)
        assert np.linalg.norm(U.conj().T @ U - np.eye(7)) < 1e-12

    def test_basis_ordering_contract(self, bolo_spec):
        basis = sw.collapsed_basis(bolo_spec)
        assert basis.labels[:4] == ("out", "in", "0->1", "1->0")
        assert basis.labels[4:] == bolo_spec.interior

    def test_rejects_non_unitary_wiring(self):
        # a 2x2 non-unitary matrix fails at spec validation already
        with pytest.raises(sw.SpecError):
            sw.SubgraphSpec(
                (sw.Vertex("1", ("0->1",), ("1->0",), np.array([[0.5]])),),
                "1", ())


# ---------------------------------------------------------------------------
# build_full
# ---------------------------------------------------------------------------

class TestBuildFull:
    def test_grover_n3_hand_check(self, grover_spec):
        # oracle: write out the six basis images by hand for N=3
        U = sw.build_full(grover_spec, 3, phi=0.0)
        labels = U.basis.labels
        assert labels == ("0->1", "0->2", "0->3", "1->0", "2->0", "3->0")
        r, t = -1 / 3, 2 / 3
        expected = np.zeros((6, 6), dtype=complex)
        for j, col in ((1, 3), (2, 4), (3, 5)):
            for k, row in ((1, 0), (2, 1), (3, 2)):
                expected[row, col] = r if k == j else t
        expected[3, 0] = -1            # marked vertex reflects with phase pi
        expected[4, 1] = 1             # unmarked reflect with phase 0
        expected[5, 2] = 1
        assert np.max(np.abs(U.matrix - expected)) < 1e-15

    def test_degree_two_bounce(self, grover_spec):
        U = sw.build_full(grover_spec, 2, phi=0.0).matrix
        # hub swaps the two edges: |1,0> -> |0,2>, |2,0> -> |0,1>
        b = sw.full_basis(grover_spec, 2, 1)
        assert U[b.index("0->2"), b.index("1->0")] == pytest.approx(1.0)
        assert U[b.index("0->1"), b.index("2->0")] == pytest.approx(1.0)

    def test_bolo_n16_unitary(self, bolo_spec):
        U = sw.build_full(bolo_spec, 16, phi=0.0).matrix
        n = U.shape[0]
        assert n == 35  # 2*16 + 3 interior
        assert np.linalg.norm(U.conj().T @ U - np.eye(n)) < 1e-12

    def test_size_guard(self, bolo_spec):
        with pytest.raises(sw.SpecError):
            sw.build_full(bolo_spec, 4000)


# ---------------------------------------------------------------------------
# lift / restrict
# ---------------------------------------------------------------------------

class TestLiftRestrict:
    def test_in_state_lifts_to_uniform_sum(self, grover_spec):
        N = 10
        basis = sw.collapsed_basis(grover_spec)
        amp = np.zeros(4, dtype=complex)
        amp[1] = 1.0  # |in>
        lifted = sw.lift_collapsed_state(sw.StateVector(amp, basis), N, 1)
        for j in range(2, N + 1):
            assert lifted.amplitude(f"{j}->0") == pytest.approx(1 / math.sqrt(N - 1))
        assert lifted.amplitude("1->0") == 0

    def test_marked_edge_state_unchanged(self, grover_spec):
        basis = sw.collapsed_basis(grover_spec)
        amp = np.zeros(4, dtype=complex)
        amp[2] = 1.0  # |0,1>
        lifted = sw.lift_collapsed_state(sw.StateVector(amp, basis), 10, 1)
        assert lifted.amplitude("0->1") == pytest.approx(1.0)

    def test_roundtrip_identity(self, bolo_spec):
        rng = np.random.default_rng(0)
        s = random_collapsed_state(rng, bolo_spec)
        lifted = sw.lift_collapsed_state(s, 12, 2)
        back, leak = sw.restrict_full_state(lifted)
        assert leak < 1e-12
        assert np.max(np.abs(back.amplitudes - s.amplitudes)) < 1e-12

    def test_inner_products_preserved(self, bolo_spec):
        rng = np.random.default_rng(1)
        s1 = random_collapsed_state(rng, bolo_spec)
        s2 = random_collapsed_state(rng, bolo_spec)
        l1 = sw.lift_collapsed_state(s1, 9, 1)
        l2 = sw.lift_collapsed_state(s2, 9, 1)
        assert np.vdot(l1.amplitudes, l2.amplitudes) == pytest.approx(
            np.vdot(s1.amplitudes, s2.amplitudes), abs=1e-12)

    def test_50_step_equivalence(self, bolo_spec):
        N, M = 8, 1
        hub = sw.hub_coefficients(N, M=M)
        Uc = sw.build_collapsed(bolo_spec, hub, 0.0)
        Uf = sw.build_full(bolo_spec, N, M=M, phi=0.0)
        rng = np.random.default_rng(2)
        sc = random_collapsed_state(rng, bolo_spec)
        sf = sw.lift_collapsed_state(sc, N, M)
        sc50 = sw.evolve(Uc, sc, 50)
        sf50 = sw.evolve(Uf, sf, 50)
        back, leak = sw.restrict_full_state(sf50)
        assert leak < 1e-10
        assert np.max(np.abs(back.amplitudes - sc50.amplitudes)) < 1e-10

    def test_asymmetric_state_reports_leakage(self, grover_spec):
        N = 5
        basis = sw.full_basis(grover_spec, N, 1)
        amp = np.zeros(len(basis), dtype=complex)
        amp[basis.index("2->0")] = 1.0  # one unmarked edge only: not symmetric
        restricted, leak = sw.restrict_full_state(
            sw.StateVector(amp, basis), M=1)
        # symmetric component is 1/sqrt(N-1) of |in>; the rest leaks
        assert abs(restricted.amplitudes[1]) == pytest.approx(1 / math.sqrt(N - 1))
        assert leak == pytest.approx(math.sqrt(1 - 1 / (N - 1)), abs=1e-12)


# ---------------------------------------------------------------------------
# apply / evolve
# ---------------------------------------------------------------------------

class TestEvolution:
    def test_zero_steps_is_identity(self, grover_spec):
        hub = sw.hub_coefficients(100)
        U = sw.build_collapsed(grover_spec, hub, 0.0)
        rng = np.random.default_rng(3)
        s = random_collapsed_state(rng, grover_spec)
        out = sw.evolve(U, s, 0)
        assert np.array_equal(out.amplitudes, s.amplitudes)

    def test_basis_mismatch_rejected(self, grover_spec, bolo_spec):
        hub = sw.hub_coefficients(100)
        U = sw.build_collapsed(grover_spec, hub, 0.0)
        rng = np.random.default_rng(4)
        s = random_collapsed_state(rng, bolo_spec)
        with pytest.raises(sw.SpecError):
            sw.apply(U, s)

    def test_grover_rotation_amplitudes(self, grover_spec):
        # starting from the left active vector the walk rotates into the marked
        # edge: amplitudes follow (cos, cos, sin, -sin)(m sqrt(eps))/sqrt(2)
        # up to O(sqrt(eps))  [expanding the eigenvector sum
        #  (-i e^{i m th} + i e^{-i m th})/2 = sin(m th), etc.]
        N = 10 ** 4
        eps = 1 / N
        hub = sw.hub_coefficients(N)
        U = sw.build_collapsed(grover_spec, hub, 0.0)
        l0 = np.zeros(4, dtype=complex)
        l0[:2] = sw.left_active(0.0, +1)
        s = sw.StateVector(l0, sw.collapsed_basis(grover_spec))
        for m in (10, 50, 120):
            out = sw.evolve(U, s, m).amplitudes
            th = m * math.sqrt(eps)
            expected = np.array([math.cos(th), math.cos(th),
                                 math.sin(th), -math.sin(th)]) / math.sqrt(2)
            assert np.max(np.abs(out - expected)) < 5 * math.sqrt(eps)
            mags = np.array([math.cos(th), math.cos(th),
                             math.sin(th), math.sin(th)]) / math.sqrt(2)
            assert np.max(np.abs(np.abs(out) - np.abs(mags))) < 5 * math.sqrt(eps)

    def test_bolo_bound_vector_is_epsilon_independent(self, bolo_spec):
        v = np.zeros(7, dtype=complex)
        basis = sw.collapsed_basis(bolo_spec)
        v[basis.index("A->1")] = 1 / math.sqrt(3)
        v[basis.index("b")] = -1 / math.sqrt(3)
        v[basis.index("1->A")] = 1 / math.sqrt(3)
        s = sw.StateVector(v, basis)
        for N in (10, 1000):
            hub = sw.hub_coefficients(N)  # eps = 1/N, including eps=1e-3
            U = sw.build_collapsed(bolo_spec, hub, 0.0)
            out = sw.evolve(U, s, 7)
            assert np.max(np.abs(out.amplitudes - (-1) ** 7 * v)) < 1e-12

    def test_norm_conservation_long_run(self, bolo_spec):
        hub = sw.hub_coefficients(997)
        U = sw.build_collapsed(bolo_spec, hub, 0.4)
        rng = np.random.default_rng(5)
        s = random_collapsed_state(rng, bolo_spec)
        out = sw.evolve(U, s, 10 ** 4)
        assert abs(out.norm - 1) < 1e-8


# ---------------------------------------------------------------------------
# Properties over random specs
# ---------------------------------------------------------------------------

class TestRandomSpecProperties:
    @given(st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_unitarity_of_both_builders(self, seed):
        rng = np.random.default_rng(seed)
        spec = random_spec(rng)
        N = int(rng.integers(3, 20))
        M = int(rng.integers(1, N))
        phi = float(rng.uniform(0, 2 * np.pi))
        hub = sw.hub_coefficients(N, M=M)
        d = spec.dim_collapsed
        Uc = sw.build_collapsed(spec, hub, phi).matrix
        assert np.linalg.norm(Uc.conj().T @ Uc - np.eye(d)) < 1e-10
        Uf = sw.build_full(spec, N, M=M, phi=phi).matrix
        n = Uf.shape[0]
        assert np.linalg.norm(Uf.conj().T @ Uf - np.eye(n)) < 1e-10

    @pytest.mark.parametrize("N", [4, 8])
    @pytest.mark.parametrize("M", [1, 2])
    def test_collapse_correctness(self, N, M):
        rng = np.random.default_rng(100 * N + M)
        spec = random_spec(rng)
        phi = 0.9
        hub = sw.hub_coefficients(N, M=M)
        Uc = sw.build_collapsed(spec, hub, phi)
        Uf = sw.build_full(spec, N, M=M, phi=phi)
        sc = random_collapsed_state(rng, spec)
        sf = sw.lift_collapsed_state(sc, N, M)
        for _ in range(200):
            sc = sw.apply(Uc, sc)
            sf = sw.apply(Uf, sf)
            restricted, leak = sw.restrict_full_state(sf)
            assert leak < 1e-10
            assert np.linalg.norm(restricted.amplitudes - sc.amplitudes) < 1e-10


# ---------------------------------------------------------------------------
# Spec JSON handling
# ---------------------------------------------------------------------------

class TestSpecSerialization:
    def test_roundtrip(self, bolo_spec, tmp_path):
        path = tmp_path / "bolo_copy.json"
        path.write_text(json.dumps(bolo_spec.to_dict()))
        again = sw.load_spec(str(path))
        assert again.interior == bolo_spec.interior
        for v1, v2 in zip(bolo_spec.vertices, again.vertices):
            assert np.array_equal(v1.matrix, v2.matrix)

    def test_bundled_names_resolve(self):
        assert sw.load_spec("grover.json").n_interior == 0
        assert sw.load_spec("bolo").n_interior == 3

    def test_missing_file_is_spec_error(self):
        with pytest.raises(sw.SpecError):
            sw.load_spec("/nonexistent/path.json")

    def test_dangling_interior_rejected(self):
        with pytest.raises(sw.SpecError):
            sw.SubgraphSpec(
                (sw.Vertex("1", ("0->1",), ("1->0",), np.array([[-1.0]])),),
                "1", ("ghost",))

    def test_doubly_consumed_state_rejected(self):
        with pytest.raises(sw.SpecError):
            sw.SubgraphSpec(
                (
                    sw.Vertex("1", ("0->1", "a",), ("1->0", "a"),
                              np.eye(2, dtype=complex)),
                    sw.Vertex("2", ("a",), ("a",), np.array([[1.0]])),
                ),
                "1", ("a",))
