import numpy as np
import pytest

from iwaops.errors import InternalInvariantViolation
from iwaops.exterior import basis_form, norm, parse_form
from iwaops.nilalgebra import ConnectionTable, StructureTable, levi_civita
from iwaops.ops import adapted_splitting, from_plucker, from_vectors, sample_uniform, transform
from iwaops.torsion import (
    BLOCK_DIMENSIONS,
    LABELS,
    alternation_check,
    classify,
    coupled_stabilizer_element,
    frobenius_integrable_h,
    frobenius_integrable_v,
    intrinsic_torsion,
    naveira_project,
    projector_matrix,
    split_blocks,
    tau_kernel,
    tau_rank,
)


def e_vec(i):
    v = np.zeros(6)
    v[i - 1] = 1.0
    return v


@pytest.fixture(scope="module")
def p56():
    return from_plucker(parse_form("e56"))


class TestIntrinsicTorsion:
    def test_e56_reduced_content(self, connection_f, p56):
        # nabla w has slots 1..4 only, so tau kills the vertical directions;
        # the horizontal block assembles the two self-dual forms.
        t = intrinsic_torsion(p56, connection_f)
        assert np.allclose(t.reduced[:2], 0.0, atol=1e-15)
        assert abs(t.norm() - np.sqrt(2.0)) < 1e-12
        assert t.residual < 1e-14

    def test_flat_connection_gives_zero(self, p56):
        flat = levi_civita(StructureTable.abelian()).as_float()
        t = intrinsic_torsion(p56, flat)
        assert t.norm() == 0.0
        assert classify(p56, flat).active == ()

    def test_orbit_tangency_random(self, connection_f):
        rng = np.random.default_rng(22)
        for _ in range(200):
            t = intrinsic_torsion(sample_uniform(rng), connection_f)
            assert t.residual <= 1e-9 * max(t.norm(), 1e-30)

    def test_norm_matches_raw(self, connection_f):
        rng = np.random.default_rng(23)
        for _ in range(20):
            t = intrinsic_torsion(sample_uniform(rng), connection_f)
            assert abs(t.norm() ** 2 - t.raw.norm_sq()) < 1e-10

    def test_residual_guard_trips_on_bad_table(self, p56):
        # a non-metric "connection" pushes nabla w off the orbit tangent space
        bad = [[[0.0] * 6 for _ in range(6)] for _ in range(6)]
        bad[0][4][4] = 1.0  # (nabla_{e_1} e^5)(e_5) != 0 violates metricity
        with pytest.raises(InternalInvariantViolation):
            intrinsic_torsion(p56, ConnectionTable(bad))


class TestNaveiraProject:
    def test_e56_pure_w4plus(self, connection_f, p56):
        comps = naveira_project(intrinsic_torsion(p56, connection_f))
        assert comps.norms["W4plus"] > 1.0
        for label in LABELS:
            if label != "W4plus":
                assert comps.norms[label] < 1e-12

    def test_reversed_orientation_same_class(self, connection_f, p56):
        comps = naveira_project(intrinsic_torsion(p56.reversed(), connection_f))
        assert comps.norms["W4plus"] > 1.0
        assert comps.norms["W4minus"] < 1e-12

    def test_e13_trace_and_shear(self, connection_f):
        comps = naveira_project(
            intrinsic_torsion(from_plucker(parse_form("e13")), connection_f)
        )
        assert comps.norms["W3"] > 0.5
        assert comps.norms["W5"] > 0.5
        for label in ("W1", "W2", "W4plus", "W4minus", "W6"):
            assert comps.norms[label] < 1e-12

    def test_e15_traceless_vertical_block(self, connection_f):
        # the type-(1,1) vertical block is diag(u/2, -u/2): traceless symmetric
        comps = naveira_project(
            intrinsic_torsion(from_plucker(parse_form("e15")), connection_f)
        )
        assert comps.norms["W2"] > 0.5
        assert comps.norms["W3"] < 1e-12
        assert comps.norms["W4plus"] > 0.1
        assert comps.norms["W4minus"] > 0.1
        assert comps.norms["W5"] > 0.5

    def test_parseval(self, connection_f):
        rng = np.random.default_rng(24)
        for _ in range(100):
            t = intrinsic_torsion(sample_uniform(rng), connection_f)
            comps = naveira_project(t)
            total = sum(v**2 for v in comps.norms.values())
            assert abs(total - t.norm() ** 2) <= 1e-9 * max(t.norm() ** 2, 1.0)

    def test_parts_sum_to_reduced(self, connection_f):
        rng = np.random.default_rng(25)
        t = intrinsic_torsion(sample_uniform(rng), connection_f)
        comps = naveira_project(t)
        assert np.allclose(sum(comps.parts.values()), t.reduced, atol=1e-14)


class TestProjectorAlgebra:
    def test_idempotent_orthogonal_complete(self):
        mats = {label: projector_matrix(label) for label in LABELS}
        for a in LABELS:
            assert np.allclose(mats[a] @ mats[a], mats[a], atol=1e-12)
            for b in LABELS:
                if a < b:
                    assert np.allclose(mats[a] @ mats[b], 0.0, atol=1e-12)
        assert np.allclose(sum(mats.values()), np.eye(48), atol=1e-12)

    def test_dimension_table(self):
        for label in LABELS:
            assert round(float(np.trace(projector_matrix(label)))) == BLOCK_DIMENSIONS[label]
        assert sum(BLOCK_DIMENSIONS.values()) == 48

    def test_random_tensor_parseval(self):
        rng = np.random.default_rng(26)
        for _ in range(200):
            x = rng.standard_normal((6, 2, 4))
            parts = split_blocks(x)
            assert abs(sum(np.sum(v**2) for v in parts.values()) - np.sum(x**2)) < 1e-9

    def test_w3_trace_equals_bracket_horizontal_part(self, iwasawa, connection_f):
        # independent oracle: tr of the vertical block = H-component of [v1, v2]
        rng = np.random.default_rng(27)
        for _ in range(30):
            p = sample_uniform(rng)
            t = intrinsic_torsion(p, connection_f)
            parts = split_blocks(t.reduced)
            bracket = np.zeros(6)
            for k in range(6):
                dk = iwasawa.d_of_generator[k]
                for i in range(6):
                    for j in range(6):
                        bracket[k] -= float(dk(i + 1, j + 1)) * p.v1[i] * p.v2[j]
            s = adapted_splitting(p)
            assert np.allclose(2.0 * parts["W3"][0, 0, :], s.h_frame @ bracket, atol=1e-10)


class TestClassify:
    @pytest.mark.parametrize(
        "lit,expected",
        [
            ("e56", ("W4plus",)),
            ("-1 e56", ("W4plus",)),
            ("e12", ("W5",)),
            ("e34", ("W5",)),
            ("e13", ("W3", "W5")),
            ("e15", ("W2", "W4minus", "W4plus", "W5")),
        ],
    )
    def test_reference_planes(self, connection_f, lit, expected):
        assert classify(from_plucker(parse_form(lit)), connection_f).active == expected

    def test_generic_seed_point(self, connection_f):
        p = sample_uniform(np.random.default_rng(42))
        sig = classify(p, connection_f)
        assert sig.active == tuple(sorted(LABELS))

    def test_signature_gauge_invariant(self, connection_f):
        rng = np.random.default_rng(28)
        p = sample_uniform(rng)
        sig = classify(p, connection_f)
        for _ in range(5):
            a = rng.uniform(0, 2 * np.pi)
            q = from_vectors(
                np.cos(a) * p.v1 + np.sin(a) * p.v2,
                -np.sin(a) * p.v1 + np.cos(a) * p.v2,
            )
            assert classify(q, connection_f).active == sig.active


class TestRankKernel:
    def test_e56(self, connection_f, p56):
        t = intrinsic_torsion(p56, connection_f)
        assert tau_rank(t) == 4
        kernel = tau_kernel(t)
        assert len(kernel) == 2
        span = np.vstack(kernel)
        for v in (e_vec(5), e_vec(6)):
            residual = v - span.T @ (span @ v)
            assert np.linalg.norm(residual) < 1e-10

    def test_generic_full_rank(self, connection_f):
        rng = np.random.default_rng(29)
        for _ in range(20):
            t = intrinsic_torsion(sample_uniform(rng), connection_f)
            assert tau_rank(t) == 6
            assert tau_kernel(t) == []

    def test_abelian_rank_zero(self, p56):
        flat = levi_civita(StructureTable.abelian()).as_float()
        t = intrinsic_torsion(p56, flat)
        assert tau_rank(t) == 0
        assert len(tau_kernel(t)) == 6

    def test_kernel_dimension_consistency(self, connection_f):
        t = intrinsic_torsion(from_plucker(parse_form("e12")), connection_f)
        assert len(tau_kernel(t)) == 6 - tau_rank(t)


class TestIntegrability:
    def test_alternation_vanishes(self, iwasawa, connection_f, p56):
        assert max(alternation_check(p56, connection_f, iwasawa)) < 1e-12
        rng = np.random.default_rng(30)
        for _ in range(50):
            a, b = alternation_check(sample_uniform(rng), connection_f, iwasawa)
            assert max(a, b) < 1e-9

    def test_frobenius_cases(self, iwasawa):
        e12 = from_plucker(parse_form("e12"))
        e56 = from_plucker(parse_form("e56"))
        assert frobenius_integrable_h(e12, iwasawa)
        assert not frobenius_integrable_h(e56, iwasawa)
        assert frobenius_integrable_v(e56, iwasawa)
        assert frobenius_integrable_v(e12, iwasawa)
        e13 = from_plucker(parse_form("e13"))
        assert frobenius_integrable_h(e13, iwasawa)
        assert not frobenius_integrable_v(e13, iwasawa)


class TestStabilizer:
    def test_coupled_rotations_fix_tau(self, connection_f, p56):
        # the coupling sign is pinned here: rotating (beta2, beta3) by theta
        # together with (e5, e6) by theta fixes the whole tensor
        from iwaops.nilalgebra import nabla_form
        from iwaops.ops import form_to_matrix

        raw = nabla_form(connection_f, p56.plucker)
        t0 = np.stack([form_to_matrix(f) for f in raw.frame_forms])
        rng = np.random.default_rng(31)
        for _ in range(20):
            g = coupled_stabilizer_element(rng)
            assert np.allclose(g @ g.T, np.eye(6), atol=1e-12)
            moved = np.einsum("abc,ia,jb,kc->ijk", t0, g, g, g)
            assert np.allclose(moved, t0, atol=1e-10)

    def test_signature_invariance(self, connection_f, p56):
        rng = np.random.default_rng(32)
        for _ in range(50):
            g = coupled_stabilizer_element(rng)
            assert classify(transform(g, p56), connection_f).active == ("W4plus",)
