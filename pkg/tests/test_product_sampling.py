import functools
import itertools

import numpy as np
import pytest

from prodsamp import (
    BadParamError,
    DimensionMismatchError,
    EmptySupportError,
    OutOfRangeError,
    OversampledPlanError,
    ProductKind,
    SupportSet,
    build_plan,
    build_product_plan,
    flat_sample_indices,
    kron_apply,
    product_eigenvalue,
    product_eigenvector,
    product_plan_from_sample_sets,
    product_reconstruct,
    product_sample,
    product_sample_set,
    product_spectrum,
    project_support,
    relative_error,
    sampled_product_shift,
    synthesize,
)
from conftest import ALL_KINDS, random_product, random_symmetric

TOY_SUPPORT = [(0, 0), (3, 2), (2, 2)]  # 1-based (1,1),(4,3),(3,3)


def dense_sampling_operator(plan):
    return functools.reduce(
        np.kron, [p.sampling_matrix() for p in plan.factor_plans]
    )


def dense_interpolation_operator(plan):
    return functools.reduce(np.kron, [p.phi for p in plan.factor_plans])


class TestProjectSupport:
    def test_toy_example(self):
        r, s = project_support(TOY_SUPPORT)
        assert r == ((0, 2, 3), (0, 2))
        assert s == 6

    def test_single_tuple_hits_lower_bound(self):
        r, s = project_support([(2, 1, 4)])
        assert all(len(x) == 1 for x in r)
        assert s == 1

    def test_disjoint_tuples_hit_upper_bound(self):
        support = [(0, 0), (1, 1), (2, 2)]
        r, s = project_support(support)
        assert s == len(support) ** 2

    def test_empty_support(self):
        with pytest.raises(EmptySupportError):
            project_support([])

    def test_duplicate_tuples(self):
        with pytest.raises(BadParamError):
            project_support([(0, 0), (0, 0)])


class TestBuildProductPlan:
    def test_toy_sampling_operator_factor2(self):
        # Factor sample sets (1,3,4) and (2,3) in 1-based indexing.
        rng = np.random.default_rng(42)
        pg = random_product((4, 3), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = product_plan_from_sample_sets(ps, TOY_SUPPORT, [(0, 2, 3), (1, 2)])
        np.testing.assert_array_equal(
            plan.factor_plans[1].sampling_matrix(),
            np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
        )

    def test_single_factor_reduces_to_single_graph_plan(self, rng):
        from prodsamp import product_graph

        g = random_symmetric(6, rng)
        ps = product_spectrum(product_graph([g], ProductKind.KRONECKER))
        support = [(0,), (3,), (4,)]
        plan = build_product_plan(ps, support, seed=1)
        single = build_plan(
            ps.factors[0],
            SupportSet((0, 3, 4)),
            plan.factor_plans[0].sample_set,
        )
        np.testing.assert_array_equal(plan.factor_plans[0].phi, single.phi)
        assert plan.s == 3 and plan.k == 3

    def test_plan_invariants(self, rng):
        pg = random_product((5, 4), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        support = [(0, 0), (1, 2), (4, 2)]
        plan = build_product_plan(ps, support, seed=3)
        r_sets, s = project_support(support)
        assert plan.k <= plan.s <= plan.k ** 2
        assert plan.s == s
        for p, r in zip(plan.factor_plans, r_sets):
            assert p.support.indices == r
            assert p.m == len(r)
            assert p.sigma_min > 1e-10
        for t in plan.product_support:
            for j, i in enumerate(t):
                assert i in r_sets[j]

    def test_out_of_range_tuple(self, rng):
        ps = product_spectrum(random_product((3, 3), ProductKind.KRONECKER, rng))
        with pytest.raises(OutOfRangeError):
            build_product_plan(ps, [(0, 3)])

    def test_factor_error_is_annotated(self, rng):
        ps = product_spectrum(random_product((3, 14), ProductKind.KRONECKER, rng))
        with pytest.raises(Exception, match="factor 2"):
            build_product_plan(ps, [(0, 0), (1, 1)], strategy="exhaustive")


class TestProductSampleSet:
    def test_toy_six_nodes(self):
        rng = np.random.default_rng(7)
        ps = product_spectrum(random_product((4, 3), ProductKind.KRONECKER, rng))
        plan = product_plan_from_sample_sets(ps, TOY_SUPPORT, [(0, 2, 3), (1, 2)])
        expected = [(0, 1), (0, 2), (2, 1), (2, 2), (3, 1), (3, 2)]
        assert product_sample_set(plan) == expected

    def test_lexicographic_order_and_count(self, rng):
        ps = product_spectrum(random_product((4, 5), ProductKind.CARTESIAN, rng))
        plan = build_product_plan(ps, [(0, 0), (1, 1), (2, 2)], seed=0)
        tuples = product_sample_set(plan)
        assert len(tuples) == plan.s
        assert tuples == sorted(
            tuples,
            key=lambda t: [plan.factor_plans[j].sample_set.index(i) for j, i in enumerate(t)],
        )

    def test_singleton_sets(self, rng):
        ps = product_spectrum(random_product((3, 3, 3), ProductKind.KRONECKER, rng))
        plan = build_product_plan(ps, [(0, 1, 2)], seed=0)
        assert len(product_sample_set(plan)) == 1


class TestProductSample:
    def test_ramp_gather(self):
        rng = np.random.default_rng(7)
        pg = random_product((4, 3), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = product_plan_from_sample_sets(ps, TOY_SUPPORT, [(0, 2, 3), (1, 2)])
        x = np.arange(12, dtype=float)
        expected = [0 * 3 + 1, 0 * 3 + 2, 2 * 3 + 1, 2 * 3 + 2, 3 * 3 + 1, 3 * 3 + 2]
        np.testing.assert_array_equal(product_sample(x, plan), x[expected])
        np.testing.assert_array_equal(
            product_sample(np.zeros(12), plan), np.zeros(6)
        )

    def test_matches_dense_kronecker_operator(self, rng):
        pg = random_product((3, 4), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = build_product_plan(ps, [(0, 0), (2, 3), (1, 3)], seed=5)
        x = rng.standard_normal(12)
        np.testing.assert_array_equal(
            product_sample(x, plan), dense_sampling_operator(plan) @ x
        )

    def test_dimension_mismatch(self, rng):
        ps = product_spectrum(random_product((3, 3), ProductKind.KRONECKER, rng))
        plan = build_product_plan(ps, [(0, 0)], seed=0)
        with pytest.raises(DimensionMismatchError):
            product_sample(np.zeros(8), plan)


class TestKronApply:
    def test_identity_factors(self, rng):
        y = rng.standard_normal(12)
        np.testing.assert_array_equal(
            kron_apply([np.eye(3), np.eye(4)], y), y
        )

    def test_two_factor_dense_oracle(self, rng):
        a, b = rng.standard_normal((2, 2)), rng.standard_normal((3, 3))
        y = rng.standard_normal(6)
        np.testing.assert_allclose(
            kron_apply([a, b], y), np.kron(a, b) @ y, atol=1e-12
        )

    def test_three_factor_rectangular_dense_oracle(self, rng):
        mats = [
            rng.standard_normal((2, 3)),
            rng.standard_normal((4, 2)),
            rng.standard_normal((3, 5)),
        ]
        y = rng.standard_normal(3 * 2 * 5)
        dense = functools.reduce(np.kron, mats) @ y
        np.testing.assert_allclose(kron_apply(mats, y), dense, atol=1e-11)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(DimensionMismatchError):
            kron_apply([np.eye(2), np.eye(2)], np.zeros(5))


class TestProductReconstruct:
    def test_toy_support_perfect_recovery(self):
        rng = np.random.default_rng(17)
        pg = random_product((4, 3), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = build_product_plan(ps, TOY_SUPPORT, seed=2)
        sig = synthesize(ps, TOY_SUPPORT, coeffs=rng.standard_normal(3))
        x_rec = product_reconstruct(product_sample(sig.x, plan), plan)
        assert relative_error(sig.x, x_rec) <= 1e-9

    def test_zero_samples(self, rng):
        ps = product_spectrum(random_product((3, 3), ProductKind.KRONECKER, rng))
        plan = build_product_plan(ps, [(0, 0), (1, 1)], seed=0)
        np.testing.assert_array_equal(
            product_reconstruct(np.zeros(plan.s), plan), np.zeros(9)
        )

    def test_matches_dense_theorem1_pipeline(self):
        # Dense oracle: Theorem 1 on the materialized product graph with
        # the assembled product eigenvectors and the flat sample set.
        rng = np.random.default_rng(23)
        pg = random_product((3, 3, 4), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        support = [(0, 0, 0), (1, 2, 3), (2, 0, 1), (1, 1, 1)]
        plan = build_product_plan(ps, support, seed=4)
        sig = synthesize(ps, support, seed=8)
        x_m = product_sample(sig.x, plan)
        x_rec = product_reconstruct(x_m, plan)

        v_k = np.column_stack([product_eigenvector(ps, f) for f in support])
        flat = flat_sample_indices(plan)
        w_dense = np.linalg.pinv(v_k[flat])
        x_dense = v_k @ (w_dense @ sig.x[flat])
        assert relative_error(sig.x, x_rec) <= 1e-9
        np.testing.assert_allclose(x_rec, x_dense, atol=1e-9)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_perfect_recovery_all_kinds(self, kind):
        for trial in range(10):
            rng = np.random.default_rng(5000 + trial)
            shape = tuple(rng.integers(3, 7, size=int(rng.integers(2, 4))))
            pg = random_product(shape, kind, rng)
            ps = product_spectrum(pg)
            k = int(rng.integers(1, 5))
            all_tuples = list(itertools.product(*(range(n) for n in shape)))
            pick = rng.choice(len(all_tuples), size=k, replace=False)
            support = [all_tuples[i] for i in pick]
            plan = build_product_plan(ps, support, seed=int(rng.integers(2**31)))
            sig = synthesize(ps, support, coeffs=rng.standard_normal(k))
            err = relative_error(
                sig.x, product_reconstruct(product_sample(sig.x, plan), plan)
            )
            assert err <= 1e-9

    def test_operator_factorization_on_basis_vectors(self, rng):
        # Materialized kron operators equal the implicit actions column by
        # column over every standard basis vector.
        pg = random_product((3, 3), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = build_product_plan(ps, [(0, 1), (2, 2)], seed=6)
        psi = dense_sampling_operator(plan)
        phi = dense_interpolation_operator(plan)
        for i in range(9):
            e = np.zeros(9)
            e[i] = 1.0
            np.testing.assert_allclose(
                product_sample(e, plan), psi @ e, atol=1e-10
            )
        for i in range(plan.s):
            e = np.zeros(plan.s)
            e[i] = 1.0
            np.testing.assert_allclose(
                product_reconstruct(e, plan), phi @ e, atol=1e-10
            )

    def test_superset_bandlimitedness(self, rng):
        # Signals supported on random subsets of the S-grid down to the
        # K-support are all recovered exactly by the same plan.
        pg = random_product((4, 4), ProductKind.CARTESIAN, rng)
        ps = product_spectrum(pg)
        support = [(0, 1), (2, 3), (3, 1)]
        plan = build_product_plan(ps, support, seed=9)
        r_sets, s = project_support(support)
        grid = list(itertools.product(*r_sets))
        for size in (len(support), 4, s):
            pick = rng.choice(len(grid), size=size, replace=False)
            sub = [grid[i] for i in pick]
            sig = synthesize(ps, sub, coeffs=rng.standard_normal(size))
            err = relative_error(
                sig.x, product_reconstruct(product_sample(sig.x, plan), plan)
            )
            assert err <= 1e-9

    def test_rank_multiplicativity(self, rng):
        pg = random_product((5, 4), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = build_product_plan(ps, [(0, 0), (1, 2), (4, 3)], seed=10)
        blocks = [
            p.v_k[list(p.sample_set)] for p in plan.factor_plans
        ]
        sigma_product = np.prod(
            [np.linalg.svd(b, compute_uv=False)[-1] for b in blocks]
        )
        sigma_kron = np.linalg.svd(
            functools.reduce(np.kron, blocks), compute_uv=False
        )[-1]
        assert abs(sigma_product - sigma_kron) <= 1e-8


class TestSampledProductShift:
    def test_identity_factors_give_eigenvalue_diagonals(self):
        # Diagonal factor shifts have V = I, so W = I and the sampled
        # factor shifts are the supported eigenvalue diagonals.
        import prodsamp

        g1 = prodsamp.make_graph(np.diag([3.0, 2.0, 1.0]))
        g2 = prodsamp.make_graph(np.diag([5.0, 4.0]))
        pg = prodsamp.product_graph([g1, g2], ProductKind.KRONECKER)
        ps = product_spectrum(pg)
        plan = product_plan_from_sample_sets(
            ps, [(0, 0), (2, 1)], [(0, 2), (0, 1)]
        )
        shifts = sampled_product_shift(plan, ps)
        np.testing.assert_allclose(shifts[0], np.diag([3.0, 1.0]), atol=1e-12)
        np.testing.assert_allclose(shifts[1], np.diag([5.0, 4.0]), atol=1e-12)

    def test_eigenvalues_of_kron_factors(self):
        rng = np.random.default_rng(31)
        pg = random_product((4, 3), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        plan = build_product_plan(ps, TOY_SUPPORT, seed=3)
        shifts = sampled_product_shift(plan, ps)
        dense = functools.reduce(np.kron, shifts)
        got = np.sort(np.linalg.eigvals(dense).real)
        r_sets, _ = project_support(TOY_SUPPORT)
        expected = np.sort(
            [
                product_eigenvalue(ps, f)
                for f in itertools.product(*r_sets)
            ]
        )
        np.testing.assert_allclose(got, expected, atol=1e-8)

    def test_matches_dense_construction(self):
        rng = np.random.default_rng(37)
        pg = random_product((4, 4), ProductKind.KRONECKER, rng)
        ps = product_spectrum(pg)
        support = [(0, 0), (1, 3), (3, 3)]
        plan = build_product_plan(ps, support, seed=12)
        dense_factors = functools.reduce(np.kron, sampled_product_shift(plan, ps))

        r_sets, _ = project_support(support)
        grid = list(itertools.product(*r_sets))
        v_s = np.column_stack([product_eigenvector(ps, f) for f in grid])
        lam_s = np.array([product_eigenvalue(ps, f) for f in grid])
        flat = flat_sample_indices(plan)
        w = np.linalg.pinv(v_s[flat])
        a_m = np.linalg.solve(w, lam_s[:, None] * w)
        np.testing.assert_allclose(dense_factors, a_m, atol=1e-8)

    def test_oversampled_plan_rejected(self, rng):
        ps = product_spectrum(random_product((4, 4), ProductKind.KRONECKER, rng))
        plan = build_product_plan(ps, [(0, 0), (1, 1)], seed=1, oversample=(1, 0))
        assert not plan.critically_sampled
        assert plan.s == 6
        with pytest.raises(OversampledPlanError):
            sampled_product_shift(plan, ps)

    def test_oversampled_plan_still_recovers(self, rng):
        ps = product_spectrum(random_product((4, 4), ProductKind.CARTESIAN, rng))
        support = [(0, 0), (1, 1)]
        plan = build_product_plan(ps, support, seed=1, oversample=(1, 1))
        sig = synthesize(ps, support, seed=2)
        err = relative_error(
            sig.x, product_reconstruct(product_sample(sig.x, plan), plan)
        )
        assert err <= 1e-9
