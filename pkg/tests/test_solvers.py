import numpy as np
import pytest

import squeeze_aba as sa
from helpers import (
    ABA_STEP_P1_FROM_THIRD,
    GOLDEN_CAPACITY,
    GOLDEN_LAMBDA,
    GOLDEN_R_OPT,
    golden_section_capacity,
    random_channel,
    random_floor,
)


class TestSteps:
    def test_aba_fixed_point_on_identity(self):
        ch = sa.validate_channel(np.eye(4))
        p = np.full(4, 0.25)
        assert np.allclose(sa.aba_step(ch, p).probs, p, atol=1e-15)

    def test_aba_step_from_skewed_start(self, golden):
        nxt = sa.aba_step(golden, [1 / 3, 2 / 3])
        assert nxt.probs[0] == pytest.approx(ABA_STEP_P1_FROM_THIRD, abs=1e-14)
        assert 1 / 3 < nxt.probs[0] < 0.5

    def test_aba_step_degenerate_rows_is_identity_map(self):
        ch = sa.validate_channel([[0.4, 0.6], [0.4, 0.6]])
        p = np.array([0.3, 0.7])
        assert np.allclose(sa.aba_step(ch, p).probs, p, atol=1e-15)

    def test_aba_requires_interior(self, golden):
        with pytest.raises(sa.NonInteriorStartError):
            sa.aba_step(golden, [1.0, 0.0])

    def test_alg1_unit_gain_equals_aba(self, golden, rng):
        for _ in range(20):
            p = rng.dirichlet([1, 1])
            a = sa.aba_step(golden, p).probs
            b = sa.alg1_step(golden, 1.0, p).probs
            assert np.allclose(a, b, atol=1e-15)

    def test_alg1_out_of_range_gain(self, golden):
        with pytest.raises(sa.LambdaRangeError):
            sa.alg1_step(golden, 3.0, [0.5, 0.5])
        with pytest.warns(RuntimeWarning):
            # forced mode still computes (no convergence guarantee)
            sa.solve(golden, "alg1", lam=3.0, force=True,
                     config=sa.SolverConfig(max_iters=50))

    def test_alg1_moves_faster_than_aba(self, golden):
        # per-iterate distance to the optimizer shrinks faster at the
        # largest feasible gain
        target = np.array([0.5, 0.5])
        p_a = np.array([1 / 3, 2 / 3])
        p_1 = p_a.copy()
        for _ in range(5):
            p_a = sa.aba_step(golden, p_a).probs
            p_1 = sa.alg1_step(golden, GOLDEN_LAMBDA, p_1).probs
        assert np.abs(p_1 - target).max() < np.abs(p_a - target).max()

    def test_alg1_symmetric_channel_uniform_fixed(self, rng):
        # rows that are permutations of each other keep uniform fixed
        row = rng.dirichlet(np.ones(4))
        ch = sa.validate_channel([row, row[::-1]])
        p = np.array([0.5, 0.5])
        nxt = sa.alg1_step(ch, sa.lambda_upper_bound(ch), p).probs
        assert np.allclose(nxt, p, atol=1e-14)

    def test_alg2_zero_floor_equals_alg1(self, golden, rng):
        params = sa.params_from_r_lambda(golden, [0, 0], GOLDEN_LAMBDA)
        for _ in range(20):
            p = rng.dirichlet([1, 1])
            a = sa.alg1_step(golden, GOLDEN_LAMBDA, p).probs
            b = sa.alg2_step(golden, params, p).probs
            assert np.allclose(a, b, atol=1e-13)

    def test_alg2_one_step_convergence(self, golden, rng):
        params = sa.params_from_r_lambda(golden, GOLDEN_R_OPT, GOLDEN_LAMBDA)
        for _ in range(20):
            q = rng.uniform(0.05, 0.95)
            p0 = params.r + (1 - params.r_plus) * np.array([q, 1 - q])
            p1 = sa.alg2_step(golden, params, p0).probs
            assert np.allclose(p1, [0.5, 0.5], atol=1e-12)

    def test_alg3_trivial_params_equal_aba(self, golden, rng):
        params = sa.build_squeeze_params(golden, [0, 0], [0, 0, 0])
        for _ in range(20):
            p = rng.dirichlet([1, 1])
            a = sa.aba_step(golden, p).probs
            b = sa.alg3_step(params, p).probs
            assert np.allclose(a, b, atol=1e-13)

    def test_alg3_posterior_shortcut_on_orthogonal_rows(self, golden):
        # with the optimal double squeeze the posterior is the squeezed
        # matrix transposed, and one step lands on the optimizer
        params = sa.build_squeeze_params(golden, GOLDEN_R_OPT, [0, 0.25, 0])
        p1 = sa.alg3_step(params, [0.3, 0.7]).probs
        assert np.allclose(p1, [0.5, 0.5], atol=1e-12)

    def test_alg2_equals_alg3_randomized(self, rng):
        worst = 0.0
        for _ in range(60):
            ch = random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(2, 9)))
            r = random_floor(rng, ch)
            lo, hi = sa.lambda_bounds(ch, r)
            params = sa.params_from_r_lambda(ch, r, float(rng.uniform(lo, hi)))
            for _ in range(20):
                p = params.r + (1 - params.r_plus) * rng.dirichlet(np.ones(ch.m))
                a = sa.alg2_step(ch, params, p).probs
                b = sa.alg3_step(params, p).probs
                worst = max(worst, float(np.abs(a - b).max()))
        assert worst < 1e-10


class TestSolve:
    def test_golden_channel_aba(self, golden):
        res = sa.solve(golden, "aba",
                       config=sa.SolverConfig(initial=sa.make_distribution([1 / 3, 2 / 3])))
        assert res.converged
        assert np.allclose(res.p_hat.probs, [0.5, 0.5], atol=1e-6)
        p1, cap = golden_section_capacity(golden)
        assert p1 == pytest.approx(0.5, abs=1e-6)
        assert res.capacity == pytest.approx(cap, abs=1e-7)
        assert res.capacity == pytest.approx(GOLDEN_CAPACITY, abs=1e-7)

    def test_golden_channel_alg2_one_iteration(self, golden):
        res = sa.solve(golden, "alg2", r=GOLDEN_R_OPT, lam=GOLDEN_LAMBDA,
                       config=sa.SolverConfig(initial=sa.make_distribution([0.2, 0.8])))
        assert res.converged
        assert res.iterations == 1
        assert np.allclose(res.p_hat.probs, [0.5, 0.5], atol=1e-12)

    def test_identity_channel_all_methods(self):
        ch = sa.validate_channel(np.eye(3))
        for method, kw in [("aba", {}), ("alg1", {}),
                           ("alg2", {"r": np.zeros(3)}),
                           ("alg3", {"r": np.zeros(3), "f": np.zeros(3)})]:
            res = sa.solve(ch, method, **kw)
            assert res.converged
            assert res.capacity == pytest.approx(np.log(3.0), abs=1e-8)
            assert np.allclose(res.p_hat.probs, 1 / 3, atol=1e-6)

    def test_degenerate_channel_short_circuits(self):
        ch = sa.validate_channel([[0.5, 0.5], [0.5, 0.5]])
        res = sa.solve(ch, "aba")
        assert res.converged and res.iterations == 0
        assert res.capacity == 0.0
        assert np.allclose(res.p_hat.probs, [0.5, 0.5])

    def test_bounds_bracket_capacity(self, golden):
        res = sa.solve(golden, "aba", config=sa.SolverConfig(epsilon=1e-4))
        assert res.capacity_lower <= res.capacity_upper
        assert res.capacity_upper - res.capacity_lower <= 1e-4
        mi = sa.mutual_information(golden, res.p_hat)
        assert res.capacity_lower - 1e-9 <= mi <= res.capacity_upper + 1e-9

    def test_not_converged_reported_not_raised(self, rng):
        ch = random_channel(rng, 2, 6)
        res = sa.solve(ch, "aba", config=sa.SolverConfig(epsilon=1e-12, max_iters=3))
        assert not res.converged
        assert res.iterations == 3

    def test_every_iterate_brackets_true_capacity(self, rng):
        # lower/upper from any iterate bracket the capacity itself, not
        # just the final mutual information; oracle: golden-section search
        for _ in range(5):
            ch = random_channel(rng, 2, int(rng.integers(3, 8)))
            _, true_capacity = golden_section_capacity(ch)
            start = sa.make_distribution(rng.dirichlet([1.0, 1.0]))
            res = sa.solve(ch, "aba", config=sa.SolverConfig(epsilon=1e-10, initial=start))
            for rec in res.trace:
                assert rec.objective <= true_capacity + 1e-9
                assert rec.objective + rec.gap >= true_capacity - 1e-9

    def test_zero_output_mass_breaks_loudly(self):
        # a start on the floor boundary can zero out an output letter that
        # some row still uses; the update must refuse to continue
        ch = sa.validate_channel([[0.5, 0.5], [1.0, 0.0]])
        with pytest.warns(RuntimeWarning):
            params = sa.build_squeeze_params(ch, [0.2, 0.0], [0.0, 0.0], force=True)
        with pytest.raises(sa.NumericalBreakdownError):
            sa.alg2_step(ch, params, [0.2, 0.8])

    def test_methods_agree_on_capacity(self, rng):
        for _ in range(15):
            ch = random_channel(rng, int(rng.integers(2, 5)), int(rng.integers(3, 9)))
            eps = 1e-9
            caps, phats = [], []
            for method, kw in [("aba", {}), ("alg1", {}),
                               ("alg2", {"r": random_floor(rng, ch)})]:
                res = sa.solve(ch, method, config=sa.SolverConfig(epsilon=eps), **kw)
                assert res.converged
                caps.append(res.capacity)
                phats.append(res.p_hat.probs)
            assert max(caps) - min(caps) <= 2 * eps
            if sa.solve(ch, "aba", config=sa.SolverConfig(epsilon=1e-11)).p_hat.is_interior(1e-3):
                for other in phats[1:]:
                    assert np.allclose(phats[0], other, atol=1e-4)

    def test_trace_contents(self, golden):
        res = sa.solve(golden, "alg2", r=GOLDEN_R_OPT, lam=GOLDEN_LAMBDA,
                       config=sa.SolverConfig(initial=sa.make_distribution([0.3, 0.7])))
        assert len(res.trace) == res.iterations + 1
        for rec in res.trace:
            assert abs(rec.p.sum() - 1.0) < 1e-12
            assert np.all(rec.p >= GOLDEN_R_OPT - 1e-15)
            assert rec.gap >= 0.0
        objs = [rec.objective for rec in res.trace]
        assert np.all(np.diff(objs) >= -1e-12)

    def test_monotone_ascent_randomized(self, rng):
        for trial in range(80):
            ch = random_channel(rng, int(rng.integers(2, 6)), int(rng.integers(2, 10)))
            method = ("aba", "alg1", "alg2", "alg3")[trial % 4]
            kw = {}
            if method in ("alg2", "alg3"):
                r = random_floor(rng, ch)
                lo, hi = sa.lambda_bounds(ch, r)
                kw = {"r": r, "lam": float(rng.uniform(lo, hi))}
            elif method == "alg1":
                kw = {"lam": float(rng.uniform(1.0, sa.lambda_upper_bound(ch)))}
            start = sa.make_distribution(rng.dirichlet(np.ones(ch.m)))
            res = sa.solve(ch, method,
                           config=sa.SolverConfig(epsilon=1e-9, max_iters=2500, initial=start),
                           **kw)
            objs = np.array([rec.objective for rec in res.trace])
            gaps = np.array([rec.gap for rec in res.trace])
            assert np.all(np.diff(objs) >= -1e-12)
            assert np.all(gaps >= 0.0)

    def test_solver_config_validation(self):
        with pytest.raises(sa.ValidationError):
            sa.SolverConfig(epsilon=0.0)
        with pytest.raises(sa.ValidationError):
            sa.SolverConfig(max_iters=0)

    def test_method_parameter_validation(self, golden):
        with pytest.raises(sa.ValidationError):
            sa.solve(golden, "aba", lam=1.5)
        with pytest.raises(sa.ValidationError):
            sa.solve(golden, "alg2")
        with pytest.raises(sa.ValidationError):
            sa.solve(golden, "nope")

    def test_trace_csv_roundtrip(self, golden, tmp_path):
        res = sa.solve(golden, "aba",
                       config=sa.SolverConfig(initial=sa.make_distribution([0.3, 0.7])))
        path = tmp_path / "trace.csv"
        sa.write_trace_csv(res, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "iter,objective_nats,gap_nats,lower_nats,upper_nats,p_1,p_2"
        assert len(lines) == len(res.trace) + 1
        first = lines[1].split(",")
        assert int(first[0]) == 0
        assert float(first[5]) == pytest.approx(0.3, abs=1e-15)
