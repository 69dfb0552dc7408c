import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from csidqa import DistanceKind, Wasserstein, distance_matrix, wasserstein
from csidqa.transport import solve_uniform_transport


def brute_force_assignment(costs):
    n = costs.shape[0]
    return min(sum(costs[i, perm[i]] for i in range(n))
               for perm in itertools.permutations(range(n)))


def linprog_transport(costs):
    n_x, n_y = costs.shape
    rows = []
    rhs = []
    for i in range(n_x):
        a = np.zeros((n_x, n_y))
        a[i, :] = 1
        rows.append(a.ravel())
        rhs.append(1.0 / n_x)
    for j in range(n_y):
        a = np.zeros((n_x, n_y))
        a[:, j] = 1
        rows.append(a.ravel())
        rhs.append(1.0 / n_y)
    res = linprog(costs.ravel(), A_eq=np.array(rows)[:-1], b_eq=np.array(rhs)[:-1],
                  method="highs")
    assert res.success
    return res.fun


class TestSolver:
    def test_square_matches_brute_force(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            n = int(rng.integers(2, 7))
            costs = rng.random((n, n))
            objective, plan = solve_uniform_transport(costs)
            best = brute_force_assignment(costs)
            assert n * objective == pytest.approx(best, rel=1e-9)
            assert np.all(np.abs(plan.sum(axis=1) - 1 / n) < 1e-9)
            assert np.all(np.abs(plan.sum(axis=0) - 1 / n) < 1e-9)

    def test_rectangular_matches_linprog(self):
        rng = np.random.default_rng(1)
        for _ in range(15):
            n_x, n_y = int(rng.integers(2, 9)), int(rng.integers(2, 9))
            costs = rng.random((n_x, n_y))
            objective, _ = solve_uniform_transport(costs)
            assert objective == pytest.approx(linprog_transport(costs), abs=1e-9)

    def test_plan_is_basic(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n_x, n_y = int(rng.integers(2, 12)), int(rng.integers(2, 12))
            _, plan = solve_uniform_transport(rng.random((n_x, n_y)))
            assert np.count_nonzero(plan) <= n_x + n_y - 1
            assert np.all(plan >= 0)

    def test_single_cell(self):
        objective, plan = solve_uniform_transport(np.array([[3.5]]))
        assert objective == pytest.approx(3.5)
        assert plan[0, 0] == pytest.approx(1.0)

    def test_single_row(self):
        objective, plan = solve_uniform_transport(np.array([[1.0, 2.0, 3.0]]))
        assert objective == pytest.approx(2.0)
        assert np.allclose(plan, [[1 / 3, 1 / 3, 1 / 3]])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="non-finite"):
            solve_uniform_transport(np.array([[1.0, np.inf], [0.0, 1.0]]))

    def test_negative_costs_allowed(self):
        objective, _ = solve_uniform_transport(np.array([[-1.0, 1.0], [1.0, -1.0]]))
        assert objective == pytest.approx(-1.0)


class TestWasserstein:
    def scalar_matrix(self, xs, ys):
        return distance_matrix([np.array([v]) for v in xs],
                               [np.array([v]) for v in ys], DistanceKind.EUCLIDEAN)

    def test_single_pair_equals_entry(self):
        d = self.scalar_matrix([0.0], [1.7])
        value, plan = wasserstein(d, 2.0)
        assert value == pytest.approx(1.7)
        assert plan.cost == pytest.approx(1.7 ** 2)

    def test_two_point_example(self):
        d = self.scalar_matrix([0.0, 1.0], [1.0, 2.0])
        value, _ = wasserstein(d, 2.0)
        assert value == pytest.approx(1.0)

    def test_identical_sets_zero(self):
        xs = [0.3, 1.2, 5.0]
        value, _ = wasserstein(self.scalar_matrix(xs, xs), 2.0)
        assert value == 0.0

    def test_symmetry_value_and_transposed_plan(self):
        rng = np.random.default_rng(3)
        a = [rng.random(4) for _ in range(5)]
        b = [rng.random(4) for _ in range(7)]
        d_ab = distance_matrix(a, b, DistanceKind.EUCLIDEAN)
        d_ba = distance_matrix(b, a, DistanceKind.EUCLIDEAN)
        v1, p1 = wasserstein(d_ab, 2.0)
        v2, p2 = wasserstein(d_ba, 2.0)
        assert v1 == pytest.approx(v2, abs=1e-12)
        # transposed coupling is feasible and optimal for the flipped problem
        assert p2.coupling.T.shape == p1.coupling.shape
        assert np.sum(d_ab.values ** 2 * p2.coupling.T) == pytest.approx(p1.cost, abs=1e-12)

    def test_independent_coupling_upper_bound(self):
        # the product coupling is feasible, so optimal cost <= mean of D^p
        rng = np.random.default_rng(4)
        for p in (1.0, 2.0, 3.0):
            a = [rng.random(3) for _ in range(6)]
            b = [rng.random(3) for _ in range(4)]
            d = distance_matrix(a, b, DistanceKind.EUCLIDEAN)
            value, _ = wasserstein(d, p)
            assert value ** p <= np.mean(d.values ** p) + 1e-12

    def test_order_validation(self):
        d = self.scalar_matrix([0.0], [1.0])
        with pytest.raises(ValueError, match=">= 1"):
            wasserstein(d, 0.5)
        with pytest.raises(ValueError):
            Wasserstein(p=0.0)
