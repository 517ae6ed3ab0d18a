import numpy as np
import pytest

from aialo.errors import InfeasibleOrUnbounded
from aialo.harness import GeneratorConfig, derive_seed, generate_instance
from aialo.lp_model import (
    ToleranceParams,
    UnknownSet,
    binding_set,
    check_opt_membership,
    instance_from_json,
    instance_to_json,
    solve_exact,
)
from aialo.vertex_enum import enumerate_vertices

from helpers import make_instance, random_bounded_instance, unit_square


def test_solve_exact_single_binding_constraint():
    inst = make_instance([1.0], [[1.0]], [1.0])
    sol = solve_exact(inst)
    assert sol.objective_value == pytest.approx(1.0, abs=1e-9)
    assert sol.point == pytest.approx([1.0], abs=1e-9)


def test_solve_exact_separable_box():
    inst = make_instance([1.0, 1.0], [[1.0, 0.0], [0.0, 1.0]], [2.0, 3.0])
    sol = solve_exact(inst)
    assert sol.objective_value == pytest.approx(5.0, abs=1e-9)
    assert sol.point == pytest.approx([2.0, 3.0], abs=1e-9)


def test_solve_exact_matches_vertex_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(10):
        inst = random_bounded_instance(rng, n=3, m=6)
        vertices = enumerate_vertices(inst)
        best = float(np.max(vertices.points @ inst.objective))
        assert solve_exact(inst).objective_value == pytest.approx(best, abs=1e-8)


def test_solve_exact_row_permutation_invariant():
    rng = np.random.default_rng(5)
    inst = random_bounded_instance(rng, n=3, m=7)
    perm = rng.permutation(inst.num_constraints)
    permuted = make_instance(
        inst.objective, inst.constraint_matrix[perm], inst.rhs[perm],
        radius=inst.radius_bound,
    )
    assert solve_exact(permuted).objective_value == pytest.approx(
        solve_exact(inst).objective_value, abs=1e-9
    )
    assert solve_exact(permuted).point == pytest.approx(solve_exact(inst).point, abs=1e-6)


def test_infeasible_instance_rejected():
    with pytest.raises(InfeasibleOrUnbounded):
        make_instance([1.0], [[-1.0], [1.0]], [-2.0, 1.0])


def test_unbounded_instance_rejected():
    with pytest.raises(InfeasibleOrUnbounded):
        make_instance([1.0, 0.0], [[0.0, 1.0]], [1.0])


def test_norm_beyond_radius_rejected():
    with pytest.raises(InfeasibleOrUnbounded):
        make_instance([1.0], [[1.0]], [5.0], radius=1.0)


def test_dimension_and_sigma_validation():
    with pytest.raises(ValueError):
        make_instance([1.0, 2.0], [[1.0]], [1.0])
    with pytest.raises(ValueError):
        make_instance([1.0], [[1.0]], [1.0], sigma=0.0)
    with pytest.raises(ValueError):
        ToleranceParams(delta=1.5, eps_opt=0.1, eps_feas=0.1)


def test_opt_membership_examples():
    inst = make_instance([1.0], [[1.0]], [1.0])
    eps1, eps2 = 0.05, 0.03
    assert check_opt_membership(inst, np.array([1.0 - eps1]), ToleranceParams(0.1, eps1, eps2))
    assert not check_opt_membership(
        inst, np.array([1.0 + 2 * eps2]), ToleranceParams(0.1, 10.0, eps2)
    )
    assert check_opt_membership(inst, np.array([1.0]), ToleranceParams(0.1, 0.0, 0.0))


def test_opt_membership_relaxes_sign_constraint():
    inst = make_instance([-1.0, 1.0], [[0.0, 1.0]], [1.0], radius=3.0)
    tol = ToleranceParams(0.1, 0.5, 0.01)
    assert check_opt_membership(inst, np.array([-0.005, 1.0]), tol)
    assert not check_opt_membership(inst, np.array([-0.05, 1.0]), tol)


def test_opt_membership_exact_solution_and_monotonicity():
    rng = np.random.default_rng(3)
    for _ in range(5):
        inst = random_bounded_instance(rng, n=3, m=6)
        x = solve_exact(inst).point
        assert check_opt_membership(inst, x, ToleranceParams(0.1, 0.0, 0.0))
    inst = unit_square()
    x = np.array([1.02, 0.5])
    small = ToleranceParams(0.1, 1.0, 0.02)
    assert check_opt_membership(inst, x, small)
    assert check_opt_membership(inst, x, ToleranceParams(0.1, 1.5, 0.5))


def test_binding_set_examples():
    inst = make_instance([1.0, 0.0], [[1.0, 0.0], [0.0, 1.0]], [1.0, 5.0])
    assert binding_set(inst, np.array([1.0, 0.0]), 1e-6) == {0}
    square = make_instance([1.0, 1.0], [[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])
    assert binding_set(square, np.array([1.0, 1.0]), 1e-6) == {0, 1}


def test_binding_count_at_most_n_on_generated_instances():
    for trial in range(100):
        cfg = GeneratorConfig(n=3, m=10, seed=derive_seed(21, "bindcount", trial))
        inst = generate_instance(cfg)
        d = len(binding_set(inst, solve_exact(inst).point, 1e-6))
        assert d <= inst.num_vars


def test_json_round_trip():
    rng = np.random.default_rng(9)
    inst = random_bounded_instance(rng, n=3, m=5, unknown="c", sigma=2.0)
    text = instance_to_json(inst)
    back = instance_from_json(text)
    assert back.unknown_set is UnknownSet.C
    assert back.radius_bound == inst.radius_bound
    np.testing.assert_array_equal(back.objective, inst.objective)
    np.testing.assert_array_equal(back.constraint_matrix, inst.constraint_matrix)
    np.testing.assert_array_equal(back.rhs, inst.rhs)
    np.testing.assert_array_equal(back.noise_scale, inst.noise_scale)
    assert instance_to_json(back) == text
