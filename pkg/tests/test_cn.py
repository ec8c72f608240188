"""
Testes de core.cn: grade, montagem de (A, B) e lado direito.
"""

import math

import numpy as np
import pytest

from core.cn import Grid, HeatProblem, assemble_cn, build_rhs
from core.exceptions import InputError

ATOL = 1e-12


def unit_grid(D=1.0, N=4, M=1, g_lo=None, g_hi=None):
    # N = 4, dt = dx² = 0.0625 → a = D exatamente
    kwargs = {}
    if g_lo is not None:
        kwargs["g_lo"] = g_lo
    if g_hi is not None:
        kwargs["g_hi"] = g_hi
    problem = HeatProblem(D, **kwargs)
    return problem, Grid.build(problem, N, M, M * (1.0 / N) ** 2)


# ======================================================================
#  HeatProblem / Grid — validação
# ======================================================================

class TestGrid:
    def test_derived_quantities(self):
        problem, grid = unit_grid()
        assert grid.dx == 0.25
        assert grid.dt == 0.0625
        assert grid.a == 1.0
        assert grid.interior == 3
        np.testing.assert_allclose(grid.x, [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_general_interval(self):
        problem = HeatProblem(2.0, x_lo=-1.0, x_hi=1.0)
        grid = Grid.build(problem, 8, 4, 0.5)
        assert grid.dx == 0.25
        assert grid.x[0] == -1.0 and grid.x[-1] == 1.0
        assert grid.a == pytest.approx(2.0 * 0.125 / 0.0625)

    @pytest.mark.parametrize("N, M, t_end", [(1, 5, 0.1), (10, 0, 0.1), (10, 5, 0.0), (10, 5, -1.0)])
    def test_invalid_grid(self, N, M, t_end):
        with pytest.raises(InputError):
            Grid.build(HeatProblem(1.0), N, M, t_end)

    def test_negative_diffusivity(self):
        with pytest.raises(InputError):
            HeatProblem(-1.0)

    def test_empty_interval(self):
        with pytest.raises(InputError):
            HeatProblem(1.0, x_lo=1.0, x_hi=1.0)

    def test_zero_diffusivity_accepted(self):
        _, grid = unit_grid(D=0.0)
        assert grid.a == 0.0


# ======================================================================
#  assemble_cn
# ======================================================================

class TestAssemble:
    def test_matrices(self):
        _, grid = unit_grid()
        sys = assemble_cn(grid)
        assert sys.A.n == sys.B.n == 3
        np.testing.assert_array_equal(sys.A.diag, [4.0, 4.0, 4.0])
        np.testing.assert_array_equal(sys.A.sub, [-1.0, -1.0])
        np.testing.assert_array_equal(sys.B.diag, [0.0, 0.0, 0.0])
        np.testing.assert_array_equal(sys.B.sup, [1.0, 1.0])

    def test_zero_diffusion_is_twice_identity(self):
        _, grid = unit_grid(D=0.0)
        sys = assemble_cn(grid)
        np.testing.assert_array_equal(sys.A.to_dense(), 2.0 * np.eye(3))
        np.testing.assert_array_equal(sys.B.to_dense(), 2.0 * np.eye(3))

    def test_a_is_strictly_dominant(self):
        problem = HeatProblem(3.0)
        sys = assemble_cn(Grid.build(problem, 20, 3, 0.2))
        assert sys.A.strictly_diagonally_dominant()
        assert sys.A.symmetric and sys.B.symmetric


# ======================================================================
#  build_rhs — avaliação manual de B·u_m + w_m − r_{m+1}
# ======================================================================

class TestBuildRhs:
    def test_interior_only(self):
        problem, grid = unit_grid()
        rhs = build_rhs(assemble_cn(grid), grid, [1.0, 1.0, 1.0], 0, problem)
        np.testing.assert_allclose(rhs, [1.0, 2.0, 1.0], atol=ATOL)

    def test_zero_diffusion_doubles(self):
        problem, grid = unit_grid(D=0.0, g_lo=lambda t: 5.0, g_hi=lambda t: -3.0)
        u = np.array([0.3, -1.2, 4.0])
        np.testing.assert_array_equal(build_rhs(assemble_cn(grid), grid, u, 0, problem), 2.0 * u)

    def test_left_boundary_coupling(self):
        problem, grid = unit_grid(g_lo=lambda t: 1.0)
        rhs = build_rhs(assemble_cn(grid), grid, [0.0, 0.0, 0.0], 0, problem)
        np.testing.assert_allclose(rhs, [2.0, 0.0, 0.0], atol=ATOL)

    def test_boundary_evaluated_at_both_levels(self):
        problem, grid = unit_grid(M=4, g_hi=lambda t: t)
        m = 2
        rhs = build_rhs(assemble_cn(grid), grid, [0.0, 0.0, 0.0], m, problem)
        expected = grid.a * (m * grid.dt + (m + 1) * grid.dt)
        np.testing.assert_allclose(rhs, [0.0, 0.0, expected], atol=ATOL)

    def test_single_unknown_gets_both_boundaries(self):
        problem = HeatProblem(1.0, g_lo=lambda t: 1.0, g_hi=lambda t: 1.0)
        grid = Grid.build(problem, 2, 1, 0.25)
        rhs = build_rhs(assemble_cn(grid), grid, [0.0], 0, problem)
        np.testing.assert_allclose(rhs, [4.0 * grid.a], atol=ATOL)

    def test_one_step_matches_dense_oracle(self):
        problem = HeatProblem(1.0, f=lambda x: math.sin(math.pi * x))
        grid = Grid.build(problem, 4, 1, 0.0625)
        sys = assemble_cn(grid)
        u0 = np.sin(math.pi * grid.x[1:-1])
        rhs = build_rhs(sys, grid, u0, 0, problem)
        dense_rhs = sys.B.to_dense() @ u0
        np.testing.assert_allclose(rhs, dense_rhs, atol=ATOL)

    def test_wrong_length(self):
        problem, grid = unit_grid()
        with pytest.raises(InputError):
            build_rhs(assemble_cn(grid), grid, [1.0, 2.0], 0, problem)
