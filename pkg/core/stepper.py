"""
⏱️ Marcha no tempo
===================
A cada passo m → m+1 monta o lado direito B·u_m + w_m − r_{m+1} e resolve
A·u_{m+1} = rhs pelo oráculo direto (Thomas) ou por Robbins–Monro com
partida a quente a partir de u_m. Inclui a solução manufaturada
sin(πx)·e^{−Dπ²t} e o estudo de ordem de convergência.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
import pandas as pd

from core.cn import Grid, HeatProblem, assemble_cn, build_rhs
from core.exceptions import InputError
from core.rm import NoiseModel, RMConfig, make_stream, rm_solve
from core.tridiag import matvec, thomas_solve

logger = logging.getLogger(__name__)

SOLVERS = ("direct", "rm")
ORDER_COLUMNS = ["dx", "dt", "err", "ratio"]


# =============================================================================
# Campo
# =============================================================================

@dataclass
class Field:
    """
    Valores u_{n,m}, shape (M+1, N+1).

    ``residuals[m]`` = ‖A·u_{m+1} − rhs_m‖ do passo m → m+1.
    """

    values: np.ndarray
    grid: Grid
    solver: str = "direct"
    residuals: np.ndarray = field(default_factory=lambda: np.empty(0))
    max_principle_ok: Optional[bool] = None

    def to_frame(self) -> pd.DataFrame:
        """Cabeçalho com as coordenadas x; uma linha por nível de tempo."""
        columns = [format(float(x), ".17g") for x in self.grid.x]
        return pd.DataFrame(self.values, columns=columns)

    def max_error(self, exact: Callable[[np.ndarray, float], np.ndarray], level: Optional[int] = None) -> float:
        """Erro máximo nos nós em um nível (padrão: t_end)."""
        m = self.grid.M if level is None else level
        reference = exact(self.grid.x, m * self.grid.dt)
        return float(np.max(np.abs(self.values[m] - reference)))


def _sample(fn, points) -> np.ndarray:
    return np.array([fn(float(p)) for p in points], dtype=np.float64)


# =============================================================================
# Marcha
# =============================================================================

def solve_heat(
    problem: HeatProblem,
    grid: Grid,
    solver: str = "direct",
    rm_cfg: Optional[RMConfig] = None,
    noise: Optional[NoiseModel] = None,
) -> Field:
    """
    Marcha de Crank–Nicolson de t = 0 a t_end.

    Parameters
    ----------
    solver : {"direct", "rm"}
        Oráculo de Thomas ou Robbins–Monro.
    rm_cfg : RMConfig
        Obrigatório com solver = "rm"; ``x_init`` é substituído pela
        partida a quente (interior de u_m) e o passo m usa o fluxo
        de ruído (rm_cfg.seed, m).
    noise : NoiseModel, optional
        Ausente → ruído nulo.
    """
    if solver not in SOLVERS:
        raise InputError(f"solver must be one of {SOLVERS}, got {solver!r}")
    if solver == "rm" and rm_cfg is None:
        raise InputError("rm solver requested without an RMConfig")

    sys = assemble_cn(grid)
    n = grid.interior
    if solver == "rm" and noise is None:
        noise = NoiseModel.zero(n)

    x = grid.x
    t = grid.t
    values = np.empty((grid.M + 1, grid.N + 1))
    values[0, 1:-1] = _sample(problem.f, x[1:-1])
    values[:, 0] = _sample(problem.g_lo, t)
    values[:, -1] = _sample(problem.g_hi, t)

    residuals = np.empty(grid.M)
    for m in range(grid.M):
        u_m = values[m, 1:-1]
        rhs = build_rhs(sys, grid, u_m, m, problem)
        if solver == "direct":
            u_next = thomas_solve(sys.A, rhs)
        else:
            cfg = replace(rm_cfg, x_init=u_m.copy())
            u_next, _ = rm_solve(sys.A, rhs, cfg, noise, stream=make_stream(rm_cfg.seed, m))
        values[m + 1, 1:-1] = u_next
        residuals[m] = np.linalg.norm(matvec(sys.A, u_next) - rhs)

    result = Field(values=values, grid=grid, solver=solver, residuals=residuals)
    result.max_principle_ok = _max_principle(result)
    return result


def initial_step(problem: HeatProblem, grid: Grid):
    """(A, rhs, u_0) do primeiro passo 0 → 1: o sistema único dos estudos RM."""
    sys = assemble_cn(grid)
    u_0 = _sample(problem.f, grid.x[1:-1])
    return sys.A, build_rhs(sys, grid, u_0, 0, problem), u_0


def _max_principle(result: Field) -> bool:
    """Valores dentro de [min, max] dos dados iniciais e de contorno."""
    v = result.values
    data = np.concatenate((v[0], v[:, 0], v[:, -1]))
    lo, hi = data.min(), data.max()
    scale = max(1.0, abs(lo), abs(hi))
    ok = bool(np.all(v >= lo - 1e-12 * scale) and np.all(v <= hi + 1e-12 * scale))
    if not ok:
        if result.grid.a <= 1.0:
            logger.warning("discrete maximum principle violated with a = %.4g <= 1", result.grid.a)
        else:
            logger.info("field leaves the data range (a = %.4g > 1, principle not guaranteed)", result.grid.a)
    return ok


# =============================================================================
# Solução manufaturada
# =============================================================================

def analytic_solution(x, t, D: float, x_lo: float = 0.0, x_hi: float = 1.0):
    """sin(π(x−x_lo)/L)·exp(−Dπ²t/L²): solução exata com f = seno e contorno nulo."""
    L = x_hi - x_lo
    x = np.asarray(x, dtype=np.float64)
    value = np.sin(np.pi * (x - x_lo) / L) * math.exp(-D * math.pi**2 * t / L**2)
    return float(value) if value.ndim == 0 else value


def order_study(
    problem: HeatProblem,
    N: int,
    M: int,
    t_end: float,
    levels: int,
    solver: str = "direct",
    exact: Optional[Callable] = None,
    rm_cfg: Optional[RMConfig] = None,
    noise: Optional[NoiseModel] = None,
    workers: Optional[int] = None,
) -> pd.DataFrame:
    """
    Erro máximo em t_end por nível, dividindo dx e dt por 2 a cada nível.

    ``ratio`` = erro do nível anterior / erro do nível atual (NaN no primeiro
    nível e quando o erro atual é zero).
    """
    if levels < 1:
        raise InputError(f"levels must be >= 1, got {levels}")
    if exact is None:
        def exact(x, t):
            return analytic_solution(x, t, problem.D, problem.x_lo, problem.x_hi)

    def one(level: int):
        grid = Grid.build(problem, N * 2**level, M * 2**level, t_end)
        level_noise = None if noise is None else replace(noise, n=grid.interior)
        result = solve_heat(problem, grid, solver, rm_cfg, level_noise)
        return grid.dx, grid.dt, result.max_error(exact)

    outcomes = {}
    with ThreadPoolExecutor(max_workers=workers or None) as executor:
        futures = {executor.submit(one, level): level for level in range(levels)}
        for future in as_completed(futures):
            outcomes[futures[future]] = future.result()

    rows = []
    for level in range(levels):
        dx, dt, err = outcomes[level]
        ratio = np.nan
        if level > 0 and err > 0.0:
            ratio = rows[-1]["err"] / err
        rows.append({"dx": dx, "dt": dt, "err": err, "ratio": ratio})
        logger.info("level %d: dx = %.4g, dt = %.4g, err = %.6g", level, dx, dt, err)
    return pd.DataFrame(rows, columns=ORDER_COLUMNS)
