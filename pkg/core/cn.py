"""
🔥 Discretização de Crank–Nicolson
===================================
Problema do calor u_t = D·u_xx em [x_lo, x_hi] com condições de Dirichlet,
discretizado pela média dos esquemas FTCS explícito e implícito:

    A·u_{m+1} = B·u_m + w_m − r_{m+1}

com A = tridiag(−a, 2+2a, −a), B = tridiag(a, 2−2a, a) e a = D·Δt/Δx².
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.exceptions import InputError
from core.tridiag import TriDiag, matvec

Profile = Callable[[float], float]


# =============================================================================
# Tipos
# =============================================================================

def _zero(_: float) -> float:
    return 0.0


@dataclass(frozen=True)
class HeatProblem:
    """
    Problema contínuo: difusividade, domínio, condição inicial e contorno.

    A compatibilidade nos cantos (f(x_lo) == g_lo(0)) não é exigida.
    """

    D: float
    x_lo: float = 0.0
    x_hi: float = 1.0
    f: Profile = _zero
    g_lo: Profile = _zero
    g_hi: Profile = _zero

    def __post_init__(self):
        # D = 0 é aceito: limite sem difusão (a = 0)
        if not (self.D >= 0.0 and math.isfinite(self.D)):
            raise InputError(f"diffusivity must be finite and >= 0, got {self.D}")
        if not self.x_hi > self.x_lo:
            raise InputError(f"x_hi must exceed x_lo, got [{self.x_lo}, {self.x_hi}]")

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo


@dataclass(frozen=True)
class Grid:
    """
    Discretização: N intervalos em x, M passos em t até t_end.

    Attributes derivados: dx, dt, a = D·dt/dx².
    """

    N: int
    M: int
    t_end: float
    dx: float
    dt: float
    a: float
    x_lo: float = 0.0

    @classmethod
    def build(cls, problem: HeatProblem, N: int, M: int, t_end: float) -> "Grid":
        if int(N) < 2:
            raise InputError(f"N must be >= 2, got {N}")
        if int(M) < 1:
            raise InputError(f"M must be >= 1, got {M}")
        if not t_end > 0.0:
            raise InputError(f"t_end must be > 0, got {t_end}")
        dx = problem.length / int(N)
        dt = t_end / int(M)
        return cls(
            N=int(N),
            M=int(M),
            t_end=float(t_end),
            dx=dx,
            dt=dt,
            a=problem.D * dt / dx**2,
            x_lo=problem.x_lo,
        )

    @property
    def interior(self) -> int:
        return self.N - 1

    @property
    def x(self) -> np.ndarray:
        return self.x_lo + self.dx * np.arange(self.N + 1)

    @property
    def t(self) -> np.ndarray:
        return self.dt * np.arange(self.M + 1)


@dataclass(frozen=True)
class CNSystem:
    """Par (A, B) do esquema; ambos simétricos e A + B = 4·I."""

    A: TriDiag
    B: TriDiag
    a: float


# =============================================================================
# Operações
# =============================================================================

def assemble_cn(grid: Grid) -> CNSystem:
    """Monta A = tridiag(−a, 2+2a, −a) e B = tridiag(a, 2−2a, a) de dimensão N−1."""
    if grid.N < 2:
        raise InputError(f"N must be >= 2, got {grid.N}")
    a = grid.a
    n = grid.interior
    return CNSystem(
        A=TriDiag.constant(n, 2.0 + 2.0 * a, -a),
        B=TriDiag.constant(n, 2.0 - 2.0 * a, a),
        a=a,
    )


def build_rhs(sys: CNSystem, grid: Grid, u_m, m: int, problem: HeatProblem) -> np.ndarray:
    """
    Lado direito B·u_m + w_m − r_{m+1} do passo m → m+1.

    w_m = (a·u_{0,m}, 0, …, 0, a·u_{N,m}) e r_{m+1} = (−a·u_{0,m+1}, 0, …, 0, −a·u_{N,m+1}),
    ou seja, a primeira entrada recebe a·(g_lo(t_m) + g_lo(t_{m+1})) e a última
    a·(g_hi(t_m) + g_hi(t_{m+1})). Em N = 2 há uma única incógnita e ela recebe as duas.
    """
    u_m = np.asarray(u_m, dtype=np.float64)
    if u_m.ndim != 1 or u_m.shape[0] != grid.interior:
        raise InputError(f"u_m: expected length {grid.interior}, got shape {u_m.shape}")

    t_now = m * grid.dt
    t_next = (m + 1) * grid.dt
    a = sys.a

    rhs = matvec(sys.B, u_m)
    rhs[0] += a * (problem.g_lo(t_now) + problem.g_lo(t_next))
    rhs[-1] += a * (problem.g_hi(t_now) + problem.g_hi(t_next))
    return rhs
