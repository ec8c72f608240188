"""Fixtures compartilhadas pelos testes."""

import math

import pytest

from core.cn import HeatProblem
from core.tridiag import TriDiag


@pytest.fixture
def cn_a1_n10():
    """Matriz A de Crank–Nicolson com a = 1, N = 10 (9 incógnitas)."""
    return TriDiag.constant(9, 4.0, -1.0)


@pytest.fixture
def sine_problem():
    """u_t = u_xx em [0, 1], f = sin(πx), contorno nulo."""
    return HeatProblem(1.0, f=lambda x: math.sin(math.pi * x))


@pytest.fixture
def tmp_config(tmp_path):
    """Grava um arquivo de configuração e devolve o caminho."""

    def write(text: str, name: str = "run.cfg") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
