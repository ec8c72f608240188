"""
🎲 Iteração de Robbins–Monro
=============================
Resolve A·x = rhs com observações ruidosas do resíduo:

    X_(k+1) = X_(k) − (c/k^θ)·[A·X_(k) − rhs − ξ_(k)],   k = 1, 2, …

com ξ_(k) i.i.d. e limitado (‖ξ‖₂ < b). Com c = 1 e θ = 1 é exatamente
o procedimento proposto; c e θ são botões de estudo.

Geradores de ruído são Philox (contador) derivados de (semente, chaves…),
de modo que cada réplica / passo de tempo tem seu fluxo independente
da ordem de execução.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numba import njit

from core.exceptions import InputError
from core.tridiag import TriDiag, matvec, spectrum, thomas_solve

logger = logging.getLogger(__name__)

NOISE_KINDS = ("zero", "uniform")

# Iterações por bloco de ruído sorteado
BLOCK = 1 << 15
# Bloco menor quando há critério de parada por tolerância
TOL_BLOCK = 1 << 10


# =============================================================================
# Ruído
# =============================================================================

@dataclass(frozen=True)
class NoiseModel:
    """
    Modelo de ruído.

    kind = "zero"    → ξ ≡ 0
    kind = "uniform" → componentes i.i.d. uniformes em (−b/√n, b/√n),
                       logo ‖ξ‖₂ < b e E[ξ] = 0.

    ``mean_offset`` desloca cada componente (ruído viesado); com offset μ
    o limite deixa de ser A⁻¹·rhs e passa a ser A⁻¹·(rhs + μ·1).
    """

    kind: str
    n: int
    b: float = 0.0
    mean_offset: float = 0.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise InputError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if int(self.n) < 1:
            raise InputError(f"noise dimension must be >= 1, got {self.n}")
        if self.kind != "zero" and not self.b > 0.0:
            raise InputError(f"noise bound b must be > 0, got {self.b}")

    @classmethod
    def zero(cls, n: int) -> "NoiseModel":
        return cls("zero", n)

    @classmethod
    def uniform(cls, n: int, b: float, mean_offset: float = 0.0) -> "NoiseModel":
        return cls("uniform", n, b, mean_offset)

    @property
    def half_width(self) -> float:
        return self.b / math.sqrt(self.n)


def make_stream(seed: int, *keys: int) -> np.random.Generator:
    """Fluxo Philox determinado por (seed, *keys)."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)])
    return np.random.Generator(np.random.Philox(ss))


def sample_noise_block(model: NoiseModel, stream: np.random.Generator, count: int) -> np.ndarray:
    """Sorteia ``count`` vetores de ruído, shape (count, n)."""
    if model.kind == "zero":
        block = np.zeros((count, model.n))
    else:
        h = model.half_width
        block = stream.uniform(-h, h, size=(count, model.n))
    if model.mean_offset:
        block += model.mean_offset
    return block


def sample_noise(model: NoiseModel, stream: np.random.Generator) -> np.ndarray:
    """Um vetor ξ; determinístico dado o estado do fluxo."""
    return sample_noise_block(model, stream, 1)[0]


# =============================================================================
# Configuração e traço
# =============================================================================

@dataclass(frozen=True)
class RMConfig:
    """
    Parameters
    ----------
    max_iters : int
        Orçamento K de iterações.
    gain : float
        Ganho c (> 0); passo c/k^θ.
    x_init : array, optional
        X_(1); ausente → vetor nulo.
    seed : int
        Semente mestre do ruído.
    checkpoints : sequence of int
        Índices k (crescentes, em [1, K]) em que o erro ‖X_(k+1) − X_(ex)‖ é registrado.
        Vazio → apenas K.
    theta : float
        Expoente do passo (1 reproduz o procedimento original).
    tol : float, optional
        Parada antecipada quando ‖A·x − rhs‖ ≤ tol (desligada por padrão).
    """

    max_iters: int
    gain: float = 1.0
    x_init: Optional[np.ndarray] = None
    seed: int = 0
    checkpoints: Sequence[int] = ()
    theta: float = 1.0
    tol: Optional[float] = None
    record_iterates: bool = False
    record_noise: bool = False

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise InputError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.gain > 0.0:
            raise InputError(f"gain must be > 0, got {self.gain}")
        if not self.theta > 0.0:
            raise InputError(f"theta must be > 0, got {self.theta}")
        cps = tuple(int(k) for k in self.checkpoints) or (int(self.max_iters),)
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise InputError(f"checkpoints must be strictly increasing, got {cps}")
        if cps[0] < 1 or cps[-1] > int(self.max_iters):
            raise InputError(f"checkpoints must lie in [1, {self.max_iters}], got {cps}")
        object.__setattr__(self, "checkpoints", cps)


@dataclass
class RMTrace:
    """Erros (e opcionalmente iterados / ruídos) nos checkpoints de uma execução."""

    checkpoints: list = field(default_factory=list)
    err_norms: list = field(default_factory=list)
    iterates: Optional[list] = None
    noise_draws: Optional[np.ndarray] = None
    x_exact: Optional[np.ndarray] = None
    spectral_ok: bool = True
    stopped_at: Optional[int] = None


# =============================================================================
# Iteração
# =============================================================================

def _step_size(c: float, k: int, theta: float) -> float:
    return c / k if theta == 1.0 else c / k**theta


def rm_step(x_k, k: int, A: TriDiag, rhs, xi_k, c: float = 1.0, theta: float = 1.0) -> np.ndarray:
    """X_(k+1) = X_(k) − (c/k^θ)·[A·X_(k) − rhs − ξ_(k)]."""
    if k < 1:
        raise InputError(f"iteration index must be >= 1, got {k}")
    x_k = np.asarray(x_k, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    xi_k = np.asarray(xi_k, dtype=np.float64)
    if rhs.shape != (A.n,) or xi_k.shape != (A.n,):
        raise InputError(f"rhs and xi must have length {A.n}")
    return x_k - _step_size(c, k, theta) * (matvec(A, x_k) - rhs - xi_k)


@njit(cache=True, nogil=True)
def _rm_advance(sub, diag, sup, rhs, x, noise, k0, c, theta):
    """Aplica noise.shape[0] passos a partir do índice k0, in-place em x."""
    n = x.shape[0]
    y = np.empty(n)
    for s in range(noise.shape[0]):
        k = k0 + s
        if theta == 1.0:
            step = c / k
        else:
            step = c / k**theta
        for i in range(n):
            r = diag[i] * x[i]
            if i > 0:
                r += sub[i - 1] * x[i - 1]
            if i < n - 1:
                r += sup[i] * x[i + 1]
            r = r - rhs[i]
            r = r - noise[s, i]
            y[i] = x[i] - step * r
        for i in range(n):
            x[i] = y[i]


def check_spectral_condition(A: TriDiag) -> bool:
    """inf{Re λ ; λ ∈ σ(A)} > 0; matrizes não simétricas não são verificadas."""
    if not A.symmetric:
        logger.info("spectral condition not checked: matrix is not symmetric")
        return True
    min_real = spectrum(A).min_real
    if min_real <= 0.0:
        logger.warning(
            "spectral condition violated: min Re(lambda) = %.6g <= 0; iteration may diverge",
            min_real,
        )
        return False
    return True


def rm_solve(
    A: TriDiag,
    rhs,
    cfg: RMConfig,
    noise: NoiseModel,
    stream: Optional[np.random.Generator] = None,
    x_exact: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, RMTrace]:
    """
    Itera Robbins–Monro de k = 1 até K.

    Parameters
    ----------
    stream : Generator, optional
        Fluxo de ruído; ausente → make_stream(cfg.seed).
    x_exact : array, optional
        Referência X_(ex); ausente → thomas_solve(A, rhs).

    Returns
    -------
    (x_final, trace)
    """
    rhs = np.ascontiguousarray(rhs, dtype=np.float64)
    if rhs.shape != (A.n,):
        raise InputError(f"rhs: expected length {A.n}, got shape {rhs.shape}")
    if noise.n != A.n:
        raise InputError(f"noise dimension {noise.n} does not match matrix dimension {A.n}")

    if cfg.x_init is None:
        x = np.zeros(A.n)
    else:
        x = np.array(cfg.x_init, dtype=np.float64)
        if x.shape != (A.n,):
            raise InputError(f"x_init: expected length {A.n}, got shape {x.shape}")

    trace = RMTrace(spectral_ok=check_spectral_condition(A))
    trace.x_exact = thomas_solve(A, rhs) if x_exact is None else np.asarray(x_exact, dtype=np.float64)
    if cfg.record_iterates:
        trace.iterates = []
    draws = [] if cfg.record_noise else None

    stream = make_stream(cfg.seed) if stream is None else stream
    block_size = TOL_BLOCK if cfg.tol is not None else BLOCK
    c, theta = float(cfg.gain), float(cfg.theta)

    targets = list(cfg.checkpoints)
    if targets[-1] < cfg.max_iters:
        targets.append(int(cfg.max_iters))

    k = 1
    for target in targets:
        while k <= target:
            count = min(block_size, target - k + 1)
            block = sample_noise_block(noise, stream, count)
            if draws is not None:
                draws.append(block)
            _rm_advance(A.sub, A.diag, A.sup, rhs, x, block, k, c, theta)
            k += count
            if cfg.tol is not None and np.linalg.norm(matvec(A, x) - rhs) <= cfg.tol:
                trace.stopped_at = k - 1
                break

        if target not in cfg.checkpoints and trace.stopped_at is None:
            continue
        trace.checkpoints.append(min(target, k - 1))
        trace.err_norms.append(float(np.linalg.norm(x - trace.x_exact)))
        if trace.iterates is not None:
            trace.iterates.append(x.copy())
        if trace.stopped_at is not None:
            logger.info("early stop at k = %d (tol = %g)", trace.stopped_at, cfg.tol)
            break

    if draws is not None:
        trace.noise_draws = np.concatenate(draws) if draws else np.empty((0, A.n))
    return x, trace


def biased_target(A: TriDiag, rhs, noise: NoiseModel) -> np.ndarray:
    """Ponto para onde a iteração converge quando E[ξ] = mean_offset·1."""
    rhs = np.asarray(rhs, dtype=np.float64)
    return thomas_solve(A, rhs + noise.mean_offset)
