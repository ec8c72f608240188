"""
📐 Verificação numérica da convergência
========================================
Confere empiricamente a maquinaria de convergência do procedimento de
Robbins–Monro aplicado ao sistema de Crank–Nicolson:

1. identidade de recursão do erro (forma fechada vs iteração direta);
2. cota do produto ‖∏_{j=i+1}^{k}(I − (c/j)A)‖ ≤ γ((i+1)/(k+1))^p;
3. cota da soma Σ_i ‖∏(…)·(c/i)‖² ≤ C·γ²/(k+1)^{2p};
4. cota exponencial tipo Hoeffding 2·exp(−(k+1)^{2p}ε²/α);
5. diagnóstico de convergência quase completa (probabilidades de cauda);
6. expoente empírico de decaimento.

As constantes (γ, p, C, α) são certificados ajustados em intervalos
finitos; cada relatório informa o intervalo verificado.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from numba import njit

from core.exceptions import FitError, InputError, UnsupportedInputError, VerificationFailure
from core.rm import NoiseModel, RMConfig, make_stream, rm_solve, rm_step
from core.tridiag import TriDiag, spectrum, thomas_solve

logger = logging.getLogger(__name__)

# Grade de p: {j / P_RESOLUTION : j = 1..P_STEPS}
P_RESOLUTION = 20
P_STEPS = 160
# Para cada i ≤ k_max/2, a razão norma/referência pode crescer no máximo 1 % de k_max/2 a k_max
DOUBLING_TOLERANCE = 0.01
# Folga relativa na comparação soma ≤ C·γ²/(k+1)^{2p}
LEMMA2_SLACK = 1e-12

# Chaves de fluxo: réplicas principais e piloto
MAIN_STREAM = 0
PILOT_STREAM = 1

STUDY_COLUMNS = ["k", "median_err", "q10_err", "q90_err", "tail_prob", "partial_sum", "hoeffding_bound"]
BOUNDS_COLUMNS = ["k", "max_ratio_over_i", "sum", "bound", "holds"]


# =============================================================================
# Tipos
# =============================================================================

@dataclass(frozen=True)
class BoundParams:
    """Constantes ajustadas: γ, p (produto), C (soma), α = 8C(γb)², b e ε."""

    gamma: float
    p: float
    C: float
    alpha: float
    b: float
    epsilon: Optional[float] = None
    k_max: Optional[int] = None

    @classmethod
    def derive(cls, gamma: float, p: float, C: float, b: float, **kwargs) -> "BoundParams":
        return cls(gamma=gamma, p=p, C=C, alpha=8.0 * C * (gamma * b) ** 2, b=b, **kwargs)


@dataclass
class Lemma1Fit:
    """
    Certificado (γ, p) da cota do produto, com a varredura de p que o produziu.

    Desempacotável: ``gamma, p = fit_lemma1(...)``.
    """

    gamma: float
    p: float
    k_max: int
    c: float
    theta: float
    form: str
    scan: pd.DataFrame

    def __iter__(self):
        yield self.gamma
        yield self.p


@dataclass
class StudyReport:
    """Resultado de um estudo de convergência quase completa (a.co)."""

    checkpoints: np.ndarray
    tail_probs: np.ndarray
    partial_sums: np.ndarray
    median_err: np.ndarray
    q10_err: np.ndarray
    q90_err: np.ndarray
    epsilon: float
    R: int
    seed: int
    hoeffding: Optional[np.ndarray] = None
    pinelis: Optional[np.ndarray] = None
    fitted_rate: Optional[float] = None
    absorption_k: Optional[int] = None
    errors: Optional[np.ndarray] = field(default=None, repr=False)

    def to_frame(self) -> pd.DataFrame:
        hoeffding = self.hoeffding if self.hoeffding is not None else np.full(len(self.checkpoints), np.nan)
        return pd.DataFrame(
            {
                "k": np.asarray(self.checkpoints, dtype=np.int64),
                "median_err": self.median_err,
                "q10_err": self.q10_err,
                "q90_err": self.q90_err,
                "tail_prob": self.tail_probs,
                "partial_sum": self.partial_sums,
                "hoeffding_bound": np.minimum(hoeffding, 1.0),
            },
            columns=STUDY_COLUMNS,
        )


@dataclass(frozen=True)
class RateComparison:
    """Expoente medido q vs expoente alegado 2p."""

    q: float
    claimed: float
    agree: bool
    tolerance: float


@dataclass
class BoundsCertificate:
    """Certificados da norma do produto e da soma dos quadrados em 1 ≤ i ≤ k ≤ k_max."""

    params: BoundParams
    lemma1: Lemma1Fit
    walk: Optional[Lemma1Fit]
    table: pd.DataFrame

    @property
    def all_hold(self) -> bool:
        return bool(self.table["holds"].all())


# =============================================================================
# Kernels de produtos ∏(1 − cλ/j^θ)
# =============================================================================

@njit(cache=True)
def _factor(lam, j, c, theta):
    if theta == 1.0:
        return 1.0 - c * lam / j
    return 1.0 - c * lam / j**theta


@njit(cache=True)
def _product_norm_kernel(lam, i, k, c, theta):
    """max_λ |∏_{j=i+1}^{k}(1 − cλ/j^θ)|."""
    best = 0.0
    for e in range(lam.shape[0]):
        prod = 1.0
        for j in range(i + 1, k + 1):
            prod *= _factor(lam[e], j, c, theta)
        if abs(prod) > best:
            best = abs(prod)
    return best


@njit(cache=True)
def _lemma2_sum_kernel(lam, k, c, theta):
    """Σ_{i=1}^{k} (max_λ|∏_{j=i+1}^{k}(1 − cλ/j^θ)| · c/i^θ)², varrendo i de k até 1."""
    n = lam.shape[0]
    prods = np.ones(n)
    total = 0.0
    for i in range(k, 0, -1):
        best = 0.0
        for e in range(n):
            if abs(prods[e]) > best:
                best = abs(prods[e])
        step = c / i if theta == 1.0 else c / i**theta
        total += (best * step) ** 2
        for e in range(n):
            prods[e] *= _factor(lam[e], i, c, theta)
    return total


@njit(cache=True)
def _product_norm_table(lam, k_max, c, theta):
    """T[i, k] = max_λ |∏_{j=i+1}^{k}(1 − cλ/j^θ)| para 0 ≤ i ≤ k ≤ k_max (zero abaixo)."""
    T = np.zeros((k_max + 1, k_max + 1))
    P = np.empty(k_max + 1)
    for e in range(lam.shape[0]):
        for k in range(k_max + 1):
            if k > 0:
                f = _factor(lam[e], k, c, theta)
                for i in range(k):
                    P[i] *= f
            P[k] = 1.0
            for i in range(k + 1):
                v = abs(P[i])
                if v > T[i, k]:
                    T[i, k] = v
    return T


def _symmetric_eigenvalues(A: TriDiag) -> np.ndarray:
    if not A.symmetric:
        raise UnsupportedInputError("product norms are computed spectrally and need a symmetric matrix")
    return spectrum(A).eigenvalues


# =============================================================================
# Recursão do erro
# =============================================================================

def error_recursion_check(
    A: TriDiag,
    x_init,
    rhs,
    noise_draws,
    k: int,
    c: float = 1.0,
    theta: float = 1.0,
) -> float:
    """
    Desvio máximo entre a iteração direta e a forma fechada

        X_(k+1) − X_ex = ∏_{i=1}^{k}(I − s_i A)(X_1 − X_ex) + Σ_{i=1}^{k} ∏_{j=i+1}^{k}(I − s_j A) s_i ξ_i,

    com s_i = c/i^θ e produto vazio = I.
    """
    noise_draws = np.asarray(noise_draws, dtype=np.float64)
    if noise_draws.shape[0] < k:
        raise InputError(f"need at least {k} noise draws, got {noise_draws.shape[0]}")
    x_init = np.asarray(x_init, dtype=np.float64)
    x_ex = thomas_solve(A, rhs)

    x = x_init.copy()
    for i in range(1, k + 1):
        x = rm_step(x, i, A, rhs, noise_draws[i - 1], c, theta)
    forward = x - x_ex

    dense = A.to_dense()
    eye = np.eye(A.n)
    prod = eye.copy()
    noise_term = np.zeros(A.n)
    for i in range(k, 0, -1):
        s_i = c / i if theta == 1.0 else c / i**theta
        noise_term += prod @ (s_i * noise_draws[i - 1])
        prod = prod @ (eye - s_i * dense)
    closed = prod @ (x_init - x_ex) + noise_term

    return float(np.max(np.abs(forward - closed)))


# =============================================================================
# Norma do produto: cota em lei de potência
# =============================================================================

def product_norm(A: TriDiag, i: int, k: int, c: float = 1.0, theta: float = 1.0) -> float:
    """
    ‖∏_{j=i+1}^{k}(I − (c/j^θ)A)‖₂ para A simétrica.

    Todos os fatores compartilham autovetores, logo a norma é
    max_λ |∏(1 − cλ/j^θ)|. Produto vazio (i == k) = 1.
    """
    if not 0 <= i <= k:
        raise InputError(f"need 0 <= i <= k, got i={i}, k={k}")
    lam = _symmetric_eigenvalues(A)
    return float(_product_norm_kernel(lam, int(i), int(k), float(c), float(theta)))


def product_norm_table(A: TriDiag, k_max: int, c: float = 1.0, theta: float = 1.0) -> np.ndarray:
    """Tabela completa T[i, k], 0 ≤ i ≤ k ≤ k_max; entradas com i > k são zero."""
    lam = _symmetric_eigenvalues(A)
    return _product_norm_table(lam, int(k_max), float(c), float(theta))


def _pairs(k_max: int):
    i, k = np.triu_indices(k_max + 1)
    keep = i >= 1
    return i[keep], k[keep]


def _gamma_for(log_norms: np.ndarray, decay: np.ndarray, p: float) -> float:
    # menor γ com log T[i, k] ≤ log γ − p·decay(i, k) em todos os pares
    return float(np.exp(np.max(log_norms + p * decay)))


def _fit_power_certificate(table: np.ndarray, decay_fn, k_max: int, form: str) -> tuple[float, float, pd.DataFrame]:
    i, k = _pairs(k_max)
    with np.errstate(divide="ignore"):
        log_norms = np.log(table[i, k])
    decay = decay_fn(i, k)

    # R(i, k) = T[i, k]·exp(p·decay) comparado entre k_max/2 e k_max, linha a linha
    k_half = max(k_max // 2, 1)
    rows_i = np.arange(1, k_half + 1)
    with np.errstate(divide="ignore"):
        log_hi = np.log(table[rows_i, k_max])
        log_lo = np.log(table[rows_i, k_half])
    d_hi = decay_fn(rows_i, np.full_like(rows_i, k_max))
    d_lo = decay_fn(rows_i, np.full_like(rows_i, k_half))
    finite = np.isfinite(log_hi) & np.isfinite(log_lo)

    rows = []
    for p in np.arange(1, P_STEPS + 1) / P_RESOLUTION:
        gamma = _gamma_for(log_norms, decay, p)
        if finite.any():
            growth = float(np.exp(np.max((log_hi - log_lo + p * (d_hi - d_lo))[finite])))
        else:
            growth = math.inf
        feasible = bool(np.isfinite(gamma) and growth <= 1.0 + DOUBLING_TOLERANCE)
        rows.append({"p": p, "gamma": gamma, "growth": growth, "feasible": feasible})
    scan = pd.DataFrame(rows)

    feasible = scan[scan["feasible"]]
    if feasible.empty:
        raise VerificationFailure(
            f"{form}: no feasible p on (0, {P_STEPS / P_RESOLUTION}] for k_max = {k_max}", table=scan
        )
    best = feasible.iloc[-1]
    return float(best["gamma"]), float(best["p"]), scan


def _lemma1_decay(i, k):
    return np.log((k + 1.0) / (i + 1.0))


def _walk_decay(theta: float):
    def decay(i, k):
        j = np.arange(1, k.max() + 1, dtype=np.float64)
        with np.errstate(divide="ignore"):
            logs = np.log1p(-1.0 / j**theta)
        logs[0] = 0.0  # j = 1 só aparece com i = 0, excluído
        cum = np.concatenate(([0.0], np.cumsum(logs)))
        return -(cum[k] - cum[i])

    return decay


def fit_lemma1(
    A: TriDiag,
    k_max: int,
    c: float = 1.0,
    theta: float = 1.0,
    table: Optional[np.ndarray] = None,
) -> Lemma1Fit:
    """
    Ajusta (γ, p) tais que product_norm(A, i, k) ≤ γ((i+1)/(k+1))^p para TODO 1 ≤ i ≤ k ≤ k_max.

    Em uma grade finita qualquer p é satisfeito com γ grande; p é viável quando,
    para cada i ≤ k_max/2, a razão norma/referência não cresce (mais de 1 %)
    de k = k_max/2 a k = k_max. Retorna o maior p viável da grade e o γ mínimo
    correspondente.

    Raises
    ------
    VerificationFailure
        Nenhum p viável (a cota em lei de potência é falseada neste intervalo).
    """
    if k_max < 2:
        raise InputError(f"k_max must be >= 2, got {k_max}")
    if table is None:
        table = product_norm_table(A, k_max, c, theta)
    gamma, p, scan = _fit_power_certificate(table, _lemma1_decay, k_max, "lemma1")
    logger.info("product-norm certificate on [1, %d]: gamma = %.6g, p = %.4g", k_max, gamma, p)
    return Lemma1Fit(gamma=gamma, p=p, k_max=k_max, c=c, theta=theta, form="lemma1", scan=scan)


def fit_walk(
    A: TriDiag,
    k_max: int,
    c: float = 1.0,
    theta: float = 1.0,
    table: Optional[np.ndarray] = None,
) -> Lemma1Fit:
    """Mesmo ajuste contra a referência γ·(∏_{j=i+1}^{k}(1 − 1/j^θ))^p."""
    if k_max < 2:
        raise InputError(f"k_max must be >= 2, got {k_max}")
    if table is None:
        table = product_norm_table(A, k_max, c, theta)
    gamma, p, scan = _fit_power_certificate(table, _walk_decay(theta), k_max, "walk")
    return Lemma1Fit(gamma=gamma, p=p, k_max=k_max, c=c, theta=theta, form="walk", scan=scan)


def walk_dominates_lemma1(p: float, k_max: int, theta: float = 1.0) -> bool:
    """(∏_{j=i+1}^{k}(1 − 1/j^θ))^p ≤ ((i+1)/(k+1))^p em toda a grade 1 ≤ i ≤ k ≤ k_max."""
    i, k = _pairs(k_max)
    walk = -_walk_decay(theta)(i, k)
    lemma = -_lemma1_decay(i, k)
    return bool(np.all(p * walk <= p * lemma + 1e-12))


# =============================================================================
# Soma dos quadrados
# =============================================================================

def lemma2_sums(table: np.ndarray, c: float = 1.0, theta: float = 1.0) -> np.ndarray:
    """S[k] = Σ_{i=1}^{k} (T[i, k]·c/i^θ)² para k = 0..k_max (S[0] = 0)."""
    k_max = table.shape[0] - 1
    idx = np.arange(k_max + 1, dtype=np.float64)
    steps = np.zeros(k_max + 1)
    steps[1:] = c / idx[1:] if theta == 1.0 else c / idx[1:] ** theta
    return ((table * steps[:, None]) ** 2).sum(axis=0)


def fit_lemma2_constant(sums: np.ndarray, gamma: float, p: float) -> float:
    """C = max_{1 ≤ k ≤ k_max} S[k]·(k+1)^{2p}/γ²."""
    k = np.arange(1, sums.shape[0], dtype=np.float64)
    return float(np.max(sums[1:] * (k + 1.0) ** (2.0 * p) / gamma**2))


def lemma2_sum(A: TriDiag, k: int, c: float, params: BoundParams, theta: float = 1.0) -> tuple[float, float, bool]:
    """(soma, cota C·γ²/(k+1)^{2p}, vale?) no índice k."""
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    lam = _symmetric_eigenvalues(A)
    total = float(_lemma2_sum_kernel(lam, int(k), float(c), float(theta)))
    bound = params.C * params.gamma**2 / (k + 1.0) ** (2.0 * params.p)
    return total, bound, bool(total <= bound * (1.0 + LEMMA2_SLACK))


# =============================================================================
# Cotas exponenciais
# =============================================================================

def hoeffding_bound(epsilon, k, alpha: float, p: float):
    """2·exp(−(k+1)^{2p}·ε²/α); vetorizável em k. Não truncado em 1."""
    if not (alpha > 0.0 and p > 0.0):
        raise InputError(f"alpha and p must be > 0, got alpha={alpha}, p={p}")
    k = np.asarray(k, dtype=np.float64)
    if np.any(k < 1):
        raise InputError("k must be >= 1")
    value = 2.0 * np.exp(-((k + 1.0) ** (2.0 * p)) * np.square(epsilon) / alpha)
    return float(value) if value.ndim == 0 else value


def hoeffding_series(epsilon: float, alpha: float, p: float, k_max: int) -> tuple[np.ndarray, bool]:
    """
    Somas parciais de v_k = 2·exp(−(k+1)^{2p}ε²/α), k = 1..k_max.

    ``converged`` indica que o último incremento ficou abaixo de 1e−12.
    """
    terms = hoeffding_bound(epsilon, np.arange(1, k_max + 1), alpha, p)
    partial = np.cumsum(terms)
    return partial, bool(terms[-1] < 1e-12)


def pinelis_bound(A: TriDiag, epsilon: float, k: int, b: float, c: float = 1.0, theta: float = 1.0) -> float:
    """
    Cota de Pinelis–Hoeffding sem constantes ajustadas:

        2·exp(−ε² / (8b²·Σ_{i=1}^{k}‖∏_{j=i+1}^{k}(I − s_j A)‖²·s_i²))
    """
    lam = _symmetric_eigenvalues(A)
    total = _lemma2_sum_kernel(lam, int(k), float(c), float(theta))
    if b == 0.0 or total == 0.0:
        return 0.0
    return float(2.0 * math.exp(-(epsilon**2) / (8.0 * b**2 * total)))


# =============================================================================
# Certificados combinados
# =============================================================================

def bounds_certificate(
    A: TriDiag,
    k_max: int,
    b: float,
    c: float = 1.0,
    theta: float = 1.0,
    with_walk: bool = True,
) -> BoundsCertificate:
    """
    Ajusta (γ, p) da norma do produto, C da soma dos quadrados, deriva α = 8C(γb)² e
    tabela, para cada k, max_i da razão norma/referência, a soma dos quadrados,
    a cota e se ambas as desigualdades valem.
    """
    table = product_norm_table(A, k_max, c, theta)
    fit = fit_lemma1(A, k_max, c, theta, table=table)
    walk = None
    if with_walk:
        try:
            walk = fit_walk(A, k_max, c, theta, table=table)
        except VerificationFailure as exc:
            logger.warning("walk-form certificate failed: %s", exc)

    sums = lemma2_sums(table, c, theta)
    C = fit_lemma2_constant(sums, fit.gamma, fit.p)
    params = BoundParams.derive(fit.gamma, fit.p, C, b, k_max=k_max)

    k = np.arange(1, k_max + 1)
    ratios = np.zeros(k_max + 1)
    idx = np.arange(k_max + 1, dtype=np.float64)
    for kk in k:
        weights = ((idx[1 : kk + 1] + 1.0) / (kk + 1.0)) ** fit.p
        ratios[kk] = np.max(table[1 : kk + 1, kk] / weights)
    bound = C * fit.gamma**2 / (k + 1.0) ** (2.0 * fit.p)
    holds = (ratios[1:] <= fit.gamma * (1.0 + LEMMA2_SLACK)) & (sums[1:] <= bound * (1.0 + LEMMA2_SLACK))

    frame = pd.DataFrame(
        {"k": k, "max_ratio_over_i": ratios[1:], "sum": sums[1:], "bound": bound, "holds": holds},
        columns=BOUNDS_COLUMNS,
    )
    logger.info("sum-of-squares constant on [1, %d]: C = %.6g, alpha = %.6g", k_max, C, params.alpha)
    return BoundsCertificate(params=params, lemma1=fit, walk=walk, table=frame)


# =============================================================================
# Estudo a.co
# =============================================================================

def _workers(workers: Optional[int]) -> int:
    return workers if workers and workers > 0 else (os.cpu_count() or 1)


def run_replications(
    A: TriDiag,
    rhs,
    cfg: RMConfig,
    noise: NoiseModel,
    R: int,
    stream_key: int = MAIN_STREAM,
    workers: Optional[int] = None,
) -> np.ndarray:
    """
    Executa R réplicas independentes; retorna a matriz de erros (R, checkpoints).

    A réplica r usa o fluxo (cfg.seed, stream_key, r); o resultado não
    depende da ordem de conclusão.
    """
    x_exact = thomas_solve(A, rhs)
    errors = np.empty((R, len(cfg.checkpoints)))

    def one(r: int):
        _, trace = rm_solve(A, rhs, cfg, noise, stream=make_stream(cfg.seed, stream_key, r), x_exact=x_exact)
        return trace.err_norms

    with ThreadPoolExecutor(max_workers=_workers(workers)) as executor:
        futures = {executor.submit(one, r): r for r in range(R)}
        for future in as_completed(futures):
            errors[futures[future]] = future.result()
    return errors


def measure_noise_floor(
    A: TriDiag,
    rhs,
    cfg: RMConfig,
    noise: NoiseModel,
    pilot_R: int = 10,
    window: int = 3,
    workers: Optional[int] = None,
) -> float:
    """Maior mediana de erro do piloto entre os ``window`` últimos checkpoints."""
    errors = run_replications(A, rhs, cfg, noise, pilot_R, stream_key=PILOT_STREAM, workers=workers)
    medians = np.median(errors, axis=0)
    floor = float(np.max(medians[-window:]))
    logger.info("noise floor from %d pilot replications: %.6g", pilot_R, floor)
    return floor


def aco_study(
    A: TriDiag,
    rhs,
    cfg: RMConfig,
    noise: NoiseModel,
    epsilon: float,
    R: int,
    alpha: Optional[float] = None,
    p: Optional[float] = None,
    workers: Optional[int] = None,
    keep_errors: bool = False,
) -> StudyReport:
    """
    Diagnóstico de convergência quase completa.

    tail_probs[j] = #{réplicas com ‖X_(k_j+1) − X_ex‖ > ε} / R, somas parciais
    acumuladas, quantis de erro, curva de Hoeffding para (α, p) informados,
    cota de Pinelis por checkpoint e o primeiro checkpoint em que o termo
    determinístico ‖∏(I − s_i A)(X_1 − X_ex)‖ fica ≤ ε/2.
    """
    if R < 2:
        raise InputError(f"need at least 2 replications, got {R}")
    if not epsilon > 0.0:
        raise InputError(f"epsilon must be > 0, got {epsilon}")

    logger.info("a.co study: R = %d, epsilon = %.6g, checkpoints = %s", R, epsilon, list(cfg.checkpoints))
    errors = run_replications(A, rhs, cfg, noise, R, workers=workers)
    checkpoints = np.asarray(cfg.checkpoints, dtype=np.int64)

    tail = np.mean(errors > epsilon, axis=0)
    report = StudyReport(
        checkpoints=checkpoints,
        tail_probs=tail,
        partial_sums=np.cumsum(tail),
        median_err=np.median(errors, axis=0),
        q10_err=np.quantile(errors, 0.1, axis=0),
        q90_err=np.quantile(errors, 0.9, axis=0),
        epsilon=float(epsilon),
        R=int(R),
        seed=int(cfg.seed),
        errors=errors if keep_errors else None,
    )

    if alpha is not None and p is not None:
        report.hoeffding = hoeffding_bound(epsilon, checkpoints, alpha, p)
    if noise.kind != "zero" and A.symmetric:
        report.pinelis = np.array(
            [pinelis_bound(A, epsilon, int(k), noise.b, cfg.gain, cfg.theta) for k in checkpoints]
        )

    _, deterministic = rm_solve(A, rhs, cfg, NoiseModel.zero(A.n))
    below = [k for k, e in zip(deterministic.checkpoints, deterministic.err_norms) if e <= epsilon / 2.0]
    report.absorption_k = int(below[0]) if below else None

    try:
        report.fitted_rate = rate_fit(report.median_err, checkpoints)
    except FitError as exc:
        logger.info("rate not fitted: %s", exc)
    return report


# =============================================================================
# Taxa de decaimento
# =============================================================================

def rate_fit(median_err: Sequence[float], checkpoints: Sequence[int]) -> float:
    """
    Expoente q da lei de potência err ≈ C·k^{−q} (mínimos quadrados em log–log).

    Medianas não positivas são descartadas; menos de 3 pontos restantes → FitError.
    """
    med = np.asarray(median_err, dtype=np.float64)
    ks = np.asarray(checkpoints, dtype=np.float64)
    if med.shape != ks.shape:
        raise InputError("median_err and checkpoints must have the same length")
    keep = (med > 0.0) & (ks > 0.0)
    if np.count_nonzero(keep) < 3:
        raise FitError(f"need >= 3 positive medians, got {np.count_nonzero(keep)}")
    slope, _ = np.polyfit(np.log(ks[keep]), np.log(med[keep]), 1)
    return float(-slope)


def compare_rate(q: float, p: float, tolerance: float = 0.25) -> RateComparison:
    """Compara q com 2p; concordância quando |q − 2p| ≤ tolerance·2p."""
    claimed = 2.0 * p
    agree = abs(q - claimed) <= tolerance * claimed
    if not agree:
        logger.warning("measured decay exponent q = %.4g disagrees with claimed 2p = %.4g", q, claimed)
    return RateComparison(q=q, claimed=claimed, agree=bool(agree), tolerance=tolerance)
