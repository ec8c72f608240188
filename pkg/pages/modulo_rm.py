"""
🎲 Módulo RM Study — Convergência quase completa
=================================================
Sobre o sistema do primeiro passo de Crank–Nicolson:

1. piloto (fluxos independentes) mede o piso de ruído; ε = 3 × piso
   quando não configurado;
2. (γ, p) e α vêm dos certificados, salvo se informados;
3. R réplicas com checkpoints dão probabilidades de cauda, somas parciais
   e quantis de erro;
4. o expoente q ajustado às medianas é comparado com 2p.
"""

from __future__ import annotations

import logging

from core.analysis import (
    aco_study,
    bounds_certificate,
    compare_rate,
    hoeffding_series,
    measure_noise_floor,
)
from core.exceptions import InputError, VerificationFailure
from core.stepper import initial_step
from utils.helpers import export_report, fmt_number, fmt_pct, summary
from utils.i18n import t

logger = logging.getLogger(__name__)

# ε = EPSILON_FACTOR × piso de ruído medido
EPSILON_FACTOR = 3.0


def _fitted_constants(cfg, A):
    """(α, p) do arquivo ou dos certificados; (None, None) se o ajuste falhar."""
    if cfg.alpha is not None and cfg.p is not None:
        return cfg.alpha, cfg.p
    if cfg.noise == "zero":
        return cfg.alpha, cfg.p
    try:
        params = bounds_certificate(A, cfg.k_max, cfg.b, cfg.gain, cfg.theta, with_walk=False).params
    except VerificationFailure as exc:
        logger.warning("no fitted constants for the Hoeffding curve: %s", exc)
        return cfg.alpha, cfg.p
    alpha = cfg.alpha if cfg.alpha is not None else params.alpha
    p = cfg.p if cfg.p is not None else params.p
    return alpha, p


def render(cfg, args, lang: str) -> int:
    problem = cfg.problem()
    grid = cfg.grid(problem)
    A, rhs, u_0 = initial_step(problem, grid)
    noise = cfg.noise_model(A.n)
    rm_cfg = cfg.rm_config(x_init=u_0)

    floor = None
    epsilon = cfg.epsilon
    if epsilon is None:
        floor = measure_noise_floor(A, rhs, rm_cfg, noise, cfg.pilot_replications, workers=cfg.workers)
        if not floor > 0.0:
            raise InputError("measured noise floor is zero; set epsilon in the config")
        epsilon = EPSILON_FACTOR * floor

    alpha, p = _fitted_constants(cfg, A)
    report = aco_study(A, rhs, rm_cfg, noise, epsilon, cfg.replications, alpha, p, workers=cfg.workers)

    comparison = None
    if report.fitted_rate is not None and p is not None:
        comparison = compare_rate(report.fitted_rate, p, cfg.rate_tolerance)

    header = cfg.header_lines("rm-study")
    header.append(f"# epsilon = {format(epsilon, '.17g')}")
    if floor is not None:
        header.append(f"# noise_floor = {format(floor, '.17g')}")
    if alpha is not None and p is not None:
        header.append(f"# alpha = {format(alpha, '.17g')}, p = {format(p, '.17g')}")
        _, converged = hoeffding_series(epsilon, alpha, p, cfg.k_max)
        header.append(f"# hoeffding_series_converged = {str(converged).lower()}")
    if report.fitted_rate is not None:
        header.append(f"# fitted_q = {format(report.fitted_rate, '.17g')}")
    if comparison is not None:
        header.append(
            f"# claimed_2p = {format(comparison.claimed, '.17g')}, "
            f"rate_agree = {str(comparison.agree).lower()}"
        )
    if report.absorption_k is not None:
        header.append(f"# absorption_k = {report.absorption_k}")
    export_report(report.to_frame(), header, cfg.out, args.xlsx, "rm-study")

    if floor is not None:
        summary(t("rm_floor", lang, pilot=cfg.pilot_replications,
                  floor=fmt_number(floor, lang=lang), eps=fmt_number(epsilon, lang=lang)))
    summary(t("rm_tail", lang, tail=fmt_pct(report.tail_probs[-1], lang)))
    if report.absorption_k is not None:
        summary(t("rm_absorption", lang, k=report.absorption_k))
    if comparison is not None:
        verdict = t("agree" if comparison.agree else "disagree", lang)
        summary(t("rm_rate", lang, q=fmt_number(comparison.q, 3, lang),
                  claimed=fmt_number(comparison.claimed, 3, lang), verdict=verdict))
    elif report.fitted_rate is None:
        summary(t("rm_no_rate", lang))
    return 0
