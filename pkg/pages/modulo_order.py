"""
📐 Módulo Order — Ordem de convergência
========================================
Divide dx e dt por 2 a cada nível e reporta o erro máximo em t_end
contra a solução manufaturada seno, com as razões entre níveis.
"""

from __future__ import annotations

from core.exceptions import InputError
from core.stepper import order_study
from utils.helpers import export_report, fmt_number, summary
from utils.i18n import t


def render(cfg, args, lang: str) -> int:
    if not cfg.has_analytic:
        raise InputError("order study needs initial = sine with zero boundaries")

    problem = cfg.problem()
    rm_cfg = noise = None
    if cfg.solver == "rm":
        rm_cfg = cfg.rm_config(checkpoints=(cfg.k,))
        noise = cfg.noise_model(cfg.n - 1)

    frame = order_study(
        problem, cfg.n, cfg.m, cfg.t_end, cfg.levels,
        solver=cfg.solver, rm_cfg=rm_cfg, noise=noise, workers=cfg.workers or None,
    )
    export_report(frame, cfg.header_lines("order"), cfg.out, args.xlsx, "order")

    summary(t("order_summary", lang, levels=cfg.levels, ratio=fmt_number(frame["ratio"].iloc[-1], 3, lang)))
    return 0
