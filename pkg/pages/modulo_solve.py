"""
🔥 Módulo Solve — Marcha no tempo
==================================
Resolve a equação do calor de t = 0 a t_end e exporta o campo u(x, t):
cabeçalho com as coordenadas x, uma linha por nível de tempo.
"""

from __future__ import annotations

from core.stepper import analytic_solution, solve_heat
from utils.helpers import export_report, fmt_number, summary
from utils.i18n import t


def render(cfg, args, lang: str) -> int:
    problem = cfg.problem()
    grid = cfg.grid(problem)

    rm_cfg = noise = None
    if cfg.solver == "rm":
        rm_cfg = cfg.rm_config(checkpoints=(cfg.k,))
        noise = cfg.noise_model(grid.interior)

    field = solve_heat(problem, grid, cfg.solver, rm_cfg, noise)
    export_report(field.to_frame(), cfg.header_lines("solve"), cfg.out, args.xlsx, "solve")

    summary(t("solve_summary", lang, n=grid.N, m=grid.M, a=fmt_number(grid.a, lang=lang), solver=cfg.solver))
    if cfg.has_analytic:
        err = field.max_error(lambda x, tt: analytic_solution(x, tt, cfg.d, cfg.x_lo, cfg.x_hi))
        summary(t("solve_max_error", lang, err=fmt_number(err, lang=lang)))
    else:
        summary(t("solve_no_analytic", lang))
    if not field.max_principle_ok:
        summary(t("solve_max_principle", lang))
    return 0
