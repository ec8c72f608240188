"""
🔁 Módulo Recursion Check
==========================
Compara a iteração direta com a forma fechada da recursão do erro
no sistema do primeiro passo, com ruído sorteado e gravado.
"""

from __future__ import annotations

import pandas as pd

from core.analysis import error_recursion_check
from core.rm import make_stream, sample_noise_block
from core.stepper import initial_step
from utils.helpers import export_report, fmt_number, summary
from utils.i18n import t


def render(cfg, args, lang: str) -> int:
    problem = cfg.problem()
    A, rhs, u_0 = initial_step(problem, cfg.grid(problem))
    noise = cfg.noise_model(A.n)
    draws = sample_noise_block(noise, make_stream(cfg.seed, 0), cfg.recursion_k)

    deviation = error_recursion_check(A, u_0, rhs, draws, cfg.recursion_k, cfg.gain, cfg.theta)

    frame = pd.DataFrame({"k": [cfg.recursion_k], "max_deviation": [deviation]})
    export_report(frame, cfg.header_lines("recursion-check"), cfg.out, args.xlsx, "recursion-check")
    summary(t("recursion_summary", lang, k=cfg.recursion_k, dev=fmt_number(deviation, lang=lang)))
    return 0
