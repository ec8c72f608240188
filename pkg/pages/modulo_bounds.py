"""
📏 Módulo Bounds — Certificados do produto e da soma
=====================================================
Ajusta (γ, p) para a norma do produto, o C da soma dos quadrados,
deriva α e verifica ambas as desigualdades em cada k ≤ k_max.
"""

from __future__ import annotations

import logging

from core.analysis import bounds_certificate, walk_dominates_lemma1
from core.cn import assemble_cn
from utils.helpers import export_report, fmt_number, summary
from utils.i18n import t

logger = logging.getLogger(__name__)


def render(cfg, args, lang: str) -> int:
    grid = cfg.grid()
    A = assemble_cn(grid).A
    cert = bounds_certificate(A, cfg.k_max, cfg.b, cfg.gain, cfg.theta, with_walk=True)
    params = cert.params

    header = cfg.header_lines("bounds")
    header.append(
        f"# gamma = {format(params.gamma, '.17g')}, p = {format(params.p, '.17g')}, "
        f"C = {format(params.C, '.17g')}, alpha = {format(params.alpha, '.17g')}"
    )
    if cert.walk is not None:
        dominates = walk_dominates_lemma1(params.p, cfg.k_max, cfg.theta)
        header.append(
            f"# walk_gamma = {format(cert.walk.gamma, '.17g')}, walk_p = {format(cert.walk.p, '.17g')}, "
            f"walk_dominates = {str(dominates).lower()}"
        )
    export_report(cert.table, header, cfg.out, args.xlsx, "bounds")

    summary(t("bounds_summary", lang,
              gamma=fmt_number(params.gamma, lang=lang), p=fmt_number(params.p, 2, lang),
              C=fmt_number(params.C, lang=lang), alpha=fmt_number(params.alpha, lang=lang)))
    if cert.walk is not None:
        summary(t("bounds_walk", lang,
                  gamma=fmt_number(cert.walk.gamma, lang=lang), p=fmt_number(cert.walk.p, 2, lang)))
    summary(t("bounds_holds", lang, holds=t("yes" if cert.all_hold else "no", lang)))

    if not cert.all_hold:
        failing = int((~cert.table["holds"]).sum())
        logger.warning("%d of %d certificate rows fail", failing, len(cert.table))
        return 1
    return 0
