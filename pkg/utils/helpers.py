"""
Funções auxiliares para formatação de valores e exportação de relatórios.
"""

from __future__ import annotations

import logging
import sys
from io import BytesIO
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


# =============================================================================
# Formatação de números
# =============================================================================

def _localize(text: str, lang: str) -> str:
    # Notação brasileira: vírgula decimal
    if lang == "pt":
        return text.replace(",", "X").replace(".", ",").replace("X", ".")
    return text


def fmt_number(value: float, decimals: int = 4, lang: str = "pt") -> str:
    """
    Formata um número para as linhas de resumo.
    Valores muito pequenos ou muito grandes vão para notação científica.
    Exemplos (pt): 0.5 → '0,5000'  |  3.2e-7 → '3,2000e-07'
    """
    if value is None or pd.isna(value):
        return "—"
    abs_val = abs(value)
    if abs_val != 0.0 and (abs_val < 1e-3 or abs_val >= 1e6):
        formatted = f"{value:.{decimals}e}"
    else:
        formatted = f"{value:,.{decimals}f}"
    return _localize(formatted, lang)


def fmt_pct(value: float, lang: str = "pt") -> str:
    """Formata percentual. Ex: 0.1234 → '12,34%'"""
    if value is None or pd.isna(value):
        return "—"
    return _localize(f"{value * 100:,.2f}%", lang)


# =============================================================================
# Exportação de dados
# =============================================================================

def to_csv_bytes(df: pd.DataFrame, header_lines: Iterable[str] = ()) -> bytes:
    """
    Converte DataFrame para bytes CSV.

    Vírgula como separador, ponto decimal, 17 dígitos significativos e
    linhas de comentário '#' antes da linha de nomes de colunas.
    Saída UTF-8 sem BOM, terminada em '\\n'.
    """
    comments = "".join(line + "\n" for line in header_lines)
    body = df.to_csv(
        index=False,
        sep=",",
        float_format=CSV_FLOAT_FORMAT,
        na_rep="nan",
        lineterminator="\n",
    )
    return (comments + body).encode("utf-8")


def to_excel_bytes(df: pd.DataFrame, sheet_name: str = "report") -> bytes:
    """Converte DataFrame para bytes XLSX."""
    buffer = BytesIO()
    with pd.ExcelWriter(buffer, engine="openpyxl") as writer:
        df.to_excel(writer, index=False, sheet_name=sheet_name[:31])
    return buffer.getvalue()


def write_bytes(data: bytes, path: Optional[str] = None) -> None:
    """Grava em ``path`` ou, se ausente, na saída padrão."""
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    Path(path).write_bytes(data)


def export_report(
    df: pd.DataFrame,
    header_lines: Iterable[str],
    out: Optional[str] = None,
    xlsx: Optional[str] = None,
    sheet_name: str = "report",
) -> None:
    """CSV em ``out`` (ou saída padrão) e, opcionalmente, XLSX em ``xlsx``."""
    write_bytes(to_csv_bytes(df, header_lines), out)
    if out is not None:
        logger.info("report written to %s", out)
    if xlsx is not None:
        Path(xlsx).write_bytes(to_excel_bytes(df, sheet_name))
        logger.info("xlsx written to %s", xlsx)


def summary(text: str) -> None:
    """Linha de resumo em stderr (stdout fica reservado ao CSV)."""
    print(text, file=sys.stderr)
