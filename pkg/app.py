"""
🏠 Laboratório Calor-RM — Hub Central
======================================
Ponto de entrada da linha de comando. Lê a configuração, aplica as
sobreposições das flags e despacha para o módulo do subcomando.

Para executar:
    pip install -r requirements.txt
    python app.py solve --config exemplo.cfg --out campo.csv
"""

from __future__ import annotations

import argparse
import importlib
import logging
import sys
from dataclasses import replace
from typing import Optional, Sequence

from core.exceptions import ConfigError, HeatRMError
from utils.config import LANG_CHOICES, SOLVER_CHOICES, load_config, validate
from utils.i18n import t

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

# subcomando → (módulo em pages/, chave da descrição)
COMMANDS = {
    "solve": ("modulo_solve", "solve_desc"),
    "order": ("modulo_order", "order_desc"),
    "rm-study": ("modulo_rm", "rm_desc"),
    "bounds": ("modulo_bounds", "bounds_desc"),
    "recursion-check": ("modulo_recursion", "recursion_desc"),
}


# =============================================================================
# Parser
# =============================================================================

def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser(lang: str = "pt") -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help=t("help_config", lang))
    common.add_argument("--out", metavar="PATH", help=t("help_out", lang))
    common.add_argument("--seed", type=_seed, metavar="U64", help=t("help_seed", lang))
    common.add_argument("--solver", choices=SOLVER_CHOICES, help=t("help_solver", lang))
    common.add_argument("--xlsx", metavar="PATH", help=t("help_xlsx", lang))
    common.add_argument("--lang", choices=LANG_CHOICES, help=t("help_lang", lang))
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help=t("help_log_level", lang),
    )
    common.add_argument("-v", "--verbose", action="store_true", help=t("help_verbose", lang))

    parser = argparse.ArgumentParser(
        prog="heatrm",
        description=f"{t('app_title', lang)}: {t('app_description', lang)}",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, (_, desc_key) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=t(desc_key, lang), description=t(desc_key, lang))
    return parser


def _setup_logging(args: argparse.Namespace) -> None:
    level = logging.INFO if args.verbose and args.log_level == "WARNING" else getattr(logging, args.log_level)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _effective_config(args: argparse.Namespace):
    """Padrões < arquivo < flags."""
    cfg = load_config(args.config)
    overrides = {
        key: getattr(args, key)
        for key in ("seed", "solver", "out", "lang")
        if getattr(args, key) is not None
    }
    if overrides:
        cfg = replace(cfg, **overrides)
        problems = validate(cfg)
        if problems:
            key, message = problems[0]
            raise ConfigError(f"{key}: {message}")
    return cfg


# =============================================================================
# Router — decide qual módulo executar
# =============================================================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args)

    try:
        cfg = _effective_config(args)
        module_name, _ = COMMANDS[args.command]
        # Importa o módulo da página sob demanda
        module = importlib.import_module(f"pages.{module_name}")
        return module.render(cfg, args, cfg.lang)
    except ConfigError as exc:
        where = f"config:{exc.line}" if exc.line is not None else "config"
        print(f"{where}: {exc.message}", file=sys.stderr)
        return 2
    except HeatRMError as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"{t('error', getattr(args, 'lang', None) or 'pt')}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
