"""
Hierarquia de exceções do pacote.
"""

from __future__ import annotations


class HeatRMError(Exception):
    """Base de todos os erros do laboratório."""


class InputError(HeatRMError, ValueError):
    """Entrada inválida: dimensões incompatíveis, grade inválida, parâmetros ausentes."""


class SingularMatrixError(HeatRMError, ArithmeticError):
    """Pivô nulo durante a eliminação de Thomas."""


class UnsupportedInputError(HeatRMError, NotImplementedError):
    """Caso fora do escopo (ex.: espectro de matriz não simétrica)."""


class FitError(HeatRMError, ValueError):
    """Ajuste impossível com os pontos disponíveis."""


class VerificationFailure(HeatRMError, RuntimeError):
    """
    A verificação numérica falhou (ex.: nenhum p viável no ajuste da cota do produto).

    O atributo ``table`` guarda a varredura (p, γ) que levou à falha.
    """

    def __init__(self, message: str, table=None):
        super().__init__(message)
        self.table = table


class ConfigError(InputError):
    """Erro de configuração, com número da linha quando disponível."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)
