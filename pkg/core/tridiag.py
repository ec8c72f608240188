"""
🧮 Matrizes tridiagonais
=========================
Representação de matrizes tridiagonais, produto matriz–vetor,
solução direta pelo algoritmo de Thomas (o oráculo de exatidão)
e espectro para a condição inf{Re λ} > 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.linalg import eigh_tridiagonal

from core.exceptions import InputError, SingularMatrixError, UnsupportedInputError

logger = logging.getLogger(__name__)

# Tolerância da bissecção de Sturm (caso simétrico não constante)
STURM_TOL = 1e-12


# =============================================================================
# Tipos
# =============================================================================

def _frozen(values, length: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.shape[0] != length:
        raise InputError(f"{name}: expected length {length}, got {arr.shape[0]}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TriDiag:
    """
    Matriz tridiagonal n×n.

    Parameters
    ----------
    n : int
        Dimensão (n ≥ 1).
    sub : array
        Subdiagonal, comprimento n−1.
    diag : array
        Diagonal principal, comprimento n.
    sup : array
        Superdiagonal, comprimento n−1.
    """

    n: int
    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        if int(self.n) < 1:
            raise InputError(f"dimension must be >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "sub", _frozen(self.sub, self.n - 1, "sub"))
        object.__setattr__(self, "diag", _frozen(self.diag, self.n, "diag"))
        object.__setattr__(self, "sup", _frozen(self.sup, self.n - 1, "sup"))

    # ----- construtores -----
    @classmethod
    def identity(cls, n: int) -> "TriDiag":
        return cls.constant(n, 1.0, 0.0)

    @classmethod
    def constant(cls, n: int, diag: float, off: float, sup: float | None = None) -> "TriDiag":
        """Coeficientes constantes; ``sup`` omitido → matriz simétrica."""
        sup = off if sup is None else sup
        return cls(n, np.full(n - 1, off), np.full(n, diag), np.full(n - 1, sup))

    @classmethod
    def from_dense(cls, dense) -> "TriDiag":
        dense = np.asarray(dense, dtype=np.float64)
        n = dense.shape[0]
        return cls(n, np.diag(dense, -1), np.diag(dense), np.diag(dense, 1))

    # ----- propriedades -----
    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.sub, self.sup))

    @property
    def constant_coefficients(self) -> bool:
        if self.n == 1:
            return True
        return bool(
            np.all(self.diag == self.diag[0])
            and np.all(self.sub == self.sub[0])
            and np.all(self.sup == self.sup[0])
        )

    def strictly_diagonally_dominant(self) -> bool:
        off = np.zeros(self.n)
        off[1:] += np.abs(self.sub)
        off[:-1] += np.abs(self.sup)
        return bool(np.all(np.abs(self.diag) > off))

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def __add__(self, other: "TriDiag") -> "TriDiag":
        if not isinstance(other, TriDiag) or other.n != self.n:
            return NotImplemented
        return TriDiag(self.n, self.sub + other.sub, self.diag + other.diag, self.sup + other.sup)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriDiag):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.sub, other.sub)
            and np.array_equal(self.diag, other.diag)
            and np.array_equal(self.sup, other.sup)
        )

    __hash__ = None


@dataclass(frozen=True)
class Spectrum:
    """Autovalores em ordem crescente e o menor valor real."""

    eigenvalues: np.ndarray
    min_real: float


# =============================================================================
# Operações
# =============================================================================

def _check_vector(M: TriDiag, x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != M.n:
        raise InputError(f"{name}: expected length {M.n}, got shape {x.shape}")
    return x


def matvec(M: TriDiag, x) -> np.ndarray:
    """y[i] = sub[i−1]·x[i−1] + diag[i]·x[i] + sup[i]·x[i+1] (termos fora do intervalo = 0)."""
    x = _check_vector(M, x, "x")
    y = M.diag * x
    y[1:] += M.sub * x[:-1]
    y[:-1] += M.sup * x[1:]
    return y


@njit(cache=True, nogil=True)
def _thomas(sub, diag, sup, rhs):
    """
    Varredura de Thomas sem pivoteamento.

    Retorna (x, ok); ok = False quando um pivô se anula.
    """
    n = diag.shape[0]
    c = np.empty(n)
    d = np.empty(n)
    x = np.empty(n)

    pivot = diag[0]
    if pivot == 0.0:
        return x, False
    c[0] = sup[0] / pivot if n > 1 else 0.0
    d[0] = rhs[0] / pivot

    for i in range(1, n):
        pivot = diag[i] - sub[i - 1] * c[i - 1]
        if pivot == 0.0:
            return x, False
        c[i] = sup[i] / pivot if i < n - 1 else 0.0
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / pivot

    x[n - 1] = d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x, True


def thomas_solve(M: TriDiag, rhs) -> np.ndarray:
    """
    Resolve M·x = rhs pelo algoritmo de Thomas.

    Serve como X_(ex) nas verificações. Matrizes de Crank–Nicolson são
    estritamente diagonal-dominantes, logo a eliminação sem pivoteamento
    não encontra pivô nulo.

    Raises
    ------
    SingularMatrixError
        Se um pivô se anular durante a eliminação.
    """
    rhs = _check_vector(M, rhs, "rhs")
    x, ok = _thomas(M.sub, M.diag, M.sup, rhs)
    if not ok:
        raise SingularMatrixError("zero pivot in Thomas elimination")
    return x


def spectrum(M: TriDiag) -> Spectrum:
    """
    Autovalores de uma matriz tridiagonal simétrica.

    Coeficientes constantes usam a forma fechada
    d + 2·o·cos(jπ/(n+1)), j = 1..n; os demais casos usam
    bissecção de Sturm (LAPACK ``stebz``) com tolerância 1e−12.
    """
    if not M.symmetric:
        raise UnsupportedInputError("spectrum is only implemented for symmetric tridiagonal matrices")

    if M.n == 1:
        eigenvalues = M.diag.copy()
    elif M.constant_coefficients:
        j = np.arange(1, M.n + 1)
        eigenvalues = np.sort(M.diag[0] + 2.0 * M.sub[0] * np.cos(j * np.pi / (M.n + 1)))
    else:
        eigenvalues = eigh_tridiagonal(
            M.diag, M.sub, eigvals_only=True, lapack_driver="stebz", tol=STURM_TOL
        )
        eigenvalues = np.sort(eigenvalues)

    return Spectrum(eigenvalues=eigenvalues, min_real=float(eigenvalues[0]))
