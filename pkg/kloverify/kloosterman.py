"""
Avaliação em ponto flutuante das somas de Kloosterman e das cotas analíticas
(Weil e a cota de barreira 1.43·p^{2/3}).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import logging
import math

import numpy as np

from .exceptions import DomainError
from .modp import PrimeContext
from .transports import BoundReport

logger = logging.getLogger(__name__)

Method = Literal["direct", "legendre"]

BARRIER_CONSTANT = 1.43
SUMMATION_CONSTANT = 8
CHUNK_ELEMENTS = 1 << 22


@lru_cache(maxsize=64)
def _cos_table(p: int) -> np.ndarray:
    return np.cos(2.0 * np.pi * np.arange(p) / p)


def _check_unit(ctx: PrimeContext, u: int) -> None:
    if u % ctx.p == 0:
        raise DomainError(
            message="K_u exige p ∤ u.", errors=[{"field": "u", "p": ctx.p}]
        )


def error_bound(p: int) -> float:
    """
    Cota do erro absoluto por entrada de `kloosterman_vector`.

    A soma em pares do numpy sobre p−1 cossenos acumula no máximo ⌈log₂ p⌉
    arredondamentos por termo; os cossenos tabelados contribuem com a constante.
    Resultado: (p−1)·u_mach·(⌈log₂ p⌉ + 8).
    """
    return (p - 1) * np.finfo(float).eps * (math.ceil(math.log2(p)) + SUMMATION_CONSTANT)


def tolerance(p: int) -> float:
    """Folga usada nas verificações de desigualdade: 10⁻⁶·√p."""
    return 1e-6 * math.sqrt(p)


@dataclass(frozen=True, eq=False)
class KloostermanVector:
    """
    Valores aproximados de K_1, ..., K_{p−1}.

    Attributes:
        p (int): O primo.
        values (np.ndarray): values[u−1] ≈ K_u.
        err_bound (float): Cota do erro absoluto por entrada.
    """

    p: int
    values: np.ndarray
    err_bound: float

    def at(self, u: int) -> float:
        return float(self.values[u % self.p - 1])

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


def kloosterman_float(ctx: PrimeContext, u: int) -> float:
    """
    K_u = Σ_{x=1}^{p−1} cos(2π(x + u·x⁻¹)/p) com soma compensada.

    Raises:
        DomainError: Se u ≡ 0 (mod p).
    """
    _check_unit(ctx, u)
    x = np.arange(1, ctx.p, dtype=np.int64)
    idx = (x + (u % ctx.p) * ctx.inverses[1:]) % ctx.p
    return math.fsum(_cos_table(ctx.p)[idx])


def kloosterman_via_legendre(ctx: PrimeContext, u: int) -> float:
    """
    K_u = Σ_j ((j² − 4u)/p)·cos(2πj/p).

    A equação x + u/x = j tem 1 + ((j² − 4u)/p) soluções, e a soma dos
    e_p(j) sobre j completo é nula.
    """
    _check_unit(ctx, u)
    j = ctx.residues()
    symbols = ctx.chi[(j * j - 4 * (u % ctx.p)) % ctx.p]
    return math.fsum(symbols * _cos_table(ctx.p))


def kloosterman_vector(ctx: PrimeContext, method: Method = "direct") -> KloostermanVector:
    """
    Calcula todos os K_u de uma vez, em blocos de linhas para limitar a memória.

    Args:
        ctx (PrimeContext): Contexto do primo.
        method (str): "direct" (tabela de cossenos em x + u·x⁻¹) ou "legendre".

    Returns:
        KloostermanVector: Os p−1 valores e a cota de erro.
    """
    p = ctx.p
    cos_table = _cos_table(p)
    values = np.empty(p - 1, dtype=float)
    rows = max(1, CHUNK_ELEMENTS // p)

    if method == "direct":
        x = np.arange(1, p, dtype=np.int64)
        x_inv = ctx.inverses[1:]
    elif method == "legendre":
        j = ctx.residues()
        j_squared = j * j % p
    else:
        raise DomainError(message=f"Método desconhecido: {method}")

    for start in range(1, p, rows):
        u = np.arange(start, min(start + rows, p), dtype=np.int64)[:, None]

        if method == "direct":
            block = cos_table[(x + u * x_inv) % p]
        else:
            block = ctx.chi[(j_squared - 4 * u) % p] * cos_table

        values[start - 1 : start - 1 + u.shape[0]] = block.sum(axis=1)

    return KloostermanVector(p=p, values=values, err_bound=error_bound(p))


def kloosterman_direct(p: int, u: int) -> float:
    """Soma de Kloosterman por enumeração direta, válida também para p = 2, 3."""
    return math.fsum(
        math.cos(2 * math.pi * ((x + u * pow(x, -1, p)) % p) / p) for x in range(1, p)
    )


def float_moment(vector: KloostermanVector, n: int) -> float:
    """Σ_u K_u^n em ponto flutuante."""
    return math.fsum(vector.values**n)


def _bound_report(p, kind, max_abs, bound) -> BoundReport:
    tol = tolerance(p)
    return BoundReport(
        p=p,
        kind=kind,
        max_abs=max_abs,
        bound=bound,
        ratio=max_abs / bound,
        tolerance=tol,
        passed=max_abs <= bound + tol,
    )


def check_weil(ctx: PrimeContext, vector: KloostermanVector = None) -> BoundReport:
    """Verifica max_u |K_u| ≤ 2√p."""
    vector = vector or kloosterman_vector(ctx)
    report = _bound_report(ctx.p, "weil", vector.max_abs(), 2 * math.sqrt(ctx.p))
    logger.debug("Weil p=%d razão=%.6f", ctx.p, report.ratio)
    return report


def barrier_bound(p: int) -> float:
    return BARRIER_CONSTANT * p ** (2.0 / 3.0)


def check_barrier(ctx: PrimeContext, vector: KloostermanVector = None) -> BoundReport:
    """Verifica max_u |K_u| ≤ 1.43·p^{2/3}."""
    vector = vector or kloosterman_vector(ctx)
    return _bound_report(ctx.p, "barrier", vector.max_abs(), barrier_bound(ctx.p))


def check_barrier_small(p: int) -> BoundReport:
    """
    Verifica a cota de barreira para p = 2 e p = 3, fora de um PrimeContext.

    Raises:
        DomainError: Se p não for 2 nem 3.
    """
    if p not in (2, 3):
        raise DomainError(message="check_barrier_small aceita apenas p = 2 ou p = 3.")

    max_abs = max(abs(kloosterman_direct(p, u)) for u in range(1, p))
    return _bound_report(p, "barrier", max_abs, barrier_bound(p))


__all__ = [
    "KloostermanVector",
    "error_bound",
    "tolerance",
    "kloosterman_float",
    "kloosterman_via_legendre",
    "kloosterman_vector",
    "kloosterman_direct",
    "float_moment",
    "check_weil",
    "barrier_bound",
    "check_barrier",
    "check_barrier_small",
]
