"""
Aritmética no corpo primo 𝔽_p, símbolos de Legendre e os polinômios
quadráticos f_j e g_k usados em todo o restante do pacote.
"""

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from sympy import isprime

from .exceptions import DomainError


@dataclass(frozen=True, eq=False)
class PrimeContext:
    """
    Contexto imutável de um primo ímpar p ≥ 5.

    Guarda as tabelas pré-computadas que as rotinas de verificação consultam
    Θ(p²) vezes por primo: resíduos quadráticos, caráter de Legendre e inversos.

    Attributes:
        p (int): O primo.
        qr_table (np.ndarray): Vetor booleano de tamanho p; qr_table[x] é verdadeiro
            se e somente se x ≡ y² (mod p) para algum y ≢ 0.
        ell_p (int): O símbolo de Legendre (p/3), sempre ±1.
        chi (np.ndarray): Caráter de Legendre tabelado (int8), com chi[0] = 0.
        inverses (np.ndarray): inverses[x] = x⁻¹ mod p, com inverses[0] = 0.
    """

    p: int
    qr_table: np.ndarray = field(init=False, repr=False)
    ell_p: int = field(init=False)
    chi: np.ndarray = field(init=False, repr=False)
    inverses: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = self.p

        if not isinstance(p, (int, np.integer)) or p < 5 or not isprime(int(p)):
            raise DomainError(
                message=f"PrimeContext exige um primo p ≥ 5, recebido: {p}.",
                errors=[{"field": "p", "value": str(p)}],
            )

        p = int(p)
        squares = np.arange(1, p, dtype=np.int64) ** 2 % p
        qr_table = np.zeros(p, dtype=bool)
        qr_table[squares] = True

        chi = np.where(qr_table, 1, -1).astype(np.int8)
        chi[0] = 0

        inverses = np.zeros(p, dtype=np.int64)
        inverses[1:] = [pow(x, -1, p) for x in range(1, p)]

        object.__setattr__(self, "p", p)
        object.__setattr__(self, "qr_table", qr_table)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "inverses", inverses)
        object.__setattr__(self, "ell_p", 1 if p % 3 == 1 else -1)

    def residues(self) -> np.ndarray:
        """Retorna o vetor 0, 1, ..., p−1 em int64."""
        return np.arange(self.p, dtype=np.int64)


def legendre_euler(a: int, p: int) -> int:
    """
    Símbolo de Legendre pelo critério de Euler, sem tabela.

    Args:
        a (int): Inteiro qualquer.
        p (int): Primo ímpar.

    Returns:
        int: 0, 1 ou −1.
    """
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def legendre(ctx: PrimeContext, a: int) -> int:
    """
    Retorna o símbolo de Legendre (a/p) por consulta à tabela de resíduos.

    Args:
        ctx (PrimeContext): Contexto do primo.
        a (int): Inteiro qualquer; é reduzido módulo p.

    Returns:
        int: 0 se p | a, 1 se a é um quadrado não nulo, −1 caso contrário.
    """
    return int(ctx.chi[a % ctx.p])


def legendre_vector(ctx: PrimeContext, values) -> np.ndarray:
    """Aplica o caráter de Legendre elemento a elemento."""
    return ctx.chi[np.mod(values, ctx.p)]


def inv(ctx: PrimeContext, x: int) -> int:
    """
    Inverso multiplicativo de x módulo p.

    Args:
        ctx (PrimeContext): Contexto do primo.
        x (int): Resíduo não nulo.

    Returns:
        int: O único y em [1, p−1] com x·y ≡ 1 (mod p).

    Raises:
        DomainError: Se x ≡ 0 (mod p).
    """
    x %= ctx.p

    if x == 0:
        raise DomainError(
            message="0 não possui inverso módulo p.",
            errors=[{"field": "x", "p": ctx.p}],
        )

    return int(ctx.inverses[x])


def f_poly(j: int, x: int, ctx: PrimeContext) -> int:
    """f_j(x) = x² − 2(j+1)x + (j−1)², reduzido módulo p."""
    return (x * x - 2 * (j + 1) * x + (j - 1) ** 2) % ctx.p


def g_poly(k: int, x: int, ctx: PrimeContext) -> int:
    """g_k(x) = x(4kx² + (k²−6k−3)x + 4), reduzido módulo p."""
    return x * (4 * k * x * x + (k * k - 6 * k - 3) * x + 4) % ctx.p


def poly_values(ctx: PrimeContext, coeffs: Sequence[int]) -> np.ndarray:
    """
    Avalia um polinômio inteiro em todos os resíduos 0..p−1 (regra de Horner).

    Args:
        ctx (PrimeContext): Contexto do primo.
        coeffs (Sequence[int]): Coeficientes do termo de maior grau para o constante.

    Returns:
        np.ndarray: Vetor int64 com P(x) mod p para x = 0..p−1.
    """
    x = ctx.residues()
    acc = np.zeros(ctx.p, dtype=np.int64)

    for c in coeffs:
        acc = (acc * x + (c % ctx.p)) % ctx.p

    return acc


def f_values(ctx: PrimeContext, j: int) -> np.ndarray:
    """Vetor de f_j(x) mod p para x = 0..p−1."""
    return poly_values(ctx, (1, -2 * (j + 1), (j - 1) ** 2))


def g_values(ctx: PrimeContext, k: int) -> np.ndarray:
    """Vetor de g_k(x) mod p para x = 0..p−1."""
    return poly_values(ctx, (4 * k, k * k - 6 * k - 3, 4, 0))


def poly_character_sum(ctx: PrimeContext, coeffs: Sequence[int]) -> int:
    """Σ_{x=0}^{p−1} (P(x)/p) para o polinômio de coeficientes `coeffs`."""
    return int(ctx.chi[poly_values(ctx, coeffs)].sum(dtype=np.int64))


def legendre_char_sums(ctx: PrimeContext, k: int) -> Tuple[int, int]:
    """
    Calcula as duas somas de caracteres de f_k.

    Para 1 ≤ k ≤ p−1 devem valer s1 = −1 e s2 = p − 1 − (k/p).

    Args:
        ctx (PrimeContext): Contexto do primo.
        k (int): Índice do polinômio f_k.

    Returns:
        Tuple[int, int]: (Σ (f_k(x)/p), Σ (f_k(x)/p)²) sobre x = 0..p−1.
    """
    symbols = ctx.chi[f_values(ctx, k)].astype(np.int64)
    return int(symbols.sum()), int((symbols * symbols).sum())


__all__ = [
    "PrimeContext",
    "legendre_euler",
    "legendre",
    "legendre_vector",
    "inv",
    "f_poly",
    "g_poly",
    "poly_values",
    "f_values",
    "g_values",
    "poly_character_sum",
    "legendre_char_sums",
]
