"""
Aritmética exata em ℤ[ζ_p].

Este módulo é o oráculo independente: os momentos são calculados expandindo
produtos de somas de Kloosterman como inteiros ciclotômicos, sem passar pelas
matrizes de supercaracteres.
"""

from dataclasses import dataclass
from collections import Counter
from typing import Dict, Iterable, Sequence, Tuple

import logging
import numbers

import numpy as np

from .exceptions import DomainError, NotRationalInteger
from .modp import PrimeContext

logger = logging.getLogger(__name__)


def _reduce(p: int, full: Sequence[int]) -> Tuple[int, ...]:
    """Reduz um vetor de tamanho p (módulo x^p − 1) à base {1, ζ, ..., ζ^{p−2}}."""
    top = int(full[p - 1])
    return tuple(int(full[j]) - top for j in range(p - 1))


@dataclass(frozen=True)
class CycInt:
    """
    Elemento Σ a_j ζ^j de ℤ[ζ_p] em forma canônica.

    Attributes:
        p (int): O primo.
        coeffs (Tuple[int, ...]): Os p−1 coeficientes na base de potências.
    """

    p: int
    coeffs: Tuple[int, ...]

    @classmethod
    def from_int(cls, p: int, value: int) -> "CycInt":
        return cls(p, (int(value),) + (0,) * (p - 2))

    @classmethod
    def zeta_power(cls, p: int, e: int) -> "CycInt":
        return cls.from_exponents(p, [e])

    @classmethod
    def from_exponents(cls, p: int, exponents: Iterable[int]) -> "CycInt":
        """Constrói Σ ζ^e sobre a lista de expoentes (com repetição)."""
        full = [0] * p
        for e in exponents:
            full[e % p] += 1
        return cls(p, _reduce(p, full))

    def _lift(self) -> np.ndarray:
        return np.array(self.coeffs + (0,), dtype=object)

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, numbers.Integral):
            return CycInt.from_int(self.p, int(other))
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise DomainError(
                    message="Operação entre inteiros ciclotômicos de primos distintos.",
                    errors=[{"left": self.p, "right": other.p}],
                )
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other

        p = self.p
        a = self._lift()
        b = other._lift()
        acc = np.zeros(p, dtype=object)

        for i in np.flatnonzero(a):
            acc += a[i] * np.roll(b, int(i))

        return CycInt(p, _reduce(p, acc))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError(message="Expoente negativo não suportado.")

        result = CycInt.from_int(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_rational_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def to_int(self) -> int:
        """
        Retorna o inteiro racional representado.

        Raises:
            NotRationalInteger: Se algum coeficiente de ζ^1..ζ^{p−2} for não nulo.
        """
        if not self.is_rational_integer():
            raise NotRationalInteger(
                errors=[{"p": self.p, "nonzero": sum(1 for c in self.coeffs[1:] if c)}]
            )
        return self.coeffs[0]

    def conjugate(self) -> "CycInt":
        """Imagem pelo automorfismo de Galois ζ → ζ⁻¹."""
        p = self.p
        full = [0] * p
        for j, c in enumerate(self.coeffs):
            full[(-j) % p] += c
        return CycInt(p, _reduce(p, full))

    def embed(self) -> complex:
        """Valor complexo sob ζ → exp(2πi/p)."""
        j = np.arange(self.p - 1)
        roots = np.exp(2j * np.pi * j / self.p)
        return complex(np.dot(np.array(self.coeffs, dtype=float), roots))


def cyc_add(x: CycInt, y: CycInt) -> CycInt:
    return x + y


def cyc_mul(x: CycInt, y: CycInt) -> CycInt:
    return x * y


def kloosterman_exponents(ctx: PrimeContext, a: int, b: int) -> Counter:
    """Multiconjunto dos expoentes a·x + b·x⁻¹ (mod p) de K(a, b)."""
    x = np.arange(1, ctx.p, dtype=np.int64)
    exponents = (a % ctx.p * x + b % ctx.p * ctx.inverses[1:]) % ctx.p
    return Counter(int(e) for e in exponents)


def kloosterman_cyc(ctx: PrimeContext, u: int) -> CycInt:
    """
    Soma de Kloosterman K_u = Σ_{x=1}^{p−1} ζ^{x + u·x⁻¹} como elemento de ℤ[ζ_p].

    Raises:
        DomainError: Se u ≡ 0 (mod p).
    """
    if u % ctx.p == 0:
        raise DomainError(
            message="K_u exige p ∤ u.", errors=[{"field": "u", "p": ctx.p}]
        )

    counts = kloosterman_exponents(ctx, 1, u)
    full = [counts.get(e, 0) for e in range(ctx.p)]
    return CycInt(ctx.p, _reduce(ctx.p, full))


def moment_oracle_range(ctx: PrimeContext, nmax: int) -> Dict[int, int]:
    """
    Calcula V_1(p), ..., V_nmax(p) de uma só vez, multiplicando potências sucessivas.

    Args:
        ctx (PrimeContext): Contexto do primo.
        nmax (int): Maior expoente desejado (≥ 1).

    Returns:
        Dict[int, int]: Mapeamento n → V_n(p).

    Raises:
        NotRationalInteger: Se alguma soma não for um inteiro racional.
    """
    if nmax < 1:
        raise DomainError(message="O expoente do momento deve ser ≥ 1.")

    p = ctx.p
    totals = {n: CycInt.from_int(p, 0) for n in range(1, nmax + 1)}

    for u in range(1, p):
        k_u = kloosterman_cyc(ctx, u)
        power = k_u
        totals[1] = totals[1] + power
        for n in range(2, nmax + 1):
            power = power * k_u
            totals[n] = totals[n] + power

    logger.debug("Oráculo ciclotômico concluído para p=%d até n=%d.", p, nmax)
    return {n: value.to_int() for n, value in totals.items()}


def moment_oracle(ctx: PrimeContext, n: int) -> int:
    """V_n(p) = Σ_{u=1}^{p−1} K_u^n calculado exatamente em ℤ[ζ_p]."""
    return moment_oracle_range(ctx, n)[n]


def mixed_moment_oracle(
    ctx: PrimeContext, multipliers: Sequence[int], include_zero: bool = False
) -> int:
    """
    Momento misto Σ_u K_u K_{a₁u} ⋯ K_{a_n u} calculado em ℤ[ζ_p].

    Args:
        ctx (PrimeContext): Contexto do primo.
        multipliers (Sequence[int]): Os multiplicadores a₁, ..., a_n (não nulos mod p).
        include_zero (bool): Se verdadeiro, inclui o termo u = 0, em que K_0 = −1.

    Returns:
        int: O valor exato do momento misto.
    """
    p = ctx.p

    if any(a % p == 0 for a in multipliers):
        raise DomainError(
            message="Todos os multiplicadores devem ser não nulos módulo p.",
            errors=[{"multipliers": list(multipliers), "p": p}],
        )

    sums = {u: kloosterman_cyc(ctx, u) for u in range(1, p)}
    total = CycInt.from_int(p, 0)

    for u in range(1, p):
        term = sums[u]
        for a in multipliers:
            term = term * sums[a * u % p]
        total = total + term

    value = total.to_int()

    if include_zero:
        value += (-1) ** (len(multipliers) + 1)

    return value


__all__ = [
    "CycInt",
    "cyc_add",
    "cyc_mul",
    "kloosterman_exponents",
    "kloosterman_cyc",
    "moment_oracle_range",
    "moment_oracle",
    "mixed_moment_oracle",
]
