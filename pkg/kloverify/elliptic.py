"""
Contagem de pontos na família E_k : y² = g_k(x), a ponte ε_k = −1 − a_p(E_k),
a identidade do sexto momento e os resíduos dos momentos V_5 e V_6.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import logging
import math
import random

import numpy as np
from sympy import resultant, symbols

from .cyclotomic import mixed_moment_oracle
from .exact import mixed_moment_via_matrix
from .exceptions import (
    ArithmeticBug,
    DegenerateCurve,
    DomainError,
    SharedRootOrEqualLinear,
    VerificationFailure,
)
from .kloosterman import CHUNK_ELEMENTS
from .modp import PrimeContext, f_values, g_values, legendre, legendre_char_sums, poly_character_sum
from .supercharacter import SuperTheory
from .transports import CurveRecord

logger = logging.getLogger(__name__)

_x = symbols("x")


def is_degenerate(ctx: PrimeContext, k: int) -> bool:
    """k ≡ 1 ou k ≡ 9 (mod p); para p = 5, 7 as restrições são lidas módulo p."""
    return k % ctx.p in (1, 9 % ctx.p)


def valid_parameters(ctx: PrimeContext) -> List[int]:
    """Os k em 2..p−1 que definem curvas elípticas."""
    return [k for k in range(2, ctx.p) if not is_degenerate(ctx, k)]


def epsilon(ctx: PrimeContext, k: int) -> int:
    """ε_k = Σ_{x=0}^{p−1} (f₁(x)·f_k(x)/p)."""
    return int((ctx.chi[f_values(ctx, 1)].astype(np.int64) * ctx.chi[f_values(ctx, k)]).sum())


@dataclass(frozen=True)
class EpsilonVector:
    """
    Os valores ε_k para 1 ≤ k ≤ p−1.

    Attributes:
        p (int): O primo.
        ell_p (int): (p/3).
        eps (Dict[int, int]): Mapeamento k → ε_k.
    """

    p: int
    ell_p: int
    eps: Dict[int, int] = field(default_factory=dict)

    def __getitem__(self, k: int) -> int:
        return self.eps[k]

    def tail_sum(self) -> int:
        return sum(self.eps[k] for k in range(2, self.p))

    def check(self) -> List[str]:
        """Nomes das identidades que falharam: ε₁, ε₉ e a soma de k = 2 a p−1."""
        failures = []

        if self.eps[1] != self.p - 2:
            failures.append("epsilon_1")
        if self.eps[9 % self.p] != -1 - self.ell_p:
            failures.append("epsilon_9")
        if self.tail_sum() != 4 + self.ell_p - self.p:
            failures.append("epsilon_sum")

        return failures


def epsilon_vector(ctx: PrimeContext, chunk_elements: int = CHUNK_ELEMENTS) -> EpsilonVector:
    """
    Calcula todos os ε_k em blocos de linhas k da grade (p−1)×p de símbolos.

    Cada bloco tem no máximo `chunk_elements` entradas (ao menos uma linha).
    """
    p = ctx.p
    x = ctx.residues()[None, :]
    base = ctx.chi[f_values(ctx, 1)].astype(np.int64)[None, :]
    rows = max(1, chunk_elements // p)
    eps = {}

    for start in range(1, p, rows):
        k = np.arange(start, min(start + rows, p), dtype=np.int64)[:, None]
        grid = (x * x - 2 * (k + 1) * x + (k - 1) ** 2) % p
        values = (ctx.chi[grid].astype(np.int64) * base).sum(axis=1)
        eps.update(zip(k[:, 0].tolist(), values.tolist()))

    return EpsilonVector(p=p, ell_p=ctx.ell_p, eps=eps)


def _check_curve(ctx: PrimeContext, k: int) -> None:
    p = ctx.p

    if k % p == 0 or is_degenerate(ctx, k):
        raise DegenerateCurve(
            message=f"E_k é singular para k ≡ {k % p} (mod {p}).",
            errors=[{"p": p, "k": k}],
        )

    if (k - 9) * (k - 1) ** 3 % p == 0:
        raise ArithmeticBug(
            message="Discriminante do fator quadrático de g_k nulo fora do conjunto excluído.",
            errors=[{"p": p, "k": k}],
        )


def count_points(ctx: PrimeContext, k: int) -> CurveRecord:
    """
    |E_k(𝔽_p)| = p + 1 + Σ_x (g_k(x)/p), incluindo o ponto no infinito.

    Raises:
        DegenerateCurve: Se k ≡ 0, 1 ou 9 (mod p).
        VerificationFailure: Se o traço violar a desigualdade de Hasse.
    """
    _check_curve(ctx, k)

    character_sum = int(ctx.chi[g_values(ctx, k)].sum(dtype=np.int64))
    record = CurveRecord(
        p=ctx.p, k=k % ctx.p, point_count=ctx.p + 1 + character_sum, trace=-character_sum
    )

    if not record.satisfies_hasse:
        raise VerificationFailure(
            message="Traço de Frobenius fora da cota de Hasse.",
            errors=[{"p": ctx.p, "k": k, "trace": record.trace}],
        )

    return record


def count_points_brute(ctx: PrimeContext, k: int) -> int:
    """|E_k(𝔽_p)| por enumeração de todos os pares (x, y) ∈ 𝔽_p², mais o infinito."""
    _check_curve(ctx, k)
    r = ctx.residues()
    return int(np.count_nonzero((r[None, :] ** 2 - g_values(ctx, k)[:, None]) % ctx.p == 0)) + 1


def trace_list(ctx: PrimeContext) -> List[CurveRecord]:
    """Uma CurveRecord por k válido em 2..p−1, em ordem crescente de k."""
    return [count_points(ctx, k) for k in valid_parameters(ctx)]


def verify_bridge(ctx: PrimeContext, k: int, eps: Optional[EpsilonVector] = None) -> int:
    """
    Confere ε_k = −1 − a_p(E_k).

    Returns:
        int: 0 quando a identidade vale.

    Raises:
        VerificationFailure: Com (p, k) em caso de divergência.
    """
    value = eps[k] if eps is not None else epsilon(ctx, k)
    trace = count_points(ctx, k).trace

    if value != -1 - trace:
        raise VerificationFailure(
            message="ε_k ≠ −1 − a_p(E_k).",
            errors=[{"p": ctx.p, "k": k, "epsilon": value, "trace": trace}],
        )

    return 0


def transform_coefficients(b: int, c: int, B: int, C: int) -> Tuple[int, int, int]:
    """(D, δ, d) = (B² − 4C, 4C − 2bB + 4c, b² − 4c)."""
    return B * B - 4 * C, 4 * C - 2 * b * B + 4 * c, b * b - 4 * c


def _admissible(p: int, b: int, c: int, B: int, C: int) -> bool:
    if (B - b) % p == 0:
        return False
    shared = resultant(_x**2 + b * _x + c, _x**2 + B * _x + C, _x)
    return int(shared) % p != 0


def verify_transform(ctx: PrimeContext, b: int, c: int, B: int, C: int) -> int:
    """
    Confere Σ ((x²+bx+c)(x²+Bx+C)/p) = −1 + Σ (x(Dx² + δx + d)/p) por soma direta.

    Raises:
        SharedRootOrEqualLinear: Se B ≡ b ou os dois fatores tiverem raiz comum.
        VerificationFailure: Se os dois lados divergirem.
    """
    if not _admissible(ctx.p, b, c, B, C):
        raise SharedRootOrEqualLinear(errors=[{"p": ctx.p, "b": b, "c": c, "B": B, "C": C}])

    D, delta, d = transform_coefficients(b, c, B, C)
    lhs = poly_character_sum(ctx, (1, b + B, c + C + b * B, b * C + B * c, c * C))
    rhs = -1 + poly_character_sum(ctx, (D, delta, d, 0))

    if lhs != rhs:
        raise VerificationFailure(
            message="Os dois lados da transformação quártica → cúbica divergem.",
            errors=[{"p": ctx.p, "quadruple": [b, c, B, C], "lhs": lhs, "rhs": rhs}],
        )

    return lhs - rhs


def random_transform_quadruples(
    ctx: PrimeContext, count: int, rng: random.Random
) -> List[Tuple[int, int, int, int]]:
    """Sorteia `count` quádruplas admissíveis (b, c, B, C) por rejeição."""
    quadruples = []

    while len(quadruples) < count:
        candidate = tuple(rng.randrange(ctx.p) for _ in range(4))
        if _admissible(ctx.p, *candidate):
            quadruples.append(candidate)

    return quadruples


def v6_rhs(ctx: PrimeContext, traces: Optional[Sequence[CurveRecord]] = None) -> int:
    """4p⁴ − 8p³ + (4ℓ_p + 2)p² − 5p − 1 + p²·Σ_k (a_p(E_k) + 1)²."""
    p, ell = ctx.p, ctx.ell_p
    traces = trace_list(ctx) if traces is None else traces
    tail = sum((record.trace + 1) ** 2 for record in traces)
    return 4 * p**4 - 8 * p**3 + (4 * ell + 2) * p**2 - 5 * p - 1 + p * p * tail


def closed_moments(ctx: PrimeContext) -> Dict[int, int]:
    """V_1..V_4 pelas formas fechadas."""
    p, ell = ctx.p, ctx.ell_p
    return {
        1: 1,
        2: p**2 - p - 1,
        3: ell * p**2 + 2 * p + 1,
        4: 2 * p**3 - 3 * p**2 - 3 * p - 1,
    }


def solve_residuals(ctx: PrimeContext, V5: int, V6: int) -> Tuple[Optional[int], Optional[int]]:
    """
    Isola a_p em V_5 = 4ℓ_p·p³ + (a_p + 5)p² + 4p + 1 e b_p em
    V_6 = 5p⁴ − 10p³ − (b_p + 9)p² − 5p − 1.

    Args:
        ctx (PrimeContext): Contexto do primo.
        V5 (int): O quinto momento exato.
        V6 (int): O sexto momento exato.

    Returns:
        Tuple[Optional[int], Optional[int]]: (a_p, b_p); a_p só é definido para
        p > 5 e b_p para p > 7.

    Raises:
        VerificationFailure: Se algum resíduo não for inteiro ou violar sua cota.
    """
    p, ell = ctx.p, ctx.ell_p
    square = p * p
    a_p = b_p = None

    if p > 5:
        numerator = V5 - 4 * ell * p**3 - 4 * p - 1
        if numerator % square:
            raise VerificationFailure(
                message="Resíduo de V_5 não inteiro.", errors=[{"p": p, "V5": str(V5)}]
            )
        a_p = numerator // square - 5
        if not abs(a_p) < 2 * p:
            raise VerificationFailure(
                message="Resíduo de V_5 fora da cota |a_p| < 2p.",
                errors=[{"p": p, "a_p": a_p}],
            )

    if p > 7:
        numerator = 5 * p**4 - 10 * p**3 - 5 * p - 1 - V6
        if numerator % square:
            raise VerificationFailure(
                message="Resíduo de V_6 não inteiro.", errors=[{"p": p, "V6": str(V6)}]
            )
        b_p = numerator // square - 9
        if not b_p * b_p < 4 * p**3:
            raise VerificationFailure(
                message="Resíduo de V_6 fora da cota |b_p| < 2p^{3/2}.",
                errors=[{"p": p, "b_p": b_p}],
            )

    return a_p, b_p


def _is_paired(a: int, b: int, c: int) -> bool:
    return (b == a and c == 1) or (b == 1 and c == a)


def fourth_mixed_residual(
    ctx: PrimeContext,
    a: int,
    b: int,
    c: int,
    theory=None,
    method: str = "matrix",
) -> int:
    """
    Isola a_p em Σ_{u=1}^{p−1} K_u K_{au} K_{bu} K_{cu}
    = δ_{a,1}δ_{b,c}p³ − [(bc/p)·a_p + 2]p² − 3p − 1.

    Multiplicadores que se emparelham fora do termo δ_{a,1}δ_{b,c}
    (b ≡ a e c ≡ 1, ou b ≡ 1 e c ≡ a) são rejeitados.

    Args:
        ctx (PrimeContext): Contexto do primo.
        a, b, c (int): Multiplicadores não nulos módulo p.
        theory (SuperTheory, optional): Teoria já construída para o método matricial.
        method (str): "matrix" (produto T_a·T_b) ou "oracle" (ℤ[ζ_p]).

    Returns:
        int: O resíduo a_p, com |a_p| ≤ 2√p.

    Raises:
        DomainError: Para multiplicadores nulos ou emparelhados.
        VerificationFailure: Se o resíduo não for inteiro ou violar Hasse.
    """
    p = ctx.p
    a, b, c = a % p, b % p, c % p

    if 0 in (a, b, c) or _is_paired(a, b, c):
        raise DomainError(
            message="Multiplicadores nulos ou emparelhados para o quarto momento misto.",
            errors=[{"p": p, "multipliers": [a, b, c]}],
        )

    if method == "matrix":
        theory = theory or SuperTheory(ctx)
        moment = mixed_moment_via_matrix(theory, [a, b, c])
    elif method == "oracle":
        moment = mixed_moment_oracle(ctx, [a, b, c])
    else:
        raise DomainError(message=f"Método desconhecido: {method}")

    delta = p**3 if a == 1 and b == c else 0
    numerator = delta - 3 * p - 1 - moment

    if numerator % (p * p):
        raise VerificationFailure(
            message="Resíduo do quarto momento misto não inteiro.",
            errors=[{"p": p, "multipliers": [a, b, c], "moment": str(moment)}],
        )

    a_p = (numerator // (p * p) - 2) * legendre(ctx, b * c)

    if a_p * a_p > 4 * p:
        raise VerificationFailure(
            message="Resíduo do quarto momento misto fora da cota de Hasse.",
            errors=[{"p": p, "multipliers": [a, b, c], "a_p": a_p}],
        )

    return a_p


@dataclass(frozen=True)
class BarrierChain:
    """
    Cadeia de cotas superiores de V_6 obtida com a desigualdade de Hasse.

    Attributes:
        p (int): O primo.
        stages (Tuple[float, ...]): Os quatro estágios da cadeia, o último 8.5p⁴.
        v6 (Optional[int]): V_6 exato, quando disponível.
    """

    p: int
    stages: Tuple[float, ...]
    v6: Optional[int] = None

    @property
    def monotone(self) -> bool:
        first, second, third, last = self.stages
        return math.isclose(first, second, rel_tol=1e-12) and second <= third <= last

    @property
    def v6_below(self) -> bool:
        return self.v6 is None or self.v6 <= self.stages[0] * (1 + 1e-12)

    @property
    def passed(self) -> bool:
        return self.monotone and self.v6_below


def barrier_chain(p: int, v6: Optional[int] = None) -> BarrierChain:
    """
    Avalia 4p⁴ − 8p³ + (4ℓ+2)p² − 5p − 1 + p²(p−3)(4p + 4√p + 1), sua forma
    expandida, a mesma com 3p² no lugar de (4ℓ−1)p², e 8.5p⁴.
    """
    ell = 1 if p % 3 == 1 else -1
    root = math.sqrt(p)
    stages = (
        4 * p**4 - 8 * p**3 + (4 * ell + 2) * p**2 - 5 * p - 1
        + p**2 * (p - 3) * (4 * p + 4 * root + 1),
        8 * p**4 + 4 * p**3.5 - 19 * p**3 - 12 * p**2.5 + (4 * ell - 1) * p**2 - 5 * p - 1,
        8 * p**4 + 4 * p**3.5 - 19 * p**3 - 12 * p**2.5 + 3 * p**2 - 5 * p - 1,
        8.5 * p**4,
    )
    return BarrierChain(p=p, stages=tuple(float(s) for s in stages), v6=v6)


def verify_legendre_sums(ctx: PrimeContext) -> List[int]:
    """Os k em 1..p−1 para os quais Σ(f_k/p) ≠ −1 ou Σ(f_k/p)² ≠ p−1−(k/p)."""
    return [
        k
        for k in range(1, ctx.p)
        if legendre_char_sums(ctx, k) != (-1, ctx.p - 1 - legendre(ctx, k))
    ]


def verify_epsilon_lemmas(ctx: PrimeContext, eps: Optional[EpsilonVector] = None) -> List[str]:
    """Identidades de ε que falharam, incluindo a ponte com os traços."""
    eps = eps or epsilon_vector(ctx)
    failures = eps.check()

    for k in valid_parameters(ctx):
        try:
            verify_bridge(ctx, k, eps)
        except VerificationFailure:
            failures.append(f"bridge_k{k}")

    return failures


__all__ = [
    "is_degenerate",
    "valid_parameters",
    "epsilon",
    "EpsilonVector",
    "epsilon_vector",
    "count_points",
    "count_points_brute",
    "trace_list",
    "verify_bridge",
    "transform_coefficients",
    "verify_transform",
    "random_transform_quadruples",
    "v6_rhs",
    "closed_moments",
    "solve_residuals",
    "fourth_mixed_residual",
    "BarrierChain",
    "barrier_chain",
    "verify_legendre_sums",
    "verify_epsilon_lemmas",
]
