"""
Aritmética exata em ℤ[√(p−1)] e potências da matriz T₁.

A matriz T₁ é mantida exatamente como impressa, com as duas entradas √(p−1)
carregadas simbolicamente: cada entrada é um par (a, b) que representa
a + b·√(p−1). Apenas a primeira linha de T₁^m é necessária para os momentos,
então as potências são calculadas por produtos vetor–matriz.
"""

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Tuple

import logging
import math
import numbers

import numpy as np

from . import settings
from .exceptions import ArithmeticBug, CostGuardExceeded, DomainError, VerificationFailure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadInt:
    """
    Elemento a + b·√m do anel simbólico ℤ[t]/(t² − m).

    A igualdade é sempre componente a componente, inclusive quando m é um
    quadrado perfeito (p = 5, 17, 37, 101, ...).

    Attributes:
        a (int): Parte racional.
        b (int): Coeficiente de √m.
        m (int): O radicando, m = p − 1.
    """

    a: int
    b: int
    m: int

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, numbers.Integral):
            return QuadInt(int(other), 0, self.m)
        if isinstance(other, QuadInt):
            if other.m != self.m:
                raise DomainError(message="Radicandos distintos em ℤ[√m].")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadInt(self.a + other.a, self.b + other.b, self.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.m)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadInt(
            self.a * other.a + self.m * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.m,
        )

    __rmul__ = __mul__

    def __float__(self):
        return self.a + self.b * math.sqrt(self.m)

    def is_integer(self) -> bool:
        return self.b == 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)

        radical = f"sqrt({self.m})"
        if abs(self.b) != 1:
            radical = f"{abs(self.b)}*{radical}"

        if self.a == 0:
            return radical if self.b > 0 else f"-{radical}"

        return f"{self.a}{'+' if self.b > 0 else '-'}{radical}"


class QuadMatrix:
    """
    Matriz quadrada sobre ℤ[√m], guardada como duas matrizes inteiras (a, b).

    Attributes:
        a (np.ndarray): Partes racionais (dtype object, inteiros de precisão arbitrária).
        b (np.ndarray): Coeficientes de √m.
        m (int): O radicando.
    """

    def __init__(self, a: np.ndarray, b: np.ndarray, m: int):
        self.a = np.asarray(a, dtype=object)
        self.b = np.asarray(b, dtype=object)
        self.m = m

    @classmethod
    def identity(cls, size: int, m: int) -> "QuadMatrix":
        a = np.zeros((size, size), dtype=object)
        np.fill_diagonal(a, 1)
        return cls(a, np.zeros((size, size), dtype=object), m)

    @property
    def size(self) -> int:
        return self.a.shape[0]

    def __matmul__(self, other: "QuadMatrix") -> "QuadMatrix":
        return QuadMatrix(
            self.a @ other.a + self.m * (self.b @ other.b),
            self.a @ other.b + self.b @ other.a,
            self.m,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadMatrix):
            return NotImplemented
        return (
            self.m == other.m
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
        )

    __hash__ = None

    def transpose(self) -> "QuadMatrix":
        return QuadMatrix(self.a.T, self.b.T, self.m)

    @property
    def T(self) -> "QuadMatrix":
        return self.transpose()

    def entry(self, i: int, j: int) -> QuadInt:
        """Entrada (i, j) com índices a partir de 0."""
        return QuadInt(int(self.a[i, j]), int(self.b[i, j]), self.m)

    def row(self, i: int) -> Tuple[QuadInt, ...]:
        return tuple(self.entry(i, j) for j in range(self.size))

    def is_normal(self) -> bool:
        """TᵀT = TTᵀ exatamente (as matrizes são reais)."""
        return self.T @ self == self @ self.T

    def commutes_with(self, other: "QuadMatrix") -> bool:
        return self @ other == other @ self

    def to_float(self) -> np.ndarray:
        return self.a.astype(float) + math.sqrt(self.m) * self.b.astype(float)


@dataclass(frozen=True)
class RowState:
    """
    Primeira linha de T₁^m.

    Attributes:
        m (int): O expoente.
        row (Tuple[QuadInt, ...]): As N entradas [T₁^m]_{1,k}, k = 1..N.
    """

    m: int
    row: Tuple[QuadInt, ...]

    @property
    def corner(self) -> QuadInt:
        return self.row[0]


def growth_bits(p: int, m: int) -> float:
    """Cota do tamanho em bits das entradas de T^m: m·log₂(3p)."""
    return m * math.log2(3 * p)


def row_powers(theory, mmax: int) -> Iterator[RowState]:
    """
    Gera as primeiras linhas de T₁^0, T₁^1, ..., T₁^mmax.

    O tipo das matrizes é escolhido pela cota de crescimento: int64 enquanto
    m·log₂(3p) < 62, inteiros de precisão arbitrária a partir daí. Todas as
    entradas de T₁ são não negativas, então as somas parciais nunca excedem
    o valor final.

    Args:
        theory (SuperTheory): A teoria de supercaracteres do primo.
        mmax (int): O maior expoente.

    Yields:
        RowState: Um estado por expoente, em ordem crescente.
    """
    if mmax < 0:
        raise DomainError(message="O expoente da potência deve ser ≥ 0.")

    p = theory.p
    t1 = theory.transfer(1)
    dtype = np.int64 if growth_bits(p, mmax) < 62 else object
    ta = t1.a.astype(dtype)
    tb = t1.b.astype(dtype)
    m = t1.m

    vec_a = np.zeros(theory.N, dtype=dtype)
    vec_b = np.zeros(theory.N, dtype=dtype)
    vec_a[0] = 1

    bit_limit = growth_bits(p, mmax)

    for power in range(mmax + 1):
        if power:
            vec_a, vec_b = vec_a @ ta + m * (vec_b @ tb), vec_a @ tb + vec_b @ ta

        row = tuple(QuadInt(int(x), int(y), m) for x, y in zip(vec_a, vec_b))
        widest = max(max(abs(q.a).bit_length(), abs(q.b).bit_length()) for q in row)

        if widest > bit_limit + 1:
            raise ArithmeticBug(
                message="Entradas de T^m excederam a cota de crescimento.",
                errors=[{"p": p, "m": power, "bits": widest}],
            )

        yield RowState(m=power, row=row)


def row_power(theory, m: int) -> RowState:
    """Primeira linha exata de T₁^m, com custo O(m·N²)."""
    state = None
    for state in row_powers(theory, m):
        pass
    return state


def _corner_value(state: RowState, p: int) -> int:
    corner = state.corner
    if corner.b != 0:
        raise ArithmeticBug(
            message="A entrada (1,1) de T^m tem componente √(p−1) não nula.",
            errors=[{"p": p, "m": state.m, "b": corner.b}],
        )
    return corner.a


def _moment_from_corner(p: int, n: int, corner: int) -> int:
    return p * p * corner + 2 * (-1) ** (n - 1) - (p - 1) ** (n - 1)


def moment_via_matrix(theory, n: int) -> int:
    """
    V_n(p) = p²·[T₁^{n−2}]_{1,1} + 2(−1)^{n−1} − (p−1)^{n−1}.

    Args:
        theory (SuperTheory): A teoria de supercaracteres do primo.
        n (int): A ordem do momento, n ≥ 2.

    Returns:
        int: O momento exato.

    Raises:
        DomainError: Se n < 2.
        ArithmeticBug: Se a entrada (1,1) tiver componente irracional.
    """
    if n < 2:
        raise DomainError(message="moment_via_matrix exige n ≥ 2.")

    return _moment_from_corner(theory.p, n, _corner_value(row_power(theory, n - 2), theory.p))


def moments_via_matrix(theory, nmax: int) -> dict:
    """V_2(p), ..., V_nmax(p) numa única iteração de linhas."""
    if nmax < 2:
        raise DomainError(message="moments_via_matrix exige nmax ≥ 2.")

    return {
        state.m + 2: _moment_from_corner(theory.p, state.m + 2, _corner_value(state, theory.p))
        for state in row_powers(theory, nmax - 2)
    }


def t2_closed_form(theory, eps: Mapping[int, int]) -> Tuple[QuadInt, ...]:
    """
    Forma fechada de [T²]_{1,k}, k = 1..p+2.

    Args:
        theory (SuperTheory): A teoria de supercaracteres do primo.
        eps (Mapping[int, int]): ε_k para 2 ≤ k ≤ p−1.
    """
    p, ell = theory.p, theory.ctx.ell_p
    m = p - 1
    row = [QuadInt(3 * p - 6, 0, m)]
    row += [QuadInt(p - 4 + eps[k], 0, m) for k in range(2, p)]
    row += [QuadInt(p - 3 - ell, 0, m)] * 2
    row.append(QuadInt(0, 1 + ell, m))
    return tuple(row)


def _epsilon_mapping(theory, eps):
    if eps is not None:
        return eps
    from .elliptic import epsilon_vector

    return epsilon_vector(theory.ctx).eps


def t2_row(theory, eps: Optional[Mapping[int, int]] = None) -> Tuple[QuadInt, ...]:
    """
    Primeira linha de T² comparada à forma fechada de quatro casos.

    Raises:
        VerificationFailure: Identificando o primeiro k em que as formas divergem.
    """
    eps = _epsilon_mapping(theory, eps)
    row = row_power(theory, 2).row
    expected = t2_closed_form(theory, eps)

    for k, (got, want) in enumerate(zip(row, expected), start=1):
        if got != want:
            raise VerificationFailure(
                message="[T²]_{1,k} diverge da forma fechada.",
                errors=[{"p": theory.p, "k": k, "computed": str(got), "expected": str(want)}],
            )

    return row


def t4_entry(theory, eps: Optional[Mapping[int, int]] = None) -> int:
    """
    [T⁴]_{1,1} = Σ_k [T²]²_{1,k}, comparado a p³ − p² + 2p + 4ℓ_p − 8 + Σ_{k≢9} ε_k².

    Raises:
        VerificationFailure: Se os dois lados divergirem.
    """
    eps = _epsilon_mapping(theory, eps)
    p, ell = theory.p, theory.ctx.ell_p

    total = QuadInt(0, 0, p - 1)
    for entry in t2_row(theory, eps):
        total = total + entry * entry

    if total.b != 0:
        raise ArithmeticBug(message="Σ [T²]²_{1,k} não é inteiro.", errors=[{"p": p}])

    tail = sum(eps[k] ** 2 for k in range(2, p) if k != 9 % p)
    expected = p**3 - p**2 + 2 * p + 4 * ell - 8 + tail

    if total.a != expected:
        raise VerificationFailure(
            message="[T⁴]_{1,1} diverge da cadeia de identidades.",
            errors=[{"p": p, "computed": str(total.a), "expected": str(expected)}],
        )

    return total.a


def mixed_moment_via_matrix(
    theory,
    multipliers: Sequence[int],
    include_zero: bool = False,
    allow_large: bool = False,
) -> int:
    """
    Momento misto Σ_u K_u K_{a₁u} ⋯ K_{a_n u} pela fórmula matricial
    p²·[T_{a₁} ⋯ T_{a_{n−1}}]_{1,a_n} + 2(−1)^n − (p−1)^n.

    Args:
        theory (SuperTheory): A teoria de supercaracteres do primo.
        multipliers (Sequence[int]): a₁, ..., a_n, não nulos módulo p (n ≥ 1).
        include_zero (bool): Se verdadeiro, inclui o termo u = 0, em que K_0 = −1.
        allow_large (bool): Ignora a trava de custo para n ≥ 3 e p > 61.

    Returns:
        int: O valor exato.

    Raises:
        DomainError: Se não houver multiplicadores ou algum for ≡ 0.
        CostGuardExceeded: Se o produto de matrizes exceder a trava de custo.
    """
    p = theory.p
    labels = [a % p for a in multipliers]

    if not labels or any(a == 0 for a in labels):
        raise DomainError(
            message="São necessários multiplicadores não nulos módulo p.",
            errors=[{"multipliers": list(multipliers), "p": p}],
        )

    n = len(labels)
    if n >= 3 and p > settings.MIXED_MATRIX_LIMIT and not allow_large:
        raise CostGuardExceeded(
            errors=[{"p": p, "limit": settings.MIXED_MATRIX_LIMIT, "factors": n}]
        )

    product = QuadMatrix.identity(theory.N, p - 1)
    for a in labels[:-1]:
        product = product @ theory.transfer(a)

    entry = product.entry(0, labels[-1] - 1)
    if entry.b != 0:
        raise ArithmeticBug(
            message="Entrada do produto de matrizes com componente √(p−1) não nula.",
            errors=[{"p": p, "multipliers": labels}],
        )

    value = p * p * entry.a + 2 * (-1) ** n - (p - 1) ** n

    if include_zero:
        value += (-1) ** (n + 1)

    return value


__all__ = [
    "QuadInt",
    "QuadMatrix",
    "RowState",
    "growth_bits",
    "row_powers",
    "row_power",
    "moment_via_matrix",
    "moments_via_matrix",
    "t2_closed_form",
    "t2_row",
    "t4_entry",
    "mixed_moment_via_matrix",
]
