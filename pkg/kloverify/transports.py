from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import math

from . import settings


@dataclass(frozen=True)
class Transport:
    """
    Classe base para definir objetos de transporte de dados.

    Um objeto de transporte representa um resultado por primo que será serializado
    ou transferido entre as camadas da aplicação (núcleo numérico, serviços e CLI).

    Attributes:
        p (int): O primo ao qual o resultado se refere.
    """

    p: int


@dataclass(frozen=True)
class Verdict:
    """
    Resultado de uma verificação individual.

    Attributes:
        check (str): Nome da verificação (ex.: "theorem_v6").
        passed (bool): Se a verificação passou.
        residual (str): Resíduo em texto (inteiro decimal ou float formatado).
        detail (str): Informação adicional para diagnóstico.
    """

    check: str
    passed: bool
    residual: str = "0"
    detail: str = ""


@dataclass(frozen=True)
class BoundReport(Transport):
    """Máximo de |K_u| comparado a uma cota analítica."""

    kind: str
    max_abs: float
    bound: float
    ratio: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class LemmaReport(Transport):
    """Resíduos máximos das verificações numéricas da teoria de supercaracteres."""

    tolerance: float
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(value <= self.tolerance for value in self.residuals.values())

    def failures(self) -> List[str]:
        return [name for name, value in self.residuals.items() if value > self.tolerance]


@dataclass(frozen=True)
class CurveRecord(Transport):
    """
    Contagem de pontos de E_k(𝔽_p), incluindo o ponto no infinito.

    Attributes:
        k (int): Parâmetro da curva, com k ≢ 1, 9 (mod p).
        point_count (int): |E_k(𝔽_p)|.
        trace (int): Traço de Frobenius a_p(E_k) = p + 1 − |E_k(𝔽_p)|.
        epsilon (Optional[int]): ε_k, quando calculado junto da curva.
    """

    k: int
    point_count: int
    trace: int
    epsilon: Optional[int] = None

    @property
    def hasse_margin(self) -> float:
        return 2 * math.sqrt(self.p) - abs(self.trace)

    @property
    def satisfies_hasse(self) -> bool:
        return self.trace * self.trace <= 4 * self.p


@dataclass(frozen=True)
class MomentReport(Transport):
    """
    Registro completo de um primo: momentos, traços, resíduos e veredictos.

    Attributes:
        moments (Dict[int, int]): V_n(p) exatos, por n.
        a_p_residual (Optional[int]): Resíduo de V_5 (definido para p > 5).
        b_p_residual (Optional[int]): Resíduo de V_6 (definido para p > 7).
        traces (List[Tuple[int, int]]): Pares (k, a_p(E_k)) das curvas válidas.
        verdicts (List[Verdict]): Veredictos de cada verificação.
        timings_ms (Dict[str, float]): Tempo gasto em cada etapa.
    """

    moments: Dict[int, int] = field(default_factory=dict)
    a_p_residual: Optional[int] = None
    b_p_residual: Optional[int] = None
    traces: List[Tuple[int, int]] = field(default_factory=list)
    verdicts: List[Verdict] = field(default_factory=list)
    timings_ms: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    def first_failure(self) -> Optional[Verdict]:
        return next((v for v in self.verdicts if not v.passed), None)


@dataclass(frozen=True)
class BoundsRecord(Transport):
    """Linha do comando `bounds`: cotas de Weil, barreira e V_6 ≤ 8.5p⁴."""

    max_abs: float
    weil_ratio: float
    barrier_ratio: float
    v6_ratio: float
    v6_exact: bool
    passed: bool


@dataclass(frozen=True)
class MomentRow(Transport):
    """
    Linha do comando `moments`.

    Attributes:
        n (int): A ordem do momento.
        value (int): V_n(p) exato.
        check (str): Forma de conferência usada ("closed_form", "theorem_v6",
            "oracle" ou "" quando nenhuma se aplica).
        agrees (Optional[bool]): Resultado da conferência.
    """

    n: int
    value: int
    check: str = ""
    agrees: Optional[bool] = None


@dataclass(frozen=True)
class TableRow(Transport):
    """Uma linha de uma das matrizes despejadas por `table` (sigma, U ou T1)."""

    section: str
    row: int
    cells: Tuple[str, ...] = ()


@dataclass(frozen=True)
class MixedRecord(Transport):
    """
    Momento misto Σ_u K_u K_{a₁u} ⋯ K_{a_n u} por duas vias.

    Attributes:
        multipliers (Tuple[int, ...]): a₁, ..., a_n.
        value (int): Valor pela fórmula matricial (u = 1..p−1).
        completed (int): O mesmo somado ao termo u = 0.
        oracle (Optional[int]): Valor pelo oráculo ciclotômico, se consultado.
        residual (Optional[int]): a_p isolado do quarto momento misto (três multiplicadores).
    """

    multipliers: Tuple[int, ...]
    value: int
    completed: int
    oracle: Optional[int] = None
    residual: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.oracle is None or self.oracle == self.value


@dataclass(frozen=True)
class RunConfig:
    """
    Configuração de uma execução da CLI.

    Attributes:
        command (str): Subcomando selecionado.
        pmin (int): Início do intervalo de primos.
        pmax (int): Fim do intervalo de primos.
        p (Optional[int]): Primo único para os comandos por primo.
        nmax (int): Maior momento calculado por `moments`.
        multipliers (Tuple[int, ...]): Multiplicadores do comando `mixed`.
        output_format (str): "csv" ou "json".
        cache (Optional[str]): Caminho do cache JSON Lines.
        jobs (int): Número de processos paralelos.
        seed (int): Semente das verificações amostradas.
        with_oracle (bool): Se o oráculo ciclotômico deve ser consultado.
        oracle_limit (int): Maior primo submetido ao oráculo.
        transform_samples (int): Quádruplas sorteadas por primo em `verify`.
    """

    command: str
    pmin: int = 5
    pmax: int = 5
    p: Optional[int] = None
    nmax: int = 6
    multipliers: Tuple[int, ...] = ()
    output_format: str = "json"
    cache: Optional[str] = None
    jobs: int = 1
    seed: int = settings.DEFAULT_SEED
    with_oracle: bool = False
    oracle_limit: int = settings.DEFAULT_ORACLE_LIMIT
    transform_samples: int = settings.TRANSFORM_SAMPLES


__all__ = [
    "Transport",
    "Verdict",
    "BoundReport",
    "LemmaReport",
    "CurveRecord",
    "MomentReport",
    "BoundsRecord",
    "MomentRow",
    "TableRow",
    "MixedRecord",
    "RunConfig",
]
