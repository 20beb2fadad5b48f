from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import replace
from functools import partial
from typing import Callable, Dict, Iterable, List, Optional

import logging
import math
import random
import time

from sympy import primerange

from . import settings
from .cyclotomic import mixed_moment_oracle, moment_oracle_range
from .elliptic import (
    barrier_chain,
    closed_moments,
    epsilon_vector,
    fourth_mixed_residual,
    random_transform_quadruples,
    solve_residuals,
    trace_list,
    v6_rhs,
    verify_epsilon_lemmas,
    verify_legendre_sums,
    verify_transform,
)
from .exact import mixed_moment_via_matrix, moment_via_matrix, moments_via_matrix, t2_row, t4_entry
from .exceptions import CacheMiss, DomainError, VerificationFailure
from .kloosterman import (
    check_barrier,
    check_barrier_small,
    check_weil,
    float_moment,
    kloosterman_direct,
    kloosterman_vector,
)
from .modp import PrimeContext
from .repositories import IResultRepository
from .supercharacter import SuperTheory, build_U, character_table, verify_lemma21
from .transports import (
    BoundsRecord,
    CurveRecord,
    MixedRecord,
    MomentReport,
    MomentRow,
    RunConfig,
    TableRow,
    Verdict,
)
from .utils.formatting import format_float

logger = logging.getLogger(__name__)

V6_FLOAT_TOLERANCE = 1e-4


class OrchestratorService(ABC):
    """
    Classe base para serviços orquestradores.

    Um serviço orquestrador combina as rotinas numéricas de vários módulos para
    executar um comando completo da CLI. Serviços devolvem transportes e nunca
    escrevem na saída padrão.

    Métodos:
        execute: Método abstrato para implementar a lógica principal do serviço.
    """

    @abstractmethod
    def execute(self, *args, **kwargs):
        """
        Executa o código principal do serviço.

        Args:
            *args: Argumentos posicionais necessários para a execução.
            **kwargs: Argumentos nomeados adicionais.
        """
        pass


def prime_range(pmin: int, pmax: int, floor: int = 5) -> List[int]:
    """Primos em [max(pmin, floor), pmax], em ordem crescente."""
    return [int(p) for p in primerange(max(pmin, floor), pmax + 1)]


def _ordered_map(fn: Callable, items: List, jobs: int) -> List:
    """Aplica `fn` preservando a ordem; usa processos quando jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(fn, items))


@contextmanager
def _timed(timings: Dict[str, float], name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[name] = round((time.perf_counter() - start) * 1000.0, 3)


class _CheckRunner:
    """Executa verificações nomeadas e acumula veredictos e tempos."""

    def __init__(self, p: int):
        self.p = p
        self.verdicts: List[Verdict] = []
        self.timings: Dict[str, float] = {}

    def run(self, name: str, check: Callable[[], tuple]) -> bool:
        with _timed(self.timings, name):
            try:
                passed, residual, detail = check()
            except VerificationFailure as error:
                passed, residual, detail = False, "", f"{error.message} {error.errors}"

        if not passed:
            logger.info("Falha em p=%d, verificação %s: %s", self.p, name, detail)

        self.verdicts.append(
            Verdict(check=name, passed=bool(passed), residual=str(residual), detail=detail)
        )
        return bool(passed)


def verify_prime(
    p: int,
    nmax: int = 6,
    with_oracle: bool = False,
    oracle_limit: int = settings.DEFAULT_ORACLE_LIMIT,
    seed: int = settings.DEFAULT_SEED,
    transform_samples: int = settings.TRANSFORM_SAMPLES,
) -> MomentReport:
    """
    Executa o conjunto completo de identidades para um primo.

    Args:
        p (int): O primo, p ≥ 5.
        nmax (int): Maior momento calculado (no mínimo 6).
        with_oracle (bool): Se os momentos devem ser conferidos em ℤ[ζ_p].
        oracle_limit (int): Maior primo submetido ao oráculo.
        seed (int): Semente das verificações amostradas.
        transform_samples (int): Quádruplas sorteadas para a transformação quártica.

    Returns:
        MomentReport: Momentos, traços, resíduos, veredictos e tempos.
    """
    ctx = PrimeContext(p)
    theory = SuperTheory(ctx)
    runner = _CheckRunner(p)
    state = {"moments": {}, "traces": [], "a_p": None, "b_p": None}

    def moments():
        state["moments"] = moments_via_matrix(theory, max(nmax, 6))
        return True, 0, ""

    if not runner.run("moments", moments):
        return MomentReport(p=p, verdicts=runner.verdicts, timings_ms=runner.timings)

    values = state["moments"]
    eps = epsilon_vector(ctx)

    def closed_forms():
        closed = closed_moments(ctx)
        residual = max(abs(values[n] - closed[n]) for n in (2, 3, 4))
        return residual == 0, residual, ""

    def hasse():
        state["traces"] = trace_list(ctx)
        return True, 0, f"{len(state['traces'])} curvas"

    def legendre_sums():
        failures = verify_legendre_sums(ctx)
        return not failures, len(failures), ",".join(map(str, failures))

    def epsilon_lemmas():
        failures = verify_epsilon_lemmas(ctx, eps)
        return not failures, len(failures), ",".join(failures)

    def t2_closed_form():
        t2_row(theory, eps.eps)
        return True, 0, ""

    def t4():
        entry = t4_entry(theory, eps.eps)
        residual = values[6] - (p * p * entry - 2 - (p - 1) ** 5)
        return residual == 0, residual, ""

    def theorem_v6():
        residual = values[6] - v6_rhs(ctx, state["traces"])
        return residual == 0, residual, ""

    def residual_bounds():
        state["a_p"], state["b_p"] = solve_residuals(ctx, values[5], values[6])
        return True, 0, f"a_p={state['a_p']} b_p={state['b_p']}"

    def v6_hasse_bound():
        chain = barrier_chain(p, values[6])
        return chain.passed, format_float(values[6] / chain.stages[0]), ""

    def transform():
        rng = random.Random(f"{seed}:{p}")
        for quadruple in random_transform_quadruples(ctx, transform_samples, rng):
            verify_transform(ctx, *quadruple)
        return True, 0, f"{transform_samples} quádruplas"

    runner.run("closed_forms", closed_forms)
    if runner.run("hasse", hasse):
        runner.run("theorem_v6", theorem_v6)
    runner.run("legendre_sums", legendre_sums)
    runner.run("epsilon_lemmas", epsilon_lemmas)
    runner.run("t2_closed_form", t2_closed_form)
    runner.run("t4_entry", t4)
    runner.run("residual_bounds", residual_bounds)
    runner.run("v6_hasse_bound", v6_hasse_bound)
    runner.run("transform", transform)

    if p <= settings.TABLE_PMAX:

        def supercharacter():
            report = verify_lemma21(theory, seed=seed)
            worst = max(report.residuals.values())
            return report.passed, format_float(worst), ",".join(report.failures())

        runner.run("supercharacter", supercharacter)

    if with_oracle and p <= oracle_limit:

        def oracle():
            expected = moment_oracle_range(ctx, max(nmax, 6))
            mismatched = [n for n in values if values[n] != expected[n]]
            if expected[1] != 1:
                mismatched.append(1)
            return not mismatched, len(mismatched), ",".join(map(str, mismatched))

        runner.run("oracle", oracle)

    return MomentReport(
        p=p,
        moments=values,
        a_p_residual=state["a_p"],
        b_p_residual=state["b_p"],
        traces=[(record.k, record.trace) for record in state["traces"]],
        verdicts=runner.verdicts,
        timings_ms=runner.timings,
    )


def verify_fingerprint(config: RunConfig) -> str:
    """Identifica as opções que alteram o conteúdo de um MomentReport."""
    oracle = config.oracle_limit if config.with_oracle else 0
    return (
        f"nmax={max(config.nmax, 6)};oracle={oracle};seed={config.seed};"
        f"transform={config.transform_samples}"
    )


class VerifyService(OrchestratorService):
    """
    Verifica todas as identidades em um intervalo de primos, consultando o cache.

    Attributes:
        repository (Optional[IResultRepository]): Cache de resultados.
        kernel_calls (int): Número de primos efetivamente calculados.
    """

    def __init__(self, repository: Optional[IResultRepository] = None):
        self.repository = repository
        self.kernel_calls = 0

    def execute(self, config: RunConfig) -> List[MomentReport]:
        primes = prime_range(config.pmin, config.pmax)
        fingerprint = verify_fingerprint(config)
        reports: Dict[int, MomentReport] = {}
        missing = []

        for p in primes:
            if self.repository is not None:
                try:
                    reports[p] = self.repository.read(p, fingerprint)
                    logger.info("p=%d lido do cache.", p)
                    continue
                except CacheMiss:
                    pass
            missing.append(p)

        kernel = partial(
            verify_prime,
            nmax=config.nmax,
            with_oracle=config.with_oracle,
            oracle_limit=config.oracle_limit,
            seed=config.seed,
            transform_samples=config.transform_samples,
        )

        for report in _ordered_map(kernel, missing, config.jobs):
            self.kernel_calls += 1
            reports[report.p] = report
            if self.repository is not None:
                self.repository.create(report, fingerprint)

        return [reports[p] for p in primes]


class MomentsService(OrchestratorService):
    """V_2..V_nmax de um primo, anotados com a conferência aplicável."""

    def execute(self, config: RunConfig) -> List[MomentRow]:
        p, nmax = config.p, config.nmax
        ctx = PrimeContext(p)
        values = moments_via_matrix(SuperTheory(ctx), nmax)
        closed = closed_moments(ctx)
        oracle = None

        if config.with_oracle and p <= config.oracle_limit:
            oracle = moment_oracle_range(ctx, nmax)

        rows = []
        for n, value in values.items():
            checks = {}
            if n in closed:
                checks["closed_form"] = value == closed[n]
            if n == 6:
                checks["theorem_v6"] = value == v6_rhs(ctx)
            if oracle is not None:
                checks["oracle"] = value == oracle[n]

            rows.append(
                MomentRow(
                    p=p,
                    n=n,
                    value=value,
                    check="+".join(checks),
                    agrees=all(checks.values()) if checks else None,
                )
            )

        return rows


class TracesService(OrchestratorService):
    """Uma linha (k, |E_k|, a_p, ε_k) por curva válida."""

    def execute(self, config: RunConfig) -> List[CurveRecord]:
        ctx = PrimeContext(config.p)
        eps = epsilon_vector(ctx)
        return [replace(record, epsilon=eps[record.k]) for record in trace_list(ctx)]


def bounds_prime(p: int) -> BoundsRecord:
    """Cotas de Weil, de barreira e V_6 ≤ 8.5p⁴ para um primo (inclusive 2 e 3)."""
    if p in (2, 3):
        barrier = check_barrier_small(p)
        values = [kloosterman_direct(p, u) for u in range(1, p)]
        max_abs = barrier.max_abs
        weil_ratio = max_abs / (2 * math.sqrt(p))
        weil_passed = weil_ratio <= 1
        v6, v6_exact, chain_passed = round(math.fsum(v**6 for v in values)), True, True
    else:
        ctx = PrimeContext(p)
        vector = kloosterman_vector(ctx)
        weil = check_weil(ctx, vector)
        barrier = check_barrier(ctx, vector)
        max_abs, weil_ratio, weil_passed = weil.max_abs, weil.ratio, weil.passed

        if p <= settings.EXACT_V6_LIMIT:
            v6, v6_exact = moment_via_matrix(SuperTheory(ctx), 6), True
        else:
            v6, v6_exact = float_moment(vector, 6), False

        chain_passed = barrier_chain(p, v6 if v6_exact else None).passed

    v6_ratio = v6 / p**4
    slack = 0.0 if v6_exact else V6_FLOAT_TOLERANCE
    passed = weil_passed and barrier.passed and v6_ratio <= 8.5 * (1 + slack) and chain_passed

    return BoundsRecord(
        p=p,
        max_abs=max_abs,
        weil_ratio=weil_ratio,
        barrier_ratio=barrier.ratio,
        v6_ratio=v6_ratio,
        v6_exact=v6_exact,
        passed=passed,
    )


class BoundsService(OrchestratorService):
    def execute(self, config: RunConfig) -> List[BoundsRecord]:
        primes = prime_range(config.pmin, config.pmax, floor=2)
        return _ordered_map(bounds_prime, primes, config.jobs)


class TableService(OrchestratorService):
    """Tabela de supercaracteres, U e T₁ linha a linha."""

    def execute(self, config: RunConfig) -> List[TableRow]:
        p = config.p
        theory = SuperTheory(PrimeContext(p))
        table = character_table(theory)
        U = build_U(theory, table)
        T = theory.transfer(1)

        rows = []
        rows += _matrix_rows(p, "sigma", (map(format_float, row) for row in table.sigma))
        rows += _matrix_rows(p, "U", (map(format_float, row) for row in U))
        rows += _matrix_rows(p, "T1", (map(str, T.row(i)) for i in range(theory.N)))
        return rows


def _matrix_rows(p: int, section: str, rows: Iterable[Iterable[str]]) -> List[TableRow]:
    return [
        TableRow(p=p, section=section, row=i, cells=tuple(cells))
        for i, cells in enumerate(rows, start=1)
    ]


class MixedService(OrchestratorService):
    """Momento misto pela fórmula matricial, pelo oráculo e, para três multiplicadores, o resíduo."""

    def execute(self, config: RunConfig) -> List[MixedRecord]:
        p, multipliers = config.p, tuple(config.multipliers)
        ctx = PrimeContext(p)
        theory = SuperTheory(ctx)

        value = mixed_moment_via_matrix(theory, multipliers)
        completed = value + (-1) ** (len(multipliers) + 1)
        oracle = None
        residual = None

        if config.with_oracle and p <= config.oracle_limit:
            oracle = mixed_moment_oracle(ctx, multipliers)

        if len(multipliers) == 3:
            try:
                residual = fourth_mixed_residual(ctx, *multipliers, theory=theory)
            except DomainError as error:
                logger.info("Resíduo do quarto momento misto omitido: %s", error.message)

        return [
            MixedRecord(
                p=p,
                multipliers=multipliers,
                value=value,
                completed=completed,
                oracle=oracle,
                residual=residual,
            )
        ]


__all__ = [
    "OrchestratorService",
    "prime_range",
    "verify_prime",
    "verify_fingerprint",
    "VerifyService",
    "MomentsService",
    "TracesService",
    "bounds_prime",
    "BoundsService",
    "TableService",
    "MixedService",
]
