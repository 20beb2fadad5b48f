from dataclasses import dataclass
from typing import Any, ClassVar, Dict, List, Optional, Type

import logging

from marshmallow import Schema

from . import mixins
from .exceptions import VerificationFailure
from .repositories import JsonLinesResultRepository
from .serializers import (
    BoundsRecordSchema,
    CurveRecordSchema,
    MixedRecordSchema,
    MomentReportSchema,
    MomentRowSchema,
    SerializerFactory,
    SerializerInterface,
    TableRowSchema,
)
from .services import (
    BoundsService,
    MixedService,
    MomentsService,
    OrchestratorService,
    TableService,
    TracesService,
    VerifyService,
)
from .transports import RunConfig

logger = logging.getLogger(__name__)

SerializedData = Dict[str, Any]


@dataclass(frozen=True)
class CommandResult:
    """
    Resultado de um comando.

    Attributes:
        output (str): Texto determinístico para a saída padrão.
        exit_code (int): 0 se tudo passou, 1 em falha de verificação.
        failure (Optional[VerificationFailure]): A primeira falha, para o stderr.
    """

    output: str
    exit_code: int = 0
    failure: Optional[VerificationFailure] = None


class GenericCommand(mixins.RenderJsonMixin, mixins.RenderCsvMixin):
    """
    Classe base genérica para os subcomandos da CLI.

    Um comando obtém seu serviço, executa-o com o RunConfig já validado,
    serializa os transportes com o schema de saída e os renderiza no formato
    pedido.

    Attributes:
        service_class (Type[OrchestratorService]): Serviço executado pelo comando.
        output_schema (Type[Schema]): Schema marshmallow de cada linha de saída.
        schema_kwargs (Dict[str, Any]): Argumentos repassados ao schema (ex.: exclude).
    """

    service_class: ClassVar[Type[OrchestratorService]] = None
    output_schema: ClassVar[Type[Schema]] = None
    schema_kwargs: ClassVar[Dict[str, Any]] = {}

    def __init__(self) -> None:
        self._validate_required_attributes()

    def _validate_required_attributes(self) -> None:
        required_attributes = {"service_class", "output_schema"}
        missing_attributes = [
            attr for attr in required_attributes if not getattr(self, attr)
        ]

        if missing_attributes:
            raise TypeError(
                f"A classe {self.__class__.__name__} deve definir os atributos: "
                f"{', '.join(missing_attributes)}"
            )

    def get_service(self, config: RunConfig) -> OrchestratorService:
        return self.service_class()

    def get_serializer(self) -> SerializerInterface:
        return SerializerFactory.get_serializer(self.output_schema, **self.schema_kwargs)

    def render(self, rows: List[SerializedData], output_format: str) -> str:
        if output_format == "csv":
            return self.render_csv(rows)
        return self.render_json(rows)

    def find_failure(self, results: List[Any]) -> Optional[VerificationFailure]:
        """Retorna a primeira falha entre os resultados, se houver."""
        return None

    def run(self, config: RunConfig) -> CommandResult:
        """
        Executa o comando completo.

        Args:
            config (RunConfig): Configuração validada.

        Returns:
            CommandResult: Saída renderizada, código de saída e primeira falha.
        """
        service = self.get_service(config)
        results = service.execute(config)
        rows = self.get_serializer().serialize_many(results)
        failure = self.find_failure(results)

        return CommandResult(
            output=self.render(rows, config.output_format),
            exit_code=failure.exit_code if failure else 0,
            failure=failure,
        )


class VerifyCommand(GenericCommand):
    service_class = VerifyService
    output_schema = MomentReportSchema
    schema_kwargs = {"exclude": ("timings_ms",)}

    def get_service(self, config: RunConfig) -> VerifyService:
        repository = JsonLinesResultRepository(config.cache) if config.cache else None
        return VerifyService(repository=repository)

    def csv_row(self, row: SerializedData) -> SerializedData:
        flat = {
            "p": row["p"],
            "passed": row["passed"],
            "a_p_residual": row["a_p_residual"],
            "b_p_residual": row["b_p_residual"],
            "failed": ";".join(v["check"] for v in row["verdicts"] if not v["passed"]),
        }
        flat.update({f"V{n}": value for n, value in row["moments"].items()})
        return flat

    def render_csv(self, rows: List[SerializedData]) -> str:
        orders = sorted({int(n) for row in rows for n in row["moments"]})
        self.csv_columns = ["p", "passed"] + [f"V{n}" for n in orders] + [
            "a_p_residual",
            "b_p_residual",
            "failed",
        ]
        return super().render_csv(rows)

    def find_failure(self, results):
        for report in results:
            verdict = report.first_failure()
            if verdict is not None:
                return VerificationFailure(
                    message=f"Verificação {verdict.check} falhou em p={report.p}.",
                    errors=[{"p": report.p, "check": verdict.check, "detail": verdict.detail}],
                )
        return None


class MomentsCommand(GenericCommand):
    service_class = MomentsService
    output_schema = MomentRowSchema

    def find_failure(self, results):
        for row in results:
            if row.agrees is False:
                return VerificationFailure(
                    message=f"V_{row.n}({row.p}) diverge de {row.check}.",
                    errors=[{"p": row.p, "n": row.n, "check": row.check}],
                )
        return None


class TracesCommand(GenericCommand):
    service_class = TracesService
    output_schema = CurveRecordSchema

    def find_failure(self, results):
        for record in results:
            if record.epsilon != -1 - record.trace:
                return VerificationFailure(
                    message="Coluna ε_k diverge de −1 − a_p(E_k).",
                    errors=[{"p": record.p, "k": record.k}],
                )
        return None


class BoundsCommand(GenericCommand):
    service_class = BoundsService
    output_schema = BoundsRecordSchema

    def find_failure(self, results):
        for record in results:
            if not record.passed:
                return VerificationFailure(
                    message=f"Cotas violadas em p={record.p}.", errors=[{"p": record.p}]
                )
        return None


class TableCommand(GenericCommand):
    service_class = TableService
    output_schema = TableRowSchema

    def csv_row(self, row: SerializedData) -> SerializedData:
        flat = {"section": row["section"], "row": row["row"]}
        flat.update({f"c{j}": cell for j, cell in enumerate(row["cells"], start=1)})
        return flat

    def render_csv(self, rows: List[SerializedData]) -> str:
        width = max((len(row["cells"]) for row in rows), default=0)
        self.csv_columns = ["section", "row"] + [f"c{j}" for j in range(1, width + 1)]
        return super().render_csv(rows)


class MixedCommand(GenericCommand):
    service_class = MixedService
    output_schema = MixedRecordSchema

    def find_failure(self, results):
        for record in results:
            if not record.passed:
                return VerificationFailure(
                    message="Fórmula matricial e oráculo divergem.",
                    errors=[{"p": record.p, "multipliers": list(record.multipliers)}],
                )
        return None


COMMANDS: Dict[str, Type[GenericCommand]] = {
    "verify": VerifyCommand,
    "moments": MomentsCommand,
    "traces": TracesCommand,
    "bounds": BoundsCommand,
    "table": TableCommand,
    "mixed": MixedCommand,
}


__all__ = [
    "CommandResult",
    "GenericCommand",
    "VerifyCommand",
    "MomentsCommand",
    "TracesCommand",
    "BoundsCommand",
    "TableCommand",
    "MixedCommand",
    "COMMANDS",
]
