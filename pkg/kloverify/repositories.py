from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import json
import logging

from marshmallow import ValidationError

from . import settings
from .exceptions import CacheMiss, ConfigError
from .serializers import MomentReportSchema, ResultLineSchema
from .transports import MomentReport
from .utils.date import format_datetime, get_actual_datetime, parse_datetime

logger = logging.getLogger(__name__)

Key = Tuple[int, int, str]


class IResultRepository(ABC):
    """
    Interface abstrata que define o contrato para repositórios de resultados.

    Um repositório guarda um MomentReport por primo, identificado pela versão do
    schema, pelo primo e por uma impressão digital da configuração que o produziu.
    """

    @abstractmethod
    def create(self, report: MomentReport, fingerprint: str) -> MomentReport:
        """
        Persiste um novo registro.

        Args:
            report (MomentReport): O registro a guardar.
            fingerprint (str): Impressão digital da configuração.

        Returns:
            MomentReport: O próprio registro.
        """
        pass

    @abstractmethod
    def read(self, p: int, fingerprint: str) -> MomentReport:
        """
        Busca o registro de um primo.

        Raises:
            CacheMiss: Se não houver registro para a chave.
        """
        pass

    @abstractmethod
    def list_all(self) -> List[MomentReport]:
        """Todos os registros da versão atual, em ordem crescente de p."""
        pass

    @abstractmethod
    def filter(self, **kwargs) -> List[MomentReport]:
        """Registros que atendem aos critérios (pmin, pmax, passed, fingerprint, since)."""
        pass


class JsonLinesResultRepository(IResultRepository):
    """
    Repositório de resultados em um arquivo JSON Lines, somente de acréscimo.

    Cada linha é um objeto com as chaves de MomentReport mais "v", "fingerprint"
    e "created_at". Linhas posteriores com a mesma chave prevalecem.

    Attributes:
        path (Path): Caminho do arquivo.
        version (int): Versão do schema das linhas.
    """

    def __init__(self, path, version: int = settings.SCHEMA_VERSION):
        self.path = Path(path)
        self.version = version
        self._records: Optional[Dict[Key, dict]] = None

    def _load(self) -> Dict[Key, dict]:
        if self._records is not None:
            return self._records

        records = {}

        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                for number, line in enumerate(f, start=1):
                    if not line.strip():
                        continue
                    try:
                        record = json.loads(line)
                    except json.JSONDecodeError as error:
                        raise ConfigError(
                            message="Linha inválida no cache.",
                            errors=[{"path": str(self.path), "line": number, "error": str(error)}],
                        )

                    if record.get("v") != self.version:
                        continue

                    if "created_at" in record:
                        try:
                            record["created_at"] = parse_datetime(record["created_at"])
                        except (TypeError, ValueError) as error:
                            raise ConfigError(
                                message="Carimbo created_at inválido no cache.",
                                errors=[{"path": str(self.path), "line": number, "error": str(error)}],
                            )

                    records[(record["v"], record["p"], record.get("fingerprint", ""))] = record

        logger.debug("Cache %s carregado com %d registros.", self.path, len(records))
        self._records = records
        return records

    def _to_report(self, record: dict) -> MomentReport:
        try:
            data = {key: value for key, value in record.items() if key != "created_at"}
            return ResultLineSchema().load(data)
        except ValidationError as error:
            raise ConfigError(message="Registro de cache inválido.", errors=[error.messages])

    def create(self, report: MomentReport, fingerprint: str) -> MomentReport:
        created_at = get_actual_datetime().replace(microsecond=0)
        record = {
            "v": self.version,
            "fingerprint": fingerprint,
            **MomentReportSchema().dump(report),
            "created_at": format_datetime(created_at),
        }

        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")

        record["created_at"] = created_at

        self._load()[(self.version, report.p, fingerprint)] = record
        return report

    def read(self, p: int, fingerprint: str) -> MomentReport:
        record = self._load().get((self.version, p, fingerprint))

        if record is None:
            raise CacheMiss(errors=[{"p": p, "v": self.version}])

        return self._to_report(record)

    def list_all(self) -> List[MomentReport]:
        records = sorted(self._load().values(), key=lambda record: record["p"])
        return [self._to_report(record) for record in records]

    def filter(self, **kwargs) -> List[MomentReport]:
        pmin = kwargs.get("pmin")
        pmax = kwargs.get("pmax")
        passed = kwargs.get("passed")
        fingerprint = kwargs.get("fingerprint")
        since = kwargs.get("since")

        reports = []
        for (_, p, key), record in sorted(self._load().items(), key=lambda item: item[0][1]):
            if pmin is not None and p < pmin:
                continue
            if pmax is not None and p > pmax:
                continue
            if fingerprint is not None and key != fingerprint:
                continue
            if since is not None and record.get("created_at", since) < since:
                continue

            report = self._to_report(record)
            if passed is not None and report.passed != passed:
                continue
            reports.append(report)

        return reports


__all__ = ["IResultRepository", "JsonLinesResultRepository"]
