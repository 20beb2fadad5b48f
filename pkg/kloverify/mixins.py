from typing import Any, ClassVar, Dict, List, Optional

import csv
import io
import json

SerializedData = Dict[str, Any]


class RenderJsonMixin:
    """
    Mixin para saída em JSON Lines: um objeto serializado por linha.

    Métodos:
        render_json: Converte as linhas serializadas em texto.
    """

    def render_json(self, rows: List[SerializedData]) -> str:
        """
        Converte linhas serializadas em JSON Lines.

        Args:
            rows (List[SerializedData]): Linhas já serializadas pelo schema do comando.

        Returns:
            str: Texto com uma linha JSON por registro, terminado em quebra de linha.
        """
        return "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows)


class RenderCsvMixin:
    """
    Mixin para saída em CSV.

    Valores compostos (listas e dicionários) são gravados como JSON compacto
    dentro da célula; `None` vira célula vazia.

    Attributes:
        csv_columns (Optional[List[str]]): Ordem fixa das colunas. Se não definida,
            usa a ordem das chaves da primeira linha.
    """

    csv_columns: ClassVar[Optional[List[str]]] = None

    def csv_row(self, row: SerializedData) -> SerializedData:
        """Achata uma linha serializada. Subclasses podem expandir colunas."""
        return row

    def _cell(self, value: Any) -> Any:
        if value is None:
            return ""
        if isinstance(value, (list, tuple, dict)):
            return json.dumps(value, ensure_ascii=False, separators=(",", ":"))
        return value

    def render_csv(self, rows: List[SerializedData]) -> str:
        """
        Converte linhas serializadas em CSV com cabeçalho.

        Args:
            rows (List[SerializedData]): Linhas já serializadas.

        Returns:
            str: O documento CSV.
        """
        flat = [self.csv_row(row) for row in rows]

        if not flat:
            return ""

        columns = self.csv_columns or list(flat[0].keys())
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()

        for row in flat:
            writer.writerow({key: self._cell(row.get(key)) for key in columns})

        return buffer.getvalue()


__all__ = ["RenderJsonMixin", "RenderCsvMixin"]
