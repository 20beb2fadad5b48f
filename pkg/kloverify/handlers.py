from typing import Callable, TextIO

import json
import logging
import sys

from marshmallow import ValidationError

from .exceptions import ConfigError, KloverifyError

logger = logging.getLogger(__name__)


class ExceptionHandler:
    """
    Captura exceções da execução e as converte em um relatório JSON no stderr
    e em um código de saída.

    Suporta uma API declarativa para mapear exceções externas para KloverifyErrors:
        ExceptionHandler.when(ValidationError).then_raise(lambda e: ConfigError(...))
        ExceptionHandler.when(json.JSONDecodeError).then_raise(ConfigError(...))
    """

    exception_mappings: dict[type, Callable] = {}

    def __init__(self, stream: TextIO = None):
        self.stream = stream

    def handle(self, exception: Exception) -> int:
        """
        Transforma a exceção conforme os mapeamentos registrados, escreve o
        relatório no stderr e retorna o código de saída.
        """
        transformed = self.transform(exception)
        stream = self.stream or sys.stderr

        if isinstance(transformed, KloverifyError):
            stream.write(json.dumps(transformed.to_dict(), ensure_ascii=False, default=str) + "\n")
            return transformed.exit_code

        logger.exception("Erro inesperado.", exc_info=exception)
        stream.write(
            json.dumps(
                {
                    "code": 1,
                    "error": type(exception).__name__,
                    "message": "An unexpected error occurred.",
                    "errors": [{"message": str(exception)}],
                },
                ensure_ascii=False,
            )
            + "\n"
        )
        return 1

    def transform(self, exception: Exception) -> Exception:
        for exc_type, transformer in self.exception_mappings.items():
            if isinstance(exception, exc_type):
                return transformer(exception)

        return exception

    @classmethod
    def when(cls, exc_type):
        return _ExceptionMapper(cls, exc_type)


class _ExceptionMapper:
    def __init__(self, handler_cls, exc_type):
        self.handler_cls = handler_cls
        self.exc_type = exc_type

    def then_raise(self, value):
        """
        Registra um mapeamento de exceção para outra exceção (normalmente KloverifyError).

        `value` pode ser:
          - uma instância de KloverifyError (será retornada diretamente)
          - um callable que recebe a exceção original e retorna uma KloverifyError
        """

        def transformer(exc):
            if callable(value):
                return value(exc)
            return value

        self.handler_cls.exception_mappings[self.exc_type] = transformer
        return self.handler_cls


ExceptionHandler.when(ValidationError).then_raise(
    lambda e: ConfigError(message="Configuração inválida.", errors=[e.messages])
)

__all__ = ["ExceptionHandler"]
