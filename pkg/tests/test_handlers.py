import io
import json

import pytest
from marshmallow import ValidationError

from kloverify.exceptions import (
    CacheMiss,
    CostGuardExceeded,
    DegenerateCurve,
    DomainError,
    NotRationalInteger,
    VerificationFailure,
)
from kloverify.handlers import ExceptionHandler


def handle(error):
    stream = io.StringIO()
    code = ExceptionHandler(stream=stream).handle(error)
    return code, json.loads(stream.getvalue())


@pytest.mark.parametrize(
    "error, code",
    [
        (DomainError(), 2),
        (DegenerateCurve(), 2),
        (CostGuardExceeded(), 2),
        (CacheMiss(), 2),
        (VerificationFailure(), 1),
        (NotRationalInteger(), 1),
    ],
)
def test_exit_codes(error, code):
    assert handle(error)[0] == code


def test_report_carries_message_and_errors():
    code, report = handle(DomainError(message="p inválido", errors=[{"p": 9}]))
    assert report == {"code": 2, "error": "DomainError", "message": "p inválido", "errors": [{"p": 9}]}


def test_foreign_exceptions_are_mapped_to_config_errors():
    code, report = handle(ValidationError({"p": ["obrigatório"]}))
    assert code == 2
    assert report["error"] == "ConfigError"
    assert report["errors"] == [{"p": ["obrigatório"]}]


@pytest.mark.parametrize("error", [KeyError("x"), ValueError("k fora do intervalo")])
def test_unknown_exceptions_exit_with_one(error):
    code, report = handle(error)
    assert code == 1
    assert report["error"] == type(error).__name__
    assert report["errors"] == [{"message": str(error)}]
