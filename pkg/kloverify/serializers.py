from dataclasses import fields as dataclass_fields
from typing import Any, Dict, Iterable, List, Protocol, Type

from marshmallow import (
    EXCLUDE,
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates_schema,
)
from sympy import isprime

from . import settings
from .transports import MomentReport, RunConfig, Verdict
from .utils.formatting import format_float, format_integer

SerializedData = Dict[str, Any]

COMMANDS = ("verify", "moments", "traces", "bounds", "table", "mixed")
RANGE_COMMANDS = ("verify", "bounds")


class SerializerInterface(Protocol):
    def serialize(self, obj: Any) -> SerializedData: ...


class MarshmallowSerializerAdapter(SerializerInterface):
    """
    Adaptador do serializador do marshmallow para a interface de SerializerInterface.
    """

    def __init__(self, schema_class: Type[Schema], **schema_kwargs):
        self.schema_class = schema_class
        self.schema_kwargs = schema_kwargs

    def serialize(self, obj: Any) -> SerializedData:
        return self.schema_class(**self.schema_kwargs).dump(obj)

    def serialize_many(self, objs: Iterable[Any]) -> List[SerializedData]:
        return self.schema_class(many=True, **self.schema_kwargs).dump(list(objs))


class BigInteger(fields.Field):
    """Inteiro de precisão arbitrária serializado como string decimal."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return format_integer(value)

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return int(value)
        except (TypeError, ValueError) as error:
            raise ValidationError("Inteiro decimal inválido.") from error


class FormattedFloat(fields.Field):
    """Float serializado com settings.FLOAT_DIGITS algarismos significativos."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return format_float(value)

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return float(value)
        except (TypeError, ValueError) as error:
            raise ValidationError("Número de ponto flutuante inválido.") from error


class VerdictSchema(Schema):
    check = fields.String(required=True)
    passed = fields.Boolean(required=True)
    residual = fields.String(load_default="0")
    detail = fields.String(load_default="")

    @post_load
    def make_verdict(self, data, **kwargs):
        return Verdict(**data)


class MomentReportSchema(Schema):
    """
    Schema do registro por primo do comando `verify`.

    As chaves de `moments` são as ordens n em texto; `passed` é apenas de saída.
    """

    class Meta:
        unknown = EXCLUDE
        ordered = True

    p = fields.Integer(required=True)
    passed = fields.Boolean(dump_only=True)
    moments = fields.Dict(keys=fields.String(), values=BigInteger())
    a_p_residual = BigInteger(allow_none=True)
    b_p_residual = BigInteger(allow_none=True)
    traces = fields.List(fields.Tuple((fields.Integer(), fields.Integer())))
    verdicts = fields.List(fields.Nested(VerdictSchema))
    timings_ms = fields.Dict(keys=fields.String(), values=FormattedFloat())

    @post_load
    def make_report(self, data, **kwargs):
        known = {field.name for field in dataclass_fields(MomentReport)}
        data = {key: value for key, value in data.items() if key in known}
        data["moments"] = {int(n): value for n, value in data.get("moments", {}).items()}
        data["traces"] = [tuple(pair) for pair in data.get("traces", [])]
        return MomentReport(**data)


class ResultLineSchema(MomentReportSchema):
    """Uma linha do cache JSON Lines: o registro mais versão, impressão digital e data."""

    v = fields.Integer(required=True, validate=validate.Equal(settings.SCHEMA_VERSION))
    fingerprint = fields.String(required=True)
    created_at = fields.String()


class CurveRecordSchema(Schema):
    class Meta:
        ordered = True

    p = fields.Integer()
    k = fields.Integer()
    point_count = fields.Integer()
    trace = fields.Integer()
    epsilon = fields.Integer(allow_none=True)
    hasse_margin = FormattedFloat(dump_only=True)


class BoundsRecordSchema(Schema):
    class Meta:
        ordered = True

    p = fields.Integer()
    max_abs = FormattedFloat()
    weil_ratio = FormattedFloat()
    barrier_ratio = FormattedFloat()
    v6_ratio = FormattedFloat()
    v6_exact = fields.Boolean()
    passed = fields.Boolean()


class MomentRowSchema(Schema):
    class Meta:
        ordered = True

    p = fields.Integer()
    n = fields.Integer()
    value = BigInteger()
    check = fields.String()
    agrees = fields.Boolean(allow_none=True)


class TableRowSchema(Schema):
    class Meta:
        ordered = True

    p = fields.Integer()
    section = fields.String()
    row = fields.Integer()
    cells = fields.List(fields.String())


class MixedRecordSchema(Schema):
    class Meta:
        ordered = True

    p = fields.Integer()
    multipliers = fields.List(fields.Integer())
    value = BigInteger()
    completed = BigInteger()
    oracle = BigInteger(allow_none=True)
    residual = fields.Integer(allow_none=True)
    passed = fields.Boolean(dump_only=True)


class RunConfigSchema(Schema):
    """
    Valida a entrada da CLI e constrói um RunConfig.

    Comandos de intervalo (`verify`, `bounds`) exigem pmin ≤ pmax; os demais
    exigem um primo p ≥ 5.
    """

    class Meta:
        unknown = EXCLUDE

    command = fields.String(required=True, validate=validate.OneOf(COMMANDS))
    pmin = fields.Integer(load_default=5)
    pmax = fields.Integer(load_default=None, allow_none=True)
    p = fields.Integer(load_default=None, allow_none=True)
    nmax = fields.Integer(
        load_default=6, validate=validate.Range(min=2, max=settings.MOMENTS_NMAX_CAP)
    )
    multipliers = fields.List(fields.Integer(), load_default=list)
    output_format = fields.String(
        data_key="format",
        load_default=settings.DEFAULT_FORMAT,
        validate=validate.OneOf(("csv", "json")),
    )
    cache = fields.String(load_default=None, allow_none=True)
    jobs = fields.Integer(load_default=settings.DEFAULT_JOBS, validate=validate.Range(min=1))
    seed = fields.Integer(load_default=settings.DEFAULT_SEED)
    with_oracle = fields.Boolean(load_default=False)
    oracle_limit = fields.Integer(
        load_default=settings.DEFAULT_ORACLE_LIMIT,
        validate=validate.Range(min=5, max=settings.ORACLE_HARD_CAP),
    )
    transform_samples = fields.Integer(
        load_default=settings.TRANSFORM_SAMPLES, validate=validate.Range(min=1)
    )

    @validates_schema
    def validate_command(self, data, **kwargs):
        command = data["command"]

        if command in RANGE_COMMANDS:
            pmax = data.get("pmax")

            if pmax is None:
                raise ValidationError("Informe --pmax.", "pmax")
            if data["pmin"] > pmax:
                raise ValidationError("pmin deve ser ≤ pmax.", "pmin")
            if command == "bounds" and pmax > settings.BOUNDS_PMAX_CAP:
                raise ValidationError(
                    f"bounds aceita pmax ≤ {settings.BOUNDS_PMAX_CAP}.", "pmax"
                )
            return

        p = data.get("p")

        if p is None or p < 5 or not isprime(p):
            raise ValidationError("Informe --p com um primo p ≥ 5.", "p")
        if command == "table" and p > settings.TABLE_PMAX:
            raise ValidationError(f"table aceita p ≤ {settings.TABLE_PMAX}.", "p")
        if command == "mixed":
            multipliers = data.get("multipliers") or []
            if not multipliers or any(a % p == 0 for a in multipliers):
                raise ValidationError(
                    "mixed exige multiplicadores não nulos módulo p.", "multipliers"
                )

    @post_load
    def make_config(self, data, **kwargs):
        data["multipliers"] = tuple(data.get("multipliers") or ())
        if data.get("pmax") is None:
            data["pmax"] = data["pmin"]
        return RunConfig(**data)


class SerializerFactory:
    @staticmethod
    def get_serializer(serializer, **schema_kwargs) -> SerializerInterface:
        if isinstance(serializer, type) and issubclass(serializer, Schema):
            return MarshmallowSerializerAdapter(serializer, **schema_kwargs)

        if isinstance(serializer, MarshmallowSerializerAdapter):
            return serializer

        raise TypeError(
            f"Tipo de serializador não suportado: {type(serializer).__name__}"
        )


__all__ = [
    "SerializedData",
    "SerializerInterface",
    "MarshmallowSerializerAdapter",
    "BigInteger",
    "FormattedFloat",
    "VerdictSchema",
    "MomentReportSchema",
    "ResultLineSchema",
    "CurveRecordSchema",
    "BoundsRecordSchema",
    "MomentRowSchema",
    "TableRowSchema",
    "MixedRecordSchema",
    "RunConfigSchema",
    "SerializerFactory",
]
