from datetime import datetime

from kloverify import settings
import pytz


def get_actual_datetime() -> datetime:
    """
    Retorna um objeto datetime baseado no momento atual em que ele foi chamado e com base
    no fuso horário definido em `settings.TIME_ZONE`.

    :return: Um objeto datetime com fuso horário.
    """
    tz = pytz.timezone(settings.TIME_ZONE)
    return datetime.now(tz=tz)


def format_datetime(value: datetime) -> str:
    """Formata um datetime no formato padrão dos registros de cache."""
    return value.strftime(settings.DEFAULT_DATETIME_FORMAT)


def parse_datetime(value: str) -> datetime:
    """Lê um carimbo `created_at` do cache, no fuso de `settings.TIME_ZONE`."""
    tz = pytz.timezone(settings.TIME_ZONE)
    return tz.localize(datetime.strptime(value, settings.DEFAULT_DATETIME_FORMAT))
