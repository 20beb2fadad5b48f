from .date import get_actual_datetime, format_datetime, parse_datetime
from .formatting import format_float, format_integer

__all__ = [
    "get_actual_datetime",
    "format_datetime",
    "parse_datetime",
    "format_float",
    "format_integer",
]
