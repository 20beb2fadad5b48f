import pytest

from kloverify.utils import (
    format_datetime,
    format_float,
    format_integer,
    get_actual_datetime,
    parse_datetime,
)


@pytest.mark.parametrize(
    "value, text",
    [(0.0, "0"), (-0.0, "0"), (1 / 3, "0.333333333333"), (2.5e-13, "2.5e-13"), (8.5, "8.5")],
)
def test_format_float(value, text):
    assert format_float(value) == text


def test_format_integer_keeps_every_digit():
    assert format_integer(3**100) == str(3**100)


def test_datetime_helpers_round_trip_to_the_second():
    now = get_actual_datetime()
    parsed = parse_datetime(format_datetime(now))
    assert parsed.tzinfo is not None
    assert parsed == now.replace(microsecond=0)


@pytest.mark.parametrize("text", ["2014-01-01", "01/01/2014 00:00:00", ""])
def test_parse_datetime_only_accepts_the_cache_format(text):
    with pytest.raises(ValueError):
        parse_datetime(text)
