from kloverify import settings


def format_float(value: float, digits: int = settings.FLOAT_DIGITS) -> str:
    """
    Formata um float com um número fixo de algarismos significativos.

    :param value: O valor a ser formatado.
    :param digits: Algarismos significativos (padrão é settings.FLOAT_DIGITS).
    :return: Uma string estável entre execuções.
    """
    text = f"{float(value):.{digits}g}"
    return "0" if text == "-0" else text


def format_integer(value: int) -> str:
    """Inteiros exatos são sempre impressos em decimal completo."""
    return str(int(value))
