"""
Ponto de entrada `kloverify`.

Subcomandos: verify, moments, traces, bounds, table, mixed. A saída padrão
recebe apenas os registros renderizados; logs e erros vão para o stderr.
"""

from typing import List, Optional

import argparse
import logging
import sys

from . import __version__, settings
from .commands import COMMANDS
from .handlers import ExceptionHandler
from .serializers import RunConfigSchema

logger = logging.getLogger(__name__)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default=settings.DEFAULT_FORMAT)
    parser.add_argument("--jobs", type=int, default=settings.DEFAULT_JOBS)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--with-oracle", action="store_true")
    parser.add_argument("--oracle-limit", type=int, default=settings.DEFAULT_ORACLE_LIMIT)
    parser.add_argument("--verbose", "-v", action="store_true")


def _add_range(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pmin", type=int, default=5)
    parser.add_argument("--pmax", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloverify",
        description="Verificação exata de momentos de somas de Kloosterman.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", help="conjunto completo de identidades por primo")
    _add_range(verify)
    verify.add_argument("--nmax", type=int, default=6)
    verify.add_argument("--cache", default=None)
    verify.add_argument("--transform-samples", type=int, default=settings.TRANSFORM_SAMPLES)
    _add_common(verify)

    moments = subparsers.add_parser("moments", help="V_2..V_nmax de um primo")
    moments.add_argument("--p", type=int, required=True)
    moments.add_argument("--nmax", type=int, default=6)
    _add_common(moments)

    traces = subparsers.add_parser("traces", help="traços de Frobenius da família E_k")
    traces.add_argument("--p", type=int, required=True)
    _add_common(traces)

    bounds = subparsers.add_parser("bounds", help="cotas de Weil, de barreira e de V_6")
    bounds.add_argument("--pmin", type=int, default=2)
    bounds.add_argument("--pmax", type=int, required=True)
    _add_common(bounds)

    table = subparsers.add_parser("table", help="tabela de supercaracteres, U e T_1")
    table.add_argument("--p", type=int, required=True)
    _add_common(table)

    mixed = subparsers.add_parser("mixed", help="momento misto Σ K_u K_{a1 u} ... K_{an u}")
    mixed.add_argument("--p", type=int, required=True)
    mixed.add_argument("multipliers", type=int, nargs="+")
    _add_common(mixed)

    return parser


def configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("kloverify")
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Executa a CLI.

    Args:
        argv (List[str], optional): Argumentos; por padrão sys.argv[1:].

    Returns:
        int: 0 se tudo passou, 1 em falha de verificação, 2 em erro de uso.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    handler = ExceptionHandler()

    try:
        raw = {
            key: value
            for key, value in vars(args).items()
            if key != "verbose" and value is not None
        }
        config = RunConfigSchema().load(raw)
        result = COMMANDS[config.command]().run(config)
    except Exception as error:
        return handler.handle(error)

    sys.stdout.write(result.output)
    sys.stdout.flush()

    if result.failure is not None:
        handler.handle(result.failure)

    return result.exit_code


def run() -> None:
    sys.exit(main())


__all__ = ["build_parser", "configure_logging", "main", "run"]
