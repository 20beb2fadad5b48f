from typing import ClassVar


class KloverifyError(Exception):
    """
    Classe base para todas as exceções personalizadas.

    Attributes:
        exit_code (int): Código de saída do processo associado à exceção.
        default_message (str): Mensagem padrão da exceção.
        message (str): Mensagem personalizada da exceção.
        errors (list): Lista de erros específicos associados à exceção.
    """

    exit_code: ClassVar[int] = 1
    default_message: ClassVar[str] = "An unexpected error occurred."

    def __init__(self, message=None, exit_code=None, errors=None):
        """
        Inicializa uma instância de KloverifyError.

        Args:
            message (str, optional): Mensagem principal do erro. Se não fornecida, será usada a mensagem padrão.
            exit_code (int, optional): Código de saída associado ao erro. Se não fornecido, será usado o código padrão.
            errors (list, optional): Lista de erros específicos, como o primo e a verificação que falharam.
        """
        self.message = message or self.default_message
        self.exit_code = exit_code or self.exit_code
        self.errors = errors or []
        super().__init__(self.message)

    def to_dict(self):
        """
        Converte a exceção em um dicionário JSON no formato simplificado.

        Returns:
            dict: Dicionário contendo o código de saída, a mensagem e os erros associados.
        """
        return {
            "code": self.exit_code,
            "error": self.__class__.__name__,
            "message": self.message,
            "errors": self.errors,
        }


class DomainError(KloverifyError):
    exit_code = 2
    default_message = "Argument outside the operation's domain."


class DegenerateCurve(DomainError):
    default_message = "The curve parameter yields a singular (non-elliptic) curve."


class SharedRootOrEqualLinear(DomainError):
    default_message = "Quadratics share a root modulo p or have equal linear terms."


class ConfigError(KloverifyError):
    exit_code = 2
    default_message = "Invalid run configuration."


class CostGuardExceeded(ConfigError):
    default_message = "Requested computation exceeds the configured cost guard."


class CacheMiss(KloverifyError):
    exit_code = 2
    default_message = "Result not found in cache."


class VerificationFailure(KloverifyError):
    exit_code = 1
    default_message = "Verification failed."


class NotRationalInteger(VerificationFailure):
    default_message = "Cyclotomic value is not a rational integer."


class ArithmeticBug(VerificationFailure):
    default_message = "An exact-arithmetic invariant was violated."


__all__ = [
    "KloverifyError",
    "DomainError",
    "DegenerateCurve",
    "SharedRootOrEqualLinear",
    "ConfigError",
    "CostGuardExceeded",
    "CacheMiss",
    "VerificationFailure",
    "NotRationalInteger",
    "ArithmeticBug",
]
