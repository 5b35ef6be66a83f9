# utils/errors.py


class GrothendieckError(Exception):
    """Error base del paquete."""


class ValidationError(GrothendieckError, ValueError):
    """Entrada inválida: formas, valores no finitos, pertenencia a S_d/T_d, parámetros."""


class DimensionError(ValidationError):
    pass


class NumericalError(GrothendieckError, ArithmeticError):
    """Fallo numérico (descomposición, denominador degenerado, invariante roto)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
