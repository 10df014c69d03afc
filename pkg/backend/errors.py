"""
Exception hierarchy shared by the backend modules and mapped to exit codes by the CLI.
"""


class DeSitterError(Exception):
    """Base class for every error raised by the backend."""


class ParameterError(DeSitterError, ValueError):
    """Invalid or unsupported parameters."""


class PoleError(DeSitterError, ZeroDivisionError):
    """Gamma-type function evaluated at a nonpositive integer."""


class ConvergenceError(DeSitterError, ArithmeticError):
    """A series did not converge within its term cap, or diverges at the requested point."""


class LightConeError(DeSitterError, ValueError):
    """Point lies on or outside the light cone where the kernels are defined."""


class PreconditionError(DeSitterError, ValueError):
    """Operation requested outside its validity window (e.g. a tail inside the cone)."""


class QuadratureError(DeSitterError, ArithmeticError):
    """Adaptive quadrature failed; `integral` names the offending sub-integral."""

    def __init__(self, integral: str, detail: str):
        self.integral = integral
        self.detail = detail
        super().__init__(f"quadrature failed for {integral}: {detail}")


class InvariantFailure(DeSitterError, AssertionError):
    """One or more verification checks failed."""

    def __init__(self, failures):
        self.failures = list(failures)
        names = ", ".join(f"{f.suite}/{f.name}" for f in self.failures)
        super().__init__(f"{len(self.failures)} invariant(s) failed: {names}")
