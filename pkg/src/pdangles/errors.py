# this_file: src/pdangles/errors.py
"""Exception hierarchy shared by every pdangles module.

Each error carries the module it was raised from and a short machine code, so the
CLI can print a single parsable line of the form ``ERROR <module>:<code> <message>``.
"""


class PdAnglesError(ValueError):
    """Base class for all pdangles errors."""

    module: str = "pdangles"
    code: str = "error"

    def __init__(self, message: str, *, module: str | None = None, code: str | None = None):
        super().__init__(message)
        self.message = message
        if module is not None:
            self.module = module
        if code is not None:
            self.code = code

    def format_line(self) -> str:
        """Render the one-line machine-parsable form used by the CLI."""
        return f"ERROR {self.module}:{self.code} {self.message}"


class OffParseError(PdAnglesError):
    """Malformed OFF header, counts or records."""

    module = "mesh"
    code = "parse"


class MeshValidationError(PdAnglesError):
    """Complex is not an oriented manifold with boundary, or a generator is misused."""

    module = "mesh"
    code = "validation"

    def __init__(self, problems: list[str] | str, *, module: str | None = None):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems), module=module)


class ParameterError(PdAnglesError):
    """A parameter lies outside its documented range."""

    code = "parameter"


class DegreeError(PdAnglesError):
    """Degree or carrier mismatch between cochains and operators."""

    module = "forms"
    code = "degree"


class SpectralGapError(PdAnglesError):
    """No clear gap between "zero" and "nonzero" singular values."""

    code = "spectral-gap"

    def __init__(self, kept: float, discarded: float, *, module: str = "hodge", what: str = ""):
        self.kept = kept
        self.discarded = discarded
        label = f" in {what}" if what else ""
        super().__init__(
            f"ambiguous rank{label}: last kept singular value {kept:.3e}, "
            f"first discarded {discarded:.3e}",
            module=module,
        )


class IllConditionedError(PdAnglesError):
    """The Neumann plus Dirichlet harmonic sum is too close to degenerate."""

    module = "hodge"
    code = "ill-conditioned"

    def __init__(self, condition_number: float):
        self.condition_number = condition_number
        super().__init__(f"H_N + H_D basis condition number {condition_number:.3e}")


class SolverError(PdAnglesError):
    """A linear or least-squares solve failed."""

    code = "solver"


class QuadratureError(PdAnglesError):
    """Composite Gauss-Legendre refinement did not converge."""

    module = "cohom1"
    code = "quadrature"


class IntegrationError(PdAnglesError):
    """The radial ODE integrator stopped before reaching the lower endpoint."""

    module = "cohom1"
    code = "integration"

    def __init__(self, message: str, last_t: float):
        self.last_t = last_t
        super().__init__(f"{message} (last good t = {last_t:.6e})")


class UnderflowError(PdAnglesError):
    """1 - cos(theta) is below what double precision can resolve on the grid."""

    module = "cohom1"
    code = "underflow"


class InvariantError(PdAnglesError):
    """An invariant checked by the verification suite failed."""

    module = "verify"
    code = "invariant"
