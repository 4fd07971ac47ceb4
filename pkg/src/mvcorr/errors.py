"""Exception types shared across the package."""


class MvcorrError(Exception):
    """Base class for all package-specific errors."""


class NotALattice(MvcorrError):
    def __init__(self, a: str, b: str, kind: str):
        self.pair = (a, b)
        self.kind = kind
        super().__init__(f"elements {a!r}, {b!r} have no {kind}")


class NotDistributive(MvcorrError):
    def __init__(self, a: str, b: str, c: str):
        self.witness = (a, b, c)
        super().__init__(f"distributivity fails on witness triple ({a}, {b}, {c})")


class NoBounds(MvcorrError):
    pass


class InvalidAlgebra(MvcorrError):
    """Structural defect in an algebra description (bad order, bad names)."""


class UnknownConstant(MvcorrError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown algebra constant {name!r}")


class FormulaSyntaxError(MvcorrError):
    def __init__(self, message: str, position: int, expected: str = ""):
        self.position = position
        self.expected = expected
        detail = f" (expected {expected})" if expected else ""
        super().__init__(f"syntax error at position {position}: {message}{detail}")


class UnboundAtom(MvcorrError):
    pass


class UnboundSymbol(MvcorrError):
    pass


class BudgetExceeded(MvcorrError):
    """An enumeration passed the configured evaluation cap."""


class InvalidModel(MvcorrError):
    """Frame or model description violates a structural constraint."""


class StepCapExceeded(MvcorrError):
    """Rewriting did not terminate within the configured step cap.

    Reported distinctly from ordinary rule failure: hitting the cap means
    the run is inconclusive, not that the input is irreducible.
    """


class NotClassicalSahlqvist(MvcorrError):
    pass
