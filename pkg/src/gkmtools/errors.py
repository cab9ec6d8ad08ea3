"""Exception hierarchy shared by the toolkit and the command line."""


class GKMError(Exception):
    """A semantic failure: the input is well formed but the computation refuses it."""


class NegativeCoefficient(GKMError):
    pass


class NonIntegral(GKMError):
    pass


class NotFormal(GKMError):
    pass


class Gkm3Required(GKMError):
    pass


class NonPolynomialResult(GKMError):
    pass


class ResidualNonzero(GKMError):
    pass


class NonIntegralCoefficient(GKMError):
    pass


class NotComplete(GKMError):
    pass


class WrongFamily(GKMError):
    pass


class Inconsistent(GKMError):
    """No nonnegative solution exists. ``step`` is 1-based when raised inside a tower."""

    def __init__(self, message, relation=None, step=None):
        super().__init__(message)
        self.relation = relation
        self.step = step

    def __str__(self):
        base = super().__str__()
        if self.step is not None:
            return f"step {self.step}: {base}"
        return base


class PreconditionFailed(GKMError):
    pass
