"""Exception taxonomy shared by the whole package.

Every failure that carries mathematical meaning gets its own class so callers
(and the CLI exit-code logic) can react without string matching.  Exceptions
flagged as obstructions are *answers*, not bugs: they report a certified
negative result such as a non-principal Steinitz class.
"""


class GenusLabError(Exception):
    """Base class for all package errors."""


class MathObstruction(GenusLabError):
    """A certified negative mathematical answer (CLI exit code 2)."""


class ParseError(GenusLabError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos} in {text!r})"
        super().__init__(message)


class Unsupported(GenusLabError):
    """Input is outside the supported desk-computable range."""


class ZeroElement(GenusLabError):
    """Zero passed where a nonzero field element is required."""


class NotAUnit(GenusLabError):
    """Element has a pole or zero at a place where a unit is required."""


class FactorBoundExceeded(GenusLabError):
    def __init__(self, n: int, bound: int):
        self.n = n
        self.bound = bound
        super().__init__(f"unfactored cofactor {n} exceeds bound {bound}^2")


class DegreeBudgetExceeded(GenusLabError):
    def __init__(self, degree: int, bound: int):
        self.degree = degree
        self.bound = bound
        super().__init__(f"polynomial degree {degree} exceeds budget {bound}")


class PeriodBudgetExceeded(GenusLabError):
    def __init__(self, d: int, bound: int):
        self.d = d
        self.bound = bound
        super().__init__(
            f"continued fraction of the order generator for d={d} "
            f"did not close within {bound} steps"
        )


class PicNontrivial(MathObstruction):
    """The relevant restricted Picard group is not trivial."""

    def __init__(self, message: str, group=None):
        self.group = group
        super().__init__(message)


class GeneratorSearchFailed(GenusLabError):
    def __init__(self, ideal, bound):
        self.ideal = ideal
        self.bound = bound
        super().__init__(
            f"no generator of norm {ideal.norm()} found for {ideal} "
            f"within search bound {bound}"
        )


class RamifiedExtension(GenusLabError):
    """The place ramifies in the quadratic extension; no residue character."""

    def __init__(self, place, message: str = ""):
        self.place = place
        super().__init__(message or f"place {place} ramifies in the extension")


class RamifiedInput(MathObstruction):
    """The algebra is ramified somewhere on the requested place set."""

    def __init__(self, offending, message: str = ""):
        self.offending = offending
        super().__init__(message or f"ramified at {offending}")


class InvariantSumNonzero(GenusLabError):
    def __init__(self, total):
        self.total = total
        super().__init__(f"local invariants sum to {total}, not 0 in Q/Z")


class EvenResidueChar(GenusLabError):
    """Tame residue formulas need odd (or zero) residue characteristic."""


class NonUnitCoefficient(GenusLabError):
    """Symbol entry a (or b_i) is not a unit on the working place set."""


class NormSearchFailed(GenusLabError):
    def __init__(self, place, index, budget, message: str = ""):
        self.place = place
        self.index = index
        self.budget = budget
        super().__init__(
            message
            or f"no reduced-norm uniformizer found at {place} "
            f"(family index {index}, budget {budget})"
        )


class RamifiedAtPlace(MathObstruction):
    """Symbol family has a nontrivial residue at the place: no elimination."""

    def __init__(self, place, residue=None):
        self.place = place
        self.residue = residue
        super().__init__(f"nontrivial residue at {place}; family is ramified there")


class UnsupportedPlaceDegree(GenusLabError):
    def __init__(self, place):
        self.place = place
        super().__init__(f"place {place} has residue degree > 1; input refused")


class SingularComponent(GenusLabError):
    """Adele component is singular (zero determinant)."""


class NonPrincipalClass(MathObstruction):
    """Glued lattice has non-principal Steinitz class; no global decomposition."""

    def __init__(self, steinitz, message: str = ""):
        self.steinitz = steinitz
        super().__init__(message or f"non-principal Steinitz class {steinitz}")


class CoverInvalid(GenusLabError):
    """Principal-open pieces fail to cover every ring place."""

    def __init__(self, message: str, place=None):
        self.place = place
        super().__init__(message)


class CocycleInvalid(GenusLabError):
    def __init__(self, message: str, triple=None):
        self.triple = triple
        super().__init__(message)


class ConditionsFail(GenusLabError):
    """Galois ring data violates one of the descent conditions."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class CocycleConditionFails(GenusLabError):
    """xi(sigma) * sigma(xi(sigma)) != 1, so xi is not a cocycle."""


class Obstruction(MathObstruction):
    """Descent trivialization blocked by a nontrivial ideal class."""

    def __init__(self, ideal_class, message: str = ""):
        self.ideal_class = ideal_class
        super().__init__(message or f"descent obstruction: ideal class {ideal_class}")


class SplittingNotStored(GenusLabError):
    """Operation needs explicit splitting data that the input does not carry."""
