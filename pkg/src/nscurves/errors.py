"""Exception types shared across the package.

Each stage of the pipeline raises a dedicated error so callers can tell a
genuine mathematical obstruction (a residue that refuses to vanish, a curve
with colliding branch points) from plain bad input.
"""


class NSCurveError(Exception):
    """Base class for every error raised by this package."""


# --- exact algebra ---

class NonUnitLeadingCoefficient(NSCurveError):
    """Series inversion or root extraction needs an invertible constant lead."""


class ExponentNotDivisible(NSCurveError):
    """n-th root of a series whose lowest exponent is not a multiple of n."""


class ResidueObstruction(NSCurveError):
    """Term-wise integration hit a nonzero coefficient at exponent -1."""


class TruncationTooShallow(NSCurveError):
    """A coefficient beyond the stored truncation order was requested."""


# --- curve model ---

class NotCoprime(NSCurveError):
    """Curve parameters n and s must satisfy gcd(n, s) = 1 and 2 <= n < s."""


class InvalidLambdaIndex(NSCurveError):
    """A lambda subscript outside the admissible index set for the family."""


class SymbolicLambda(NSCurveError):
    """Numeric evaluation requested on a family with symbolic coefficients."""


class RootFindingFailure(NSCurveError):
    """A polynomial root finder failed to converge or to match expectations."""


# --- expansions at infinity ---

class NewtonStall(NSCurveError):
    """Newton iteration for the branch parameterization stopped improving."""


class UnsolvableCorrection(NSCurveError):
    """The triangular system for second-kind corrections became singular."""


# --- sigma calculus ---

class OrderExceedsSupport(NSCurveError):
    """Expansion order beyond what the symbol table can express."""


class ZetaLeakage(NSCurveError):
    """A residue expansion produced first-order symbols it should not have."""


# --- divisor solver ---

class DegenerateDeterminant(NSCurveError):
    """The interpolation determinant vanished identically on the divisor."""


class DegreeCollapse(NSCurveError):
    """The degree of the x-elimination polynomial dropped below the genus."""


class NullSpaceDimensionError(NSCurveError):
    """The evaluated coefficient matrix does not have a one-dimensional kernel."""


class SpecialDivisor(NSCurveError):
    """The divisor is special; the inversion map is not injective there."""


# --- hyperelliptic numerics ---

class BranchCollision(NSCurveError):
    """Two branch points coincide within tolerance; the curve is degenerate."""


class NonSymmetricTau(NSCurveError):
    """No sign choice for the b-cycles yields a symmetric tau with Im > 0."""


class OnThetaDivisor(NSCurveError):
    """The argument lies on the theta divisor; kappa functions blow up."""


class PathThroughBranchPoint(NSCurveError):
    """An integration path could not be routed clear of the branch points."""


class SheetLoss(NSCurveError):
    """Analytic continuation of y lost track of the sheet."""
