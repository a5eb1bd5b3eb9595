"""Divisors on a family and the two constructive directions of inversion.

Forward: a non-special degree-g divisor determines entire rational
functions vanishing on it, one per pole weight 2g..2g+count-1, through an
interpolation determinant.  Backward: the coefficient grid of those
functions determines the divisor again, by eliminating y into a degree-g
polynomial in x and reading y off the null space of the evaluated grid.
"""
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .abelian import AbelianSymbol, InversionSystem
from .curves import CurveFamily, CurvePoint
from .errors import (
    DegenerateDeterminant,
    DegreeCollapse,
    NullSpaceDimensionError,
    RootFindingFailure,
    SpecialDivisor,
)

CLUSTER_TOL = 1e-7
COLLAPSE_TOL = 1e-10


def _function_count(fam: CurveFamily) -> int:
    return 2 if fam.n == 2 else fam.n - 1


def _poly_at(coeffs: np.ndarray, x: complex) -> complex:
    if len(coeffs) == 0:
        return 0j
    return complex(npoly.polyval(x, coeffs))


# -- divisors ----------------------------------------------------------------


@dataclass(frozen=True)
class Divisor:
    """A degree-g tuple of curve points with its diagnostics precomputed."""

    points: tuple[CurvePoint, ...]
    special: bool
    max_residual: float

    def __len__(self) -> int:
        return len(self.points)


def _fiber_matches(fam: CurveFamily, group: list[CurvePoint], tol: float) -> bool:
    # does the group's y multiset exhaust a whole fiber over its x?
    x = sum(p.x for p in group) / len(group)
    fiber = [p.y for p in fam.lift_x_to_points(x)]
    left = [p.y for p in group]
    for y in fiber:
        scale = max(1.0, abs(y))
        hit = next((i for i, c in enumerate(left) if abs(c - y) <= tol * scale), None)
        if hit is None:
            return False
        left.pop(hit)
    return True


def _analyze_points(
    fam: CurveFamily, points: Sequence[CurvePoint], tol: float
) -> tuple[bool, float]:
    worst = 0.0
    for p in points:
        scale = max(1.0, abs(p.x)) ** fam.s + max(1.0, abs(p.y)) ** fam.n
        worst = max(worst, abs(fam.eval_f(p.x, p.y)) / scale)
    groups: list[list[CurvePoint]] = []
    for p in sorted(points, key=lambda q: (q.x.real, q.x.imag)):
        for group in groups:
            if abs(p.x - group[0].x) <= tol * max(1.0, abs(group[0].x)):
                group.append(p)
                break
        else:
            groups.append([p])
    special = any(
        len(g) >= fam.n and _fiber_matches(fam, g, 1e-6) for g in groups
    )
    return special, worst


def make_divisor(
    fam: CurveFamily, points: Sequence[CurvePoint], tol: float = 1e-8
) -> Divisor:
    """Validate the points against the curve and flag special positions."""
    pts = tuple(CurvePoint(complex(p.x), complex(p.y)) for p in points)
    special, worst = _analyze_points(fam, pts, tol)
    if worst > tol:
        raise ValueError(f"point residual {worst:.3e} exceeds tol {tol:.1e}")
    return Divisor(pts, special, worst)


def sample_point(
    fam: CurveFamily, rng: np.random.Generator, scale: float = 1.0
) -> CurvePoint:
    x = complex(rng.normal(scale=scale), rng.normal(scale=scale))
    fiber = fam.lift_x_to_points(x)
    return fiber[int(rng.integers(len(fiber)))]


def random_divisor(
    fam: CurveFamily, rng: np.random.Generator, scale: float = 1.0
) -> Divisor:
    """A generic non-special divisor; redraws on the measure-zero failures."""
    for _ in range(64):
        pts = [sample_point(fam, rng, scale) for _ in range(fam.genus)]
        special, worst = _analyze_points(fam, pts, CLUSTER_TOL)
        if not special and worst <= 1e-8:
            return Divisor(tuple(pts), False, worst)
    raise RootFindingFailure("could not sample a non-special divisor")


def divisor_payload(divisor: Divisor) -> list[list[float]]:
    return [
        [p.x.real, p.x.imag, p.y.real, p.y.imag] for p in divisor.points
    ]


def divisor_from_payload(
    fam: CurveFamily, data: Sequence[Sequence[float]], tol: float = 1e-8
) -> Divisor:
    points = [
        CurvePoint(complex(xr, xi), complex(yr, yi)) for xr, xi, yr, yi in data
    ]
    return make_divisor(fam, points, tol)


# -- numeric coefficient grids -----------------------------------------------


@dataclass
class NumericRSystem:
    """Coefficient grid rho[l][j](x) of the functions R_{2g+l}.

    Row l is the weight-(2g+l) function, column j the polynomial multiplying
    y^j, stored as ascending complex coefficient arrays.  Degrees obey
    deg rho[l][j] <= (2g + l - j s) / n, which caps det at degree g.
    """

    fam: CurveFamily
    rho: list[list[np.ndarray]]

    def __post_init__(self):
        count = _function_count(self.fam)
        assert len(self.rho) == count
        bound = 2 * self.fam.genus
        for l, row in enumerate(self.rho):
            assert len(row) == count
            for j, coeffs in enumerate(row):
                limit = (bound + l - j * self.fam.s) // self.fam.n
                assert len(coeffs) - 1 <= max(limit, -1), (l, j)

    def eval_grid(self, x: complex) -> np.ndarray:
        return np.array(
            [[_poly_at(c, x) for c in row] for row in self.rho], dtype=complex
        )

    def residual_at(self, p: CurvePoint) -> float:
        """Largest relative value of any row function at the point."""
        worst = 0.0
        for row in self.rho:
            total = sum(
                _poly_at(c, p.x) * p.y ** j for j, c in enumerate(row)
            )
            scale = sum(
                max(abs(c).max(initial=0.0), 0.0)
                * max(1.0, abs(p.x)) ** max(len(c) - 1, 0)
                * max(1.0, abs(p.y)) ** j
                for j, c in enumerate(row)
            )
            worst = max(worst, abs(total) / max(scale, 1e-300))
        return worst


def _trimmed(coeffs: np.ndarray, floor: float) -> np.ndarray:
    keep = len(coeffs)
    while keep and abs(coeffs[keep - 1]) <= floor:
        keep -= 1
    return np.asarray(coeffs[:keep], dtype=complex)


def rfunctions_from_divisor(
    fam: CurveFamily,
    divisor: Divisor,
    extra: Sequence[CurvePoint] = (),
    seed: int = 0,
) -> NumericRSystem:
    """Interpolation determinants through the divisor, row by row.

    Function l vanishes on the divisor plus l auxiliary points; auxiliary
    points beyond those supplied come from a seeded generator so repeated
    runs agree.
    """
    g = fam.genus
    if len(divisor) != g:
        raise ValueError(f"need a degree-{g} divisor, got {len(divisor)} points")
    if divisor.special:
        raise SpecialDivisor("divisor contains a full fiber over one x")
    count = _function_count(fam)
    extras = list(extra)
    if len(extras) > count - 1:
        raise ValueError(f"at most {count - 1} auxiliary points are used")
    rng = np.random.default_rng(seed)
    while len(extras) < count - 1:
        extras.append(sample_point(fam, rng))
    rho: list[list[np.ndarray]] = []
    for l in range(count):
        pts = list(divisor.points) + extras[:l]
        monos = fam.monomial_basis(g + l + 1)
        matrix = np.array(
            [[m.eval(p.x, p.y) for m in monos] for p in pts], dtype=complex
        )
        sv = np.linalg.svd(matrix, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise DegenerateDeterminant(
                f"weight-{2 * g + l} interpolation matrix is rank deficient"
            )
        coeffs = np.array(
            [
                (-1) ** k * np.linalg.det(np.delete(matrix, k, axis=1))
                for k in range(g + l + 1)
            ]
        )
        coeffs /= np.max(np.abs(coeffs))
        row = [np.zeros(0, dtype=complex) for _ in range(count)]
        for mono, c in zip(monos, coeffs):
            arr = row[mono.j]
            if len(arr) <= mono.i:
                grown = np.zeros(mono.i + 1, dtype=complex)
                grown[: len(arr)] = arr
                row[mono.j] = arr = grown
            arr[mono.i] += c
        rho.append([_trimmed(arr, 0.0) for arr in row])
    return NumericRSystem(fam, rho)


def numeric_system(
    system: InversionSystem, symbol_values: Mapping[AbelianSymbol, complex]
) -> NumericRSystem:
    """Evaluate a derived symbolic system at given zeta/wp values."""
    fam = system.fam
    lam = fam.numeric_lambda()
    count = _function_count(fam)
    rho = [
        [np.zeros(0, dtype=complex) for _ in range(count)] for _ in range(count)
    ]
    for fn in system.r_functions:
        row = rho[fn.level - 1]
        for mono, coeff in fn.terms.items():
            value = coeff.eval_numeric(symbol_values, lam)
            arr = row[mono.j]
            if len(arr) <= mono.i:
                grown = np.zeros(mono.i + 1, dtype=complex)
                grown[: len(arr)] = arr
                row[mono.j] = arr = grown
            arr[mono.i] += value
    rho = [[_trimmed(arr, 0.0) for arr in row] for row in rho]
    return NumericRSystem(fam, rho)


# -- elimination and recovery ------------------------------------------------


def _poly_det(grid: list[list[np.ndarray]]) -> np.ndarray:
    size = len(grid)
    if size == 1:
        return grid[0][0]
    total = np.zeros(1, dtype=complex)
    for j in range(size):
        entry = grid[0][j]
        if len(entry) == 0:
            continue
        minor = _poly_det([row[:j] + row[j + 1 :] for row in grid[1:]])
        if len(minor) == 0:
            continue
        term = np.convolve(entry, minor) * (-1) ** j
        if len(term) > len(total):
            term[: len(total)] += total
            total = term
        else:
            total[: len(term)] += term
    return total


def chi_polynomial(sys: NumericRSystem) -> np.ndarray:
    """det of the y-coefficient grid: degree exactly g, ascending coeffs.

    For n = 2 the grid's only y-free function already is the determinant.
    """
    fam = sys.fam
    g = fam.genus
    if fam.n == 2:
        det = sys.rho[0][0]
    else:
        det = _poly_det(sys.rho)
    chi = np.zeros(g + 1, dtype=complex)
    chi[: len(det)] = det[: g + 1]
    assert len(det) <= g + 1 or np.max(np.abs(det[g + 1 :])) <= 1e-9 * np.max(
        np.abs(det)
    )
    scale = np.max(np.abs(chi))
    if scale == 0.0 or abs(chi[g]) <= COLLAPSE_TOL * scale:
        raise DegreeCollapse(
            f"leading coefficient {abs(chi[g]):.3e} below {COLLAPSE_TOL:.0e} "
            "of the coefficient scale; divisor is special or nearly so"
        )
    return chi


def _clustered_roots(
    roots: np.ndarray, tol: float
) -> list[tuple[complex, int]]:
    clusters: list[list[complex]] = []
    for r in sorted(roots, key=lambda z: (z.real, z.imag)):
        for members in clusters:
            center = sum(members) / len(members)
            if abs(r - center) <= tol * max(1.0, abs(center)):
                members.append(r)
                break
        else:
            clusters.append([r])
    return [
        (complex(sum(m) / len(m)), len(m)) for m in clusters
    ]


def _fiber_best_y(
    sys: NumericRSystem, x: complex, mu: int
) -> list[complex]:
    # multiplicity > 1: rank the fiber candidates by grid residual
    grid = sys.eval_grid(x)
    scored = []
    for p in sys.fam.lift_x_to_points(x):
        yvec = np.array(
            [p.y ** j for j in range(grid.shape[1])], dtype=complex
        )
        scored.append((float(np.linalg.norm(grid @ yvec)), p.y))
    scored.sort(key=lambda t: t[0])
    return [y for _, y in scored[:mu]]


def solve_divisor(sys: NumericRSystem, cluster_tol: float = CLUSTER_TOL) -> Divisor:
    """Roots of det plus null-space y-recovery; the backward direction."""
    fam = sys.fam
    chi = chi_polynomial(sys)
    if not np.all(np.isfinite(chi)):
        raise RootFindingFailure("coefficient grid contains non-finite entries")
    roots = np.roots(chi[::-1] / chi[-1])
    if not np.all(np.isfinite(roots)):
        raise RootFindingFailure("companion eigenvalues failed to converge")
    points: list[CurvePoint] = []
    for x, mu in _clustered_roots(roots, cluster_tol):
        if fam.n == 2:
            rho0, rho1 = sys.rho[1]
            denom = _poly_at(rho1, x)
            if abs(denom) <= 1e-12:
                raise NullSpaceDimensionError(
                    f"y-row degenerate over x={x:.6g}"
                )
            points.extend(
                [CurvePoint(x, -_poly_at(rho0, x) / denom)] * mu
            )
            continue
        grid = sys.eval_grid(x)
        sv = np.linalg.svd(grid, compute_uv=False)
        null_dim = int(np.sum(sv <= 1e-8 * max(sv[0], 1.0)))
        if null_dim != mu:
            raise NullSpaceDimensionError(
                f"kernel dimension {null_dim} != multiplicity {mu} over x={x:.6g}"
            )
        if mu == 1:
            kernel = np.linalg.svd(grid)[2][-1].conj()
            if abs(kernel[0]) <= 1e-10 * np.linalg.norm(kernel):
                raise NullSpaceDimensionError(
                    f"kernel vector has no constant part over x={x:.6g}"
                )
            points.append(CurvePoint(x, complex(kernel[1] / kernel[0])))
        else:
            points.extend(CurvePoint(x, y) for y in _fiber_best_y(sys, x, mu))
    special, worst = _analyze_points(fam, points, cluster_tol)
    return Divisor(tuple(points), special, worst)
