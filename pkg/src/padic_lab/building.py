"""Apartment model of filtration lattices, affine alcove data and graded quotients.

Points live in the standard apartment of the ambient general linear group,
with rational coordinates modulo the all-ones direction.  Filtration lattices
are the monomial lattices  { X : val(X_ij) >= r - x_i + x_j }  whose exponent
matrices make every membership test an exact integer comparison of pi_E-digit
counts.  Alcove data for the classical fixed-point groups is kept in intrinsic
f-coordinates together with an exact affine embedding into the ambient
apartment, so both root tables and inclusion certificates are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from padic_lab.local_field import (
    LocalField,
    PrecisionError,
    TRIVIAL,
    UNRAMIFIED,
    RAMIFIED,
    _KIND_ALIASES,
)
from padic_lab.matrix_theta import PadicMatrix, dtheta

GL = "GL"
SP = "Sp"
SO_ODD = "SO-odd"
SO_EVEN = "SO-even"
U = "U"


class CertificateSearchError(RuntimeError):
    """No nonnegative certificate exists; this would falsify the alcove inclusion."""


@dataclass(frozen=True)
class GroupType:
    """A group family with its matrix size and defining extension kind.

    For GL the extension kind is that of the base field E0; for U it is the
    kind of the quadratic extension (unramified or ramified); the split
    families Sp and SO use the trivial kind.
    """

    family: str
    size: int
    ext: str = TRIVIAL

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.ext).lower())
        if kind is None:
            raise ValueError(f"unknown extension kind {self.ext!r}")
        object.__setattr__(self, "ext", kind)
        if self.family not in (GL, SP, SO_ODD, SO_EVEN, U):
            raise ValueError(f"unsupported family {self.family!r}")
        if self.size < 1:
            raise ValueError("size must be >= 1")
        if self.family == SP and (self.size % 2 or self.size < 2):
            raise ValueError("Sp size must be even and >= 2")
        if self.family == SO_ODD and (self.size % 2 == 0 or self.size < 3):
            raise ValueError("odd SO size must be odd and >= 3")
        if self.family == SO_EVEN and (self.size % 2 or self.size < 2):
            raise ValueError("even SO size must be even and >= 2")
        if self.family == U and self.ext not in (UNRAMIFIED, RAMIFIED):
            raise ValueError("U requires an unramified or ramified extension")
        if self.family in (SP, SO_ODD, SO_EVEN) and self.ext != TRIVIAL:
            raise ValueError(f"{self.family} is split; extension kind must be trivial")

    @property
    def rank_param(self) -> int:
        if self.family == GL or self.family == U:
            return self.size
        if self.family == SO_ODD:
            return (self.size - 1) // 2
        return self.size // 2

    @property
    def half_rank(self) -> int:
        """Number of free f-coordinates on the fixed apartment."""
        return self.size // 2

    def label(self) -> str:
        base = f"{self.family}:{self.size}"
        return base if self.ext == TRIVIAL else f"{base}/{self.ext}"

    @classmethod
    def parse(cls, text: str, ext: str = TRIVIAL) -> "GroupType":
        """Parse 'GL:3', 'Sp:4', 'SO:5', 'U:2'; SO parity picks the family."""
        try:
            fam, size_s = text.split(":")
            size = int(size_s)
        except ValueError as exc:
            raise ValueError(f"bad group spec {text!r}; expected family:size") from exc
        fam = fam.strip()
        kind = _KIND_ALIASES.get(str(ext).lower())
        if kind is None:
            raise ValueError(f"unknown extension kind {ext!r}")
        if fam == "GL":
            return cls(GL, size, kind)
        if fam == "Sp":
            return cls(SP, size)
        if fam == "SO":
            return cls(SO_ODD if size % 2 else SO_EVEN, size)
        if fam == "U":
            if kind == TRIVIAL:
                raise ValueError("U requires --ext unram or ram")
            return cls(U, size, kind)
        raise ValueError(f"unsupported family {fam!r}")


@dataclass(frozen=True)
class GroupPair:
    """One of the four ambient/fixed-point pairs, indexed by its case number."""

    case: int
    n: int
    ext: str
    g: GroupType
    h: GroupType
    g_theta: GroupType


def group_pair(case: int, n: int, ext: str | None = None) -> GroupPair:
    if case == 1:
        return GroupPair(1, n, TRIVIAL, GroupType(GL, 2 * n + 1), GroupType(SP, 2 * n), GroupType(SO_ODD, 2 * n + 1))
    if case == 2:
        return GroupPair(2, n, TRIVIAL, GroupType(GL, 2 * n), GroupType(SO_ODD, 2 * n + 1), GroupType(SP, 2 * n))
    if case == 3:
        return GroupPair(3, n, TRIVIAL, GroupType(GL, 2 * n), GroupType(SO_EVEN, 2 * n), GroupType(SP, 2 * n))
    if case == 4:
        kind = _KIND_ALIASES.get(str(ext).lower()) if ext else None
        if kind not in (UNRAMIFIED, RAMIFIED):
            raise ValueError("case 4 requires ext unram or ram")
        return GroupPair(4, n, kind, GroupType(GL, n, kind), GroupType(U, n, kind), GroupType(U, n, kind))
    raise ValueError("case must be 1..4")


@dataclass(frozen=True)
class AffineRoot:
    """Affine functional: integer gradient over a coordinate basis plus a constant."""

    gradient: tuple[int, ...]
    constant: Fraction

    def __post_init__(self):
        if not any(self.gradient):
            raise ValueError("gradient must be nonzero")
        object.__setattr__(self, "constant", Fraction(self.constant))

    def evaluate(self, coords) -> Fraction:
        return sum((Fraction(c) * g for c, g in zip(coords, self.gradient)), self.constant)

    def sort_key(self):
        return (self.gradient, self.constant)

    def to_json(self) -> dict:
        return {
            "gradient": list(self.gradient),
            "constant": [self.constant.numerator, self.constant.denominator],
        }


@dataclass(frozen=True)
class ApartmentPoint:
    """Rational coordinates in the standard apartment, modulo all-ones."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def is_theta_fixed(self) -> bool:
        c = self.coords
        n = len(c)
        s = c[0] + c[n - 1]
        return all(c[i] + c[n - 1 - i] == s for i in range(n))

    def to_json(self) -> dict:
        return {"coords": [[c.numerator, c.denominator] for c in self.coords]}


def barycenter(size: int, e: int) -> ApartmentPoint:
    """Barycenter of the ambient fundamental alcove: (0, -1/(eN), ..., -(N-1)/(eN))."""
    return ApartmentPoint([Fraction(-i, e * size) for i in range(size)])


# -- root tables --------------------------------------------------------------


def _chain(n: int) -> list[AffineRoot]:
    roots = []
    for i in range(n - 1):
        grad = [0] * n
        grad[i], grad[i + 1] = 1, -1
        roots.append(AffineRoot(tuple(grad), Fraction(0)))
    return roots


def _f_root(n: int, coeffs: dict[int, int], const) -> AffineRoot:
    grad = [0] * n
    for idx, c in coeffs.items():
        grad[idx] = c
    return AffineRoot(tuple(grad), Fraction(const))


def simple_affine_roots(group: GroupType) -> list[AffineRoot]:
    """Simple affine roots of the fundamental alcove.

    For GL the gradient is over the ambient e-basis; for the classical
    families it is over the f-basis of the fixed apartment (f_i paired with
    coordinate i and its mirror).  Lists follow the alcove wall order, which
    coincides with descending lexicographic order by (gradient, constant).
    """
    fam, size = group.family, group.size
    if fam == GL:
        if size == 1:
            return []
        roots = _chain(size)
        grad = [0] * size
        grad[size - 1], grad[0] = 1, -1
        e = 2 if group.ext == RAMIFIED else 1
        roots.append(AffineRoot(tuple(grad), Fraction(1, e)))
        return roots
    n = group.half_rank
    if fam == U and size == 1:
        return []
    if fam == SP:
        return _chain(n) + [_f_root(n, {n - 1: 2}, 0), _f_root(n, {0: -2}, 1)]
    if fam == SO_ODD:
        if n == 1:
            return [_f_root(1, {0: 1}, 0), _f_root(1, {0: -1}, 1)]
        return _chain(n) + [_f_root(n, {n - 1: 1}, 0), _f_root(n, {0: -1, 1: -1}, 1)]
    if fam == SO_EVEN:
        if n == 1:
            raise ValueError("SO(2) is a torus; no affine root data")
        return _chain(n) + [
            _f_root(n, {n - 2: 1, n - 1: 1}, 0),
            _f_root(n, {0: -1, 1: -1}, 1),
        ]
    # unitary families
    odd = size % 2 == 1
    if group.ext == UNRAMIFIED:
        last = _f_root(n, {n - 1: 1}, 0) if odd else _f_root(n, {n - 1: 2}, 0)
        return _chain(n) + [last, _f_root(n, {0: -2}, 1)]
    if odd:
        return _chain(n) + [_f_root(n, {n - 1: 1}, Fraction(1, 4)), _f_root(n, {0: -2}, 0)]
    if n == 1:
        return [_f_root(1, {0: 2}, 0), _f_root(1, {0: -2}, 1)]
    return _chain(n) + [_f_root(n, {n - 1: 2}, 0), _f_root(n, {0: -1, 1: -1}, Fraction(1, 2))]


def fixed_embedding_shift(group: GroupType) -> Fraction:
    """Offset of the intrinsic f-origin inside the ambient apartment.

    Zero except for ramified odd unitary groups, whose special points sit at
    quarter-period positions of the ambient wall pattern; there the embedding
    is x_i = f_i/2 + 1/8 on the first half of the coordinates.
    """
    if group.family == U and group.ext == RAMIFIED and group.size % 2 == 1:
        return Fraction(1, 8)
    return Fraction(0)


def theta_fixed_point(group: GroupType, fcoords) -> ApartmentPoint:
    """Embed intrinsic f-coordinates as an ambient theta-fixed point."""
    n = group.half_rank
    size = group.size
    fcoords = [Fraction(c) for c in fcoords]
    if len(fcoords) != n:
        raise ValueError(f"expected {n} coordinates")
    delta = fixed_embedding_shift(group)
    first = [c / 2 + delta for c in fcoords]
    middle = [Fraction(0)] if size % 2 else []
    return ApartmentPoint(first + middle + [-c for c in reversed(first)])


def ambient_simple_roots(group: GroupType) -> list[AffineRoot]:
    """Simple affine roots as functionals on ambient apartment coordinates."""
    if group.family == GL:
        return simple_affine_roots(group)
    size = group.size
    delta = fixed_embedding_shift(group)
    out = []
    for root in simple_affine_roots(group):
        grad = [0] * size
        for j, c in enumerate(root.gradient):
            grad[j] += c
            grad[size - 1 - j] -= c
        const = root.constant - 2 * delta * sum(root.gradient)
        out.append(AffineRoot(tuple(grad), const))
    return out


def restrict_to_fixed(root: AffineRoot, group: GroupType) -> tuple[tuple[Fraction, ...], Fraction]:
    """Pull an ambient affine functional back through the fixed embedding.

    Returns (gradient over f-coordinates, constant); gradients may be
    half-integers.
    """
    size = group.size
    n = group.half_rank
    if len(root.gradient) != size:
        raise ValueError("ambient root has wrong dimension")
    delta = fixed_embedding_shift(group)
    grad_f = tuple(
        Fraction(root.gradient[j] - root.gradient[size - 1 - j], 2) for j in range(n)
    )
    shift_sum = sum(root.gradient[j] - root.gradient[size - 1 - j] for j in range(n))
    const = root.constant + delta * shift_sum
    return grad_f, const


def alcove_contains(x: ApartmentPoint, group: GroupType) -> bool:
    """True iff every simple affine root of the group is strictly positive at x."""
    roots = ambient_simple_roots(group)
    if not roots:
        raise ValueError("group has no affine root data")
    if x.n != group.size:
        raise ValueError("coordinate count does not match the group size")
    return all(r.evaluate(x.coords) > 0 for r in roots)


# -- inclusion certificates -----------------------------------------------------


@dataclass(frozen=True)
class CertificateLine:
    """One ambient simple root expressed over the fixed-point alcove walls.

    restricted = sum(coeffs[j] * wall_j) + slack, with all coefficients and
    the slack nonnegative.
    """

    root: AffineRoot
    restricted_gradient: tuple[Fraction, ...]
    restricted_constant: Fraction
    coeffs: tuple[Fraction, ...]
    slack: Fraction


@dataclass(frozen=True)
class InclusionCertificate:
    pair: GroupPair
    walls: tuple[AffineRoot, ...]
    lines: tuple[CertificateLine, ...]

    def validate(self) -> bool:
        """Exact recheck: identities hold and all coefficients are nonnegative."""
        for line in self.lines:
            if any(c < 0 for c in line.coeffs) or line.slack < 0:
                return False
            n = len(line.restricted_gradient)
            for k in range(n):
                total = sum(c * w.gradient[k] for c, w in zip(line.coeffs, self.walls))
                if total != line.restricted_gradient[k]:
                    return False
            const = sum(c * w.constant for c, w in zip(line.coeffs, self.walls)) + line.slack
            if const != line.restricted_constant:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "case": self.pair.case,
            "rank": self.pair.n,
            "ext": self.pair.ext,
            "walls": [w.to_json() for w in self.walls],
            "lines": [
                {
                    "root": line.root.to_json(),
                    "coeffs": [[c.numerator, c.denominator] for c in line.coeffs],
                    "slack": [line.slack.numerator, line.slack.denominator],
                }
                for line in self.lines
            ],
        }


def _solve_nonneg_combination(walls, grad_f, const_f):
    """Exact nonnegative solution of sum(l_j * wall_j) + slack = target.

    The wall gradients span the f-space with a kernel of dimension at most
    one, so feasibility reduces to intersecting rational intervals along the
    kernel line.  Returns (coeffs, slack) or None.
    """
    m = len(walls)
    n = len(grad_f)
    rows = [[Fraction(w.gradient[k]) for w in walls] + [Fraction(grad_f[k])] for k in range(n)]
    # rational Gaussian elimination on the n x (m+1) system
    pivots = []
    r = 0
    for c in range(m):
        pivot = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if rows[i][m] != 0:
            return None  # target gradient outside the wall span
    free = [c for c in range(m) if c not in pivots]
    particular = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        particular[c] = rows[i][m]
    if len(free) > 1:
        raise CertificateSearchError("unexpected kernel dimension in wall system")
    if not free:
        coeffs = particular
        slack = const_f - sum(c * w.constant for c, w in zip(coeffs, walls))
        if all(c >= 0 for c in coeffs) and slack >= 0:
            return tuple(coeffs), slack
        return None
    k = free[0]
    direction = [Fraction(0)] * m
    direction[k] = Fraction(1)
    for i, c in enumerate(pivots):
        direction[c] = -rows[i][k]
    # lambda(t) = particular + t*direction >= 0 and slack(t) >= 0
    lo, hi = None, None

    def tighten(coef, bound):
        # coef*t + bound >= 0
        nonlocal lo, hi
        if coef == 0:
            return bound >= 0
        t_edge = -bound / coef
        if coef > 0:
            if lo is None or t_edge > lo:
                lo = t_edge
        else:
            if hi is None or t_edge < hi:
                hi = t_edge
        return True

    for j in range(m):
        if not tighten(direction[j], particular[j]):
            return None
    slack0 = const_f - sum(c * w.constant for c, w in zip(particular, walls))
    slack_dir = -sum(d * w.constant for d, w in zip(direction, walls))
    if not tighten(slack_dir, slack0):
        return None
    if lo is not None and hi is not None and lo > hi:
        return None
    t = lo if lo is not None else (hi if hi is not None else Fraction(0))
    coeffs = tuple(p + t * d for p, d in zip(particular, direction))
    return coeffs, slack0 + t * slack_dir


def inclusion_certificate(pair: GroupPair) -> InclusionCertificate:
    """Certificate that the fixed-point fundamental alcove sits inside the ambient one.

    Every ambient simple root, restricted through the fixed embedding, is
    expressed as a nonnegative rational combination of the fixed-point alcove
    walls plus a nonnegative constant.  Search failure would falsify the
    inclusion and raises CertificateSearchError.
    """
    g_theta = pair.g_theta
    walls = tuple(simple_affine_roots(g_theta))
    lines = []
    for root in ambient_simple_roots(pair.g):
        grad_f, const_f = restrict_to_fixed(root, g_theta)
        sol = _solve_nonneg_combination(walls, grad_f, const_f)
        if sol is None:
            raise CertificateSearchError(
                f"no certificate for {root} over {g_theta.label()} walls"
            )
        coeffs, slack = sol
        lines.append(
            CertificateLine(
                root=root,
                restricted_gradient=grad_f,
                restricted_constant=const_f,
                coeffs=coeffs,
                slack=slack,
            )
        )
    return InclusionCertificate(pair=pair, walls=walls, lines=tuple(lines))


# -- filtration lattices ----------------------------------------------------------


def lattice_exponents(x: ApartmentPoint, r, e: int) -> list[list[int]]:
    """Exponent matrix in pi_E-digit units: entry (i,j) is ceil(e*(r - x_i + x_j))."""
    r = Fraction(r)
    c = x.coords
    return [[math.ceil(e * (r - xi + xj)) for xj in c] for xi in c]


def min_plus_product(a, b) -> list[list[int]]:
    n = len(a)
    return [
        [min(a[i][k] + b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def min_plus_power(a, k: int) -> list[list[int]]:
    out = a
    for _ in range(k - 1):
        out = min_plus_product(out, a)
    return out


def matrix_in_lattice(m: PadicMatrix, exponents) -> bool:
    """Exact membership against a digit-exponent matrix; PrecisionError if unresolved."""
    for i in range(m.n):
        for j in range(m.n):
            entry = m.rows[i][j]
            need = exponents[i][j]
            if entry.vdig is None:
                if entry.prec >= need:
                    continue
                raise PrecisionError(
                    f"entry ({i},{j}) zero to depth {entry.prec} but threshold is {need}"
                )
            if entry.vdig < need:
                return False
    return True


def mp_membership(m: PadicMatrix, x: ApartmentPoint, r) -> bool:
    """X in the depth-r lattice at x: val(X_ij) >= r - x_i + x_j for all i, j."""
    if m.n != x.n:
        raise ValueError("matrix size does not match the apartment point")
    return matrix_in_lattice(m, lattice_exponents(x, r, m.field.e))

def mp_theta_membership(m: PadicMatrix, x: ApartmentPoint, r) -> bool:
    """Membership in the fixed-point filtration: lattice membership and dtheta(X) = X."""
    if not x.is_theta_fixed():
        raise ValueError("point is not theta-fixed")
    return mp_membership(m, x, r) and dtheta(m) == m


def next_jump(x: ApartmentPoint, r, e: int) -> Fraction:
    """Smallest filtration level strictly above r where some entry jumps."""
    r = Fraction(r)
    best = None
    for xi in x.coords:
        for xj in x.coords:
            base = xi - xj
            step = Fraction(math.floor(e * (r - base)) + 1, e) + base
            if best is None or step < best:
                best = step
    return best


def jump_positions(x: ApartmentPoint, r, e: int) -> list[tuple[int, int]]:
    """Matrix positions whose filtration jump lands exactly at level r."""
    r = Fraction(r)
    c = x.coords
    out = []
    for i in range(len(c)):
        for j in range(len(c)):
            t = e * (r - c[i] + c[j])
            if t.denominator == 1:
                out.append((i, j))
    return out


# -- graded quotients --------------------------------------------------------------


@dataclass(frozen=True)
class GradedSpace:
    """The finite quotient of consecutive filtration lattices at (x, r).

    A vector space over the residue field, one digit per jump position;
    flattened to F_p coordinates (two per position when the residue field is
    quadratic).
    """

    field: LocalField
    x: ApartmentPoint
    r: Fraction
    positions: tuple[tuple[int, int], ...]

    @property
    def deg(self) -> int:
        return 2 if self.field.kind == UNRAMIFIED else 1

    @property
    def fp_dim(self) -> int:
        return self.deg * len(self.positions)

    def size(self) -> int:
        return self.field.p**self.fp_dim

    def zero(self) -> "GradedQuotientElement":
        return GradedQuotientElement(self, (0,) * self.fp_dim)

    def threshold_digits(self, i: int, j: int) -> int:
        t = self.field.e * (self.r - self.x.coords[i] + self.x.coords[j])
        assert t.denominator == 1
        return int(t)


def graded_space(field: LocalField, x: ApartmentPoint, r) -> GradedSpace:
    return GradedSpace(
        field=field,
        x=x,
        r=Fraction(r),
        positions=tuple(jump_positions(x, r, field.e)),
    )


@dataclass(frozen=True)
class GradedQuotientElement:
    """Class in the graded quotient, as an F_p vector over the jump positions."""

    space: GradedSpace
    vec: tuple[int, ...]

    def __post_init__(self):
        p = self.space.field.p
        if len(self.vec) != self.space.fp_dim:
            raise ValueError("vector length does not match the graded dimension")
        object.__setattr__(self, "vec", tuple(v % p for v in self.vec))

    def __add__(self, other: "GradedQuotientElement") -> "GradedQuotientElement":
        if other.space != self.space:
            raise ValueError("elements of different graded spaces")
        p = self.space.field.p
        return GradedQuotientElement(self.space, tuple((a + b) % p for a, b in zip(self.vec, other.vec)))

    def __neg__(self) -> "GradedQuotientElement":
        p = self.space.field.p
        return GradedQuotientElement(self.space, tuple((-a) % p for a in self.vec))

    def __sub__(self, other: "GradedQuotientElement") -> "GradedQuotientElement":
        return self + (-other)

    def scale(self, c: int) -> "GradedQuotientElement":
        p = self.space.field.p
        return GradedQuotientElement(self.space, tuple((c * a) % p for a in self.vec))

    def is_zero(self) -> bool:
        return not any(self.vec)

    def lift(self) -> PadicMatrix:
        """Exact matrix representative with one tracked digit per position."""
        sp = self.space
        field = sp.field
        n = sp.x.n
        rows = [[field.zero() for _ in range(n)] for _ in range(n)]
        pi = field.pi_E()
        for idx, (i, j) in enumerate(sp.positions):
            if sp.deg == 2:
                a, b = self.vec[2 * idx], self.vec[2 * idx + 1]
                unit = field.adjoin(a, b)
            else:
                unit = field.scalar(self.vec[idx])
            rows[i][j] = rows[i][j] + unit * pi ** sp.threshold_digits(i, j)
        return PadicMatrix(field, rows)

    def to_json(self) -> dict:
        return {
            "r": [self.space.r.numerator, self.space.r.denominator],
            "positions": [list(pos) for pos in self.space.positions],
            "vec": list(self.vec),
        }


def project_to_graded(space: GradedSpace, m: PadicMatrix) -> GradedQuotientElement:
    """Leading-digit class of a lattice element; requires membership at level r."""
    if not mp_membership(m, space.x, space.r):
        raise ValueError("matrix is not in the level-r lattice")
    vec = []
    for i, j in space.positions:
        d = m.rows[i][j].digit(space.threshold_digits(i, j))
        if space.deg == 2:
            vec.extend(d)
        else:
            vec.append(d)
    return GradedQuotientElement(space, tuple(vec))


def theta_star(elem: GradedQuotientElement) -> GradedQuotientElement:
    """Involution induced on the graded quotient; requires a theta-fixed point."""
    return project_to_graded(elem.space, dtheta(elem.lift()))


def theta_star_matrix(space: GradedSpace) -> list[list[int]]:
    """Matrix of theta_star on F_p coordinates (columns are basis images)."""
    d = space.fp_dim
    cols = []
    for k in range(d):
        basis = GradedQuotientElement(space, tuple(1 if t == k else 0 for t in range(d)))
        cols.append(theta_star(basis).vec)
    return [[cols[k][row] for k in range(d)] for row in range(d)]


def enumerate_quotient(space: GradedSpace, cap: int = 20000) -> list[GradedQuotientElement]:
    """All classes of the graded quotient, in deterministic digit order."""
    if space.size() > cap:
        raise ValueError(f"enumeration size {space.size()} exceeds cap {cap}")
    p = space.field.p
    out = []
    vec = [0] * space.fp_dim
    total = space.size()
    for _ in range(total):
        out.append(GradedQuotientElement(space, tuple(vec)))
        for pos in range(space.fp_dim - 1, -1, -1):
            vec[pos] += 1
            if vec[pos] < p:
                break
            vec[pos] = 0
    return out


def theta_fixed_graded_dim(space: GradedSpace) -> int:
    """F_p-dimension of the theta-fixed part, counted combinatorially.

    Positions pair (i,j) <-> (n-1-j, n-1-i).  Off-pair orbits contribute one
    residue-field worth of fixed vectors; self-paired anti-diagonal positions
    contribute the fixed line of the induced (possibly semilinear) involution
    on the residue field, whose dimension depends only on the sign and, for
    ramified E, the parity of the digit exponent.
    """
    field = space.field
    n = space.x.n
    seen = set()
    dim = 0
    pos_set = set(space.positions)
    for (i, j) in space.positions:
        if (i, j) in seen:
            continue
        mi, mj = n - 1 - j, n - 1 - i
        if (mi, mj) not in pos_set:
            raise ValueError("graded space is not theta-stable; point not fixed?")
        if (mi, mj) == (i, j):
            seen.add((i, j))
            sign = 1 if n % 2 == 0 else -1
            if field.kind == UNRAMIFIED:
                dim += 1  # fixed line of a semilinear involution on F_{p^2}
            elif field.kind == RAMIFIED:
                eps = sign * (-1 if space.threshold_digits(i, j) % 2 else 1)
                dim += 1 if eps == 1 else 0
            else:
                dim += 1 if sign == 1 else 0
        else:
            seen.add((i, j))
            seen.add((mi, mj))
            dim += space.deg
    return dim


# -- small F_p linear algebra -------------------------------------------------------


def fp_rank(matrix: list[list[int]], p: int) -> int:
    rows = [list(r) for r in matrix]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(n_rows):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def fp_solve(matrix: list[list[int]], target: list[int], p: int):
    """One solution of matrix * v = target over F_p (columns are unknowns), or None."""
    n_rows = len(matrix)
    n_cols = len(matrix[0]) if matrix else 0
    aug = [list(matrix[i]) + [target[i] % p] for i in range(n_rows)]
    pivots = []
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if aug[i][col] % p), None)
        if pivot is None:
            continue
        aug[rank], aug[pivot] = aug[pivot], aug[rank]
        inv = pow(aug[rank][col], -1, p)
        aug[rank] = [(x * inv) % p for x in aug[rank]]
        for i in range(n_rows):
            if i != rank and aug[i][col] % p:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, n_rows):
        if aug[i][n_cols] % p:
            return None
    sol = [0] * n_cols
    for i, col in enumerate(pivots):
        sol[col] = aug[i][n_cols]
    return sol


# -- Iwahori data ----------------------------------------------------------------


def phi_matrix(field: LocalField, n: int) -> PadicMatrix:
    """Cyclic shift with the uniformizer in the corner; phi^(eN) = pi_F * 1."""
    rows = [[field.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = field.one()
    rows[n - 1][0] = field.pi_E()
    return PadicMatrix(field, rows)


def shifted_lattice_exponents(exponents, shift_rows: int = 1) -> list[list[int]]:
    """Exponent matrix of phi^shift_rows times a monomial lattice."""
    n = len(exponents)
    out = []
    for i in range(n):
        src = (i + shift_rows) % n
        wraps = (i + shift_rows) // n
        out.append([exponents[src][j] + wraps for j in range(n)])
    return out
