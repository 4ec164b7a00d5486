"""Cayley transform between topologically nilpotent and unipotent elements.

c(X) = (1 + X/2)(1 - X/2)^-1 with inverse g -> 2(g-1)(g+1)^-1, plus the
squared classical-group variant and an exact equivariance checker.  Square
roots of topologically unipotent elements are found by a Newton iteration
whose defect provably deepens in the filtration, with an explicit iteration
cap so failure surfaces as a precision-exhausted error rather than a hang.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from padic_lab.local_field import PrecisionError, TRIVIAL
from padic_lab.matrix_theta import (
    PadicMatrix,
    dtheta,
    is_topologically_nilpotent,
    is_topologically_unipotent,
    j_conjugate_transpose,
    theta,
)
from padic_lab.building import GroupType, GL, SP, SO_ODD, SO_EVEN, U

HALF = Fraction(1, 2)


def cayley(x: PadicMatrix) -> PadicMatrix:
    """(1 + X/2)(1 - X/2)^-1 for topologically nilpotent X."""
    if not is_topologically_nilpotent(x):
        raise ValueError("input is not topologically nilpotent")
    one = PadicMatrix.identity(x.field, x.n)
    half_x = x.scale(HALF)
    return (one + half_x) * (one - half_x).inverse()


def cayley_inv(g: PadicMatrix) -> PadicMatrix:
    """2(g - 1)(g + 1)^-1 for topologically unipotent g."""
    if not is_topologically_unipotent(g):
        raise ValueError("input is not topologically unipotent")
    one = PadicMatrix.identity(g.field, g.n)
    return (g - one).scale(2) * (g + one).inverse()


def cayley_series(x: PadicMatrix, max_terms: int | None = None) -> PadicMatrix:
    """Series oracle 1 + X + 2(X/2)^2 + 2(X/2)^3 + ...; terminates when the
    running power vanishes to precision.  Independent of the closed form."""
    field = x.field
    if max_terms is None:
        max_terms = 4 * field.precision_k * x.n + 8
    acc = PadicMatrix.identity(field, x.n) + x
    half_x = x.scale(HALF)
    power = half_x * half_x
    for _ in range(max_terms):
        if power.is_zero():
            return acc
        acc = acc + power.scale(2)
        power = power * half_x
    raise PrecisionError("series did not settle within the term cap")


def so_even_form(field, n: int) -> PadicMatrix:
    """Split symmetric form for the even orthogonal family: anti-diagonal ones."""
    rows = [[field.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = field.one()
    return PadicMatrix(field, rows)


def in_lie_algebra(x: PadicMatrix, group: GroupType) -> bool:
    """Exact membership of X in the Lie algebra of the classical group.

    Sp, odd SO and U are realized as the fixed points of the outer involution
    on their ambient general linear group (dtheta(X) = X); even SO uses the
    split symmetric form J' via X^t J' + J' X = 0.
    """
    if x.n != group.size:
        raise ValueError("matrix size does not match the group")
    if group.family == GL:
        return True
    if group.family == U and x.field.kind != group.ext:
        raise ValueError("field extension kind does not match the unitary group")
    if group.family in (SP, SO_ODD, U):
        return dtheta(x) == x
    jp = so_even_form(x.field, group.size)
    return (x.transpose() * jp + jp * x).is_zero()


def in_group(g: PadicMatrix, group: GroupType) -> bool:
    """Exact membership of g in the classical group, to working precision."""
    if g.n != group.size:
        raise ValueError("matrix size does not match the group")
    if group.family == GL:
        return True
    if group.family in (SP, SO_ODD, U):
        return theta(g) == g
    jp = so_even_form(g.field, group.size)
    return g.transpose() * jp * g == jp


def cayley_prime(x: PadicMatrix, group: GroupType) -> PadicMatrix:
    """Classical-group variant: c(X/2)^2 for Sp and odd SO, c(X)^2 otherwise."""
    if group.family == GL:
        raise ValueError("the squared variant is defined for classical groups only")
    if not in_lie_algebra(x, group):
        raise ValueError(f"input is not in the Lie algebra of {group.label()}")
    if group.family in (SP, SO_ODD):
        c = cayley(x.scale(HALF))
    else:
        c = cayley(x)
    return c * c


@dataclass(frozen=True)
class EquivarianceReport:
    ok: bool
    failures: tuple[dict, ...]

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def _diff_failures(check: str, lhs: PadicMatrix, rhs: PadicMatrix) -> list[dict]:
    out = []
    for i in range(lhs.n):
        for j in range(lhs.n):
            d = lhs.rows[i][j] - rhs.rows[i][j]
            if not d.is_zero():
                out.append({"check": check, "i": i, "j": j, "digit": d.vdig})
    return out


def verify_equivariance(a: PadicMatrix, x: PadicMatrix) -> EquivarianceReport:
    """Check Int(A) o c = c o Ad(A) and theta o c = c o dtheta, exactly.

    Failures are reported per entry with the first differing digit position;
    they are report content, not exceptions.
    """
    failures = []
    cx = cayley(x)
    a_inv = a.inverse()
    failures += _diff_failures("int-ad", a * cx * a_inv, cayley(a * x * a_inv))
    failures += _diff_failures("theta-dtheta", theta(cx), cayley(dtheta(x)))
    return EquivarianceReport(ok=not failures, failures=tuple(failures))


def unipotent_sqrt(g: PadicMatrix, max_iter: int | None = None) -> PadicMatrix:
    """The topologically unipotent square root of a topologically unipotent g.

    Newton iteration h <- (h + h^-1 g)/2 from h = 1; every iterate is a
    rational expression in g, so the defect h^2 - g squares its filtration
    depth per step.  Raises PrecisionError if the cap is hit first.
    """
    if not is_topologically_unipotent(g):
        raise ValueError("input is not topologically unipotent")
    field = g.field
    if max_iter is None:
        max_iter = 8 * field.precision_k
    h = PadicMatrix.identity(field, g.n)
    for _ in range(max_iter):
        if (h * h - g).is_zero():
            return h
        h = (h + h.inverse() * g).scale(HALF)
    raise PrecisionError("square-root iteration did not converge within the cap")
