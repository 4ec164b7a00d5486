"""Matrix algebra over truncated p-adic scalars and the outer involution.

The involution is theta(g) = J * conj(g)^t^-1 * J^-1 with J the anti-diagonal
sign matrix; its differential is dtheta(X) = -J * conj(X)^t * J^-1.  Newton
polygons of characteristic polynomials decide topological nilpotence and
unipotence exactly, with an explicit precision-exhausted outcome whenever the
tracked digits cannot resolve a slope sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from padic_lab.local_field import LocalField, PadicScalar, PrecisionError


class PadicMatrix:
    """Square matrix over a LocalField; immutable rows of PadicScalar."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: LocalField, rows):
        self.field = field
        self.rows = tuple(tuple(field.scalar(x) for x in row) for row in rows)
        self.n = len(self.rows)
        for row in self.rows:
            if len(row) != self.n:
                raise ValueError("matrix must be square")

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, field: LocalField, n: int) -> "PadicMatrix":
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: LocalField, n: int) -> "PadicMatrix":
        zero = field.zero()
        return cls(field, [[zero] * n for _ in range(n)])

    @classmethod
    def diagonal(cls, field: LocalField, entries) -> "PadicMatrix":
        entries = [field.scalar(x) for x in entries]
        n = len(entries)
        zero = field.zero()
        return cls(field, [[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    # -- basic algebra -------------------------------------------------------

    def entry(self, i: int, j: int) -> PadicScalar:
        return self.rows[i][j]

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        return PadicMatrix(
            self.field,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        return PadicMatrix(
            self.field,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def __neg__(self) -> "PadicMatrix":
        return PadicMatrix(self.field, [[-a for a in row] for row in self.rows])

    def __mul__(self, other: "PadicMatrix") -> "PadicMatrix":
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = row[0] * col[0]
                for k in range(1, n):
                    acc = acc + row[k] * col[k]
                new_row.append(acc)
            out.append(new_row)
        return PadicMatrix(self.field, out)

    def scale(self, c) -> "PadicMatrix":
        c = self.field.scalar(c)
        return PadicMatrix(self.field, [[a * c for a in row] for row in self.rows])

    def __pow__(self, k: int) -> "PadicMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        out = PadicMatrix.identity(self.field, self.n)
        for _ in range(k):
            out = out * self
        return out

    def transpose(self) -> "PadicMatrix":
        return PadicMatrix(self.field, list(zip(*self.rows)))

    def conj(self) -> "PadicMatrix":
        return PadicMatrix(self.field, [[a.conj() for a in row] for row in self.rows])

    def trace(self) -> PadicScalar:
        acc = self.rows[0][0]
        for i in range(1, self.n):
            acc = acc + self.rows[i][i]
        return acc

    def __eq__(self, other):
        if not isinstance(other, PadicMatrix):
            return NotImplemented
        return all(
            (a - b).is_zero() for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def min_val_lower_bound(self) -> Fraction:
        return min(a.val_lower_bound() for row in self.rows for a in row)

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.rows for a in row)

    # -- elimination ------------------------------------------------------------

    def inverse(self) -> "PadicMatrix":
        """Exact Gauss-Jordan inverse with valuation-minimizing pivoting.

        Raises PrecisionError when the matrix is singular to working precision.
        """
        n = self.n
        field = self.field
        aug = [list(self.rows[i]) + list(PadicMatrix.identity(field, n).rows[i]) for i in range(n)]
        for col in range(n):
            pivot_row = None
            pivot_val = None
            for r in range(col, n):
                cand = aug[r][col]
                if cand.is_zero():
                    continue
                v = cand.valuation()
                if pivot_val is None or v < pivot_val:
                    pivot_row, pivot_val = r, v
            if pivot_row is None:
                raise PrecisionError("matrix is singular to working precision")
            aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
            inv_piv = aug[col][col].inv()
            aug[col] = [x * inv_piv for x in aug[col]]
            for r in range(n):
                if r == col:
                    continue
                factor = aug[r][col]
                if factor.is_zero():
                    continue
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
        return PadicMatrix(field, [row[n:] for row in aug])

    def det(self) -> PadicScalar:
        coeffs = charpoly(self)
        c_n = coeffs[-1]
        return c_n if self.n % 2 == 0 else -c_n

    def is_invertible(self) -> bool:
        """True when the determinant has a resolved nonzero leading digit."""
        return not self.det().is_zero()

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[a.to_json() for a in row] for row in self.rows]}

    def __repr__(self):
        return f"PadicMatrix(n={self.n}, p={self.field.p}, kind={self.field.kind})"


@dataclass(frozen=True)
class TwistedElement:
    """Element g x theta of the twisted space; holds the body g."""

    body: PadicMatrix

    def to_json(self) -> dict:
        return {"twisted": True, "body": self.body.to_json()}


def j_matrix(field: LocalField, n: int) -> PadicMatrix:
    """Anti-diagonal matrix with (i, n+1-i) entry (-1)^(i-1), 1-indexed."""
    if n < 1:
        raise ValueError("size must be >= 1")
    zero = field.zero()
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = field.scalar((-1) ** i)
    return PadicMatrix(field, rows)


def j_conjugate_transpose(m: PadicMatrix) -> PadicMatrix:
    """J * conj(m)^t * J^-1, the linear part shared by theta and dtheta."""
    j = j_matrix(m.field, m.n)
    j_inv = j.scale((-1) ** (m.n - 1))
    return j * m.conj().transpose() * j_inv


def theta(g: PadicMatrix) -> PadicMatrix:
    """The outer involution g -> J conj(g)^t^-1 J^-1."""
    return j_conjugate_transpose(g.inverse())


def dtheta(x: PadicMatrix) -> PadicMatrix:
    """Differential of theta: X -> -J conj(X)^t J^-1."""
    return -j_conjugate_transpose(x)


@dataclass(frozen=True)
class ThetaDecomposition:
    fixed_part: PadicMatrix
    anti_part: PadicMatrix


def decompose_dtheta(x: PadicMatrix) -> ThetaDecomposition:
    """Split X into dtheta-eigenparts: fixed (X+dtheta X)/2, anti (X-dtheta X)/2."""
    dx = dtheta(x)
    half = Fraction(1, 2)
    return ThetaDecomposition(fixed_part=(x + dx).scale(half), anti_part=(x - dx).scale(half))


def charpoly(m: PadicMatrix) -> list[PadicScalar]:
    """Characteristic polynomial coefficients [1, c1, ..., cn] of lambda^n + ...

    Division-free (Berkowitz), so no precision is lost to spurious divisions.
    """
    n = m.n
    field = m.field
    if n == 0:
        return [field.one()]
    a = m.rows
    poly = [field.one(), -a[0][0]]
    for k in range(2, n + 1):
        # principal k x k block: last row R, last column C, corner a_kk
        row = [a[k - 1][j] for j in range(k - 1)]
        col = [a[i][k - 1] for i in range(k - 1)]
        corner = a[k - 1][k - 1]
        sub = [[a[i][j] for j in range(k - 1)] for i in range(k - 1)]
        toeplitz = [field.one(), -corner]
        vec = col
        for _ in range(k - 1):
            dot = row[0] * vec[0]
            for t in range(1, k - 1):
                dot = dot + row[t] * vec[t]
            toeplitz.append(-dot)
            vec = [
                _dot(sub_row, vec, field)
                for sub_row in sub
            ]
        new_poly = []
        for i in range(k + 1):
            acc = None
            for j in range(len(poly)):
                d = i - j
                if 0 <= d < len(toeplitz):
                    term = toeplitz[d] * poly[j]
                    acc = term if acc is None else acc + term
            new_poly.append(acc if acc is not None else field.zero())
        poly = new_poly
    return poly


def _dot(row, vec, field: LocalField) -> PadicScalar:
    acc = row[0] * vec[0]
    for t in range(1, len(row)):
        acc = acc + row[t] * vec[t]
    return acc


def charpoly_cofactor(m: PadicMatrix) -> list[PadicScalar]:
    """Slow oracle: expand det(lambda I - A) by minors over polynomial coefficients."""
    n = m.n
    field = m.field

    def poly_mul(p, q):
        out = [field.zero()] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] = out[i + j] + pi * qj
        return out

    def poly_add(p, q):
        ln = max(len(p), len(q))
        p = p + [field.zero()] * (ln - len(p))
        q = q + [field.zero()] * (ln - len(q))
        return [x + y for x, y in zip(p, q)]

    # entries of lambda*I - A as polynomials in lambda (ascending)
    entries = [
        [
            [(-m.rows[i][j]), field.one()] if i == j else [-m.rows[i][j]]
            for j in range(n)
        ]
        for i in range(n)
    ]

    def det_poly(rows_idx, cols_idx):
        if len(rows_idx) == 1:
            return entries[rows_idx[0]][cols_idx[0]]
        total = [field.zero()]
        r = rows_idx[0]
        for pos, c in enumerate(cols_idx):
            minor = det_poly(rows_idx[1:], cols_idx[:pos] + cols_idx[pos + 1 :])
            term = poly_mul(entries[r][c], minor)
            if pos % 2 == 1:
                term = [-x for x in term]
            total = poly_add(total, term)
        return total

    asc = det_poly(tuple(range(n)), tuple(range(n)))
    asc = asc + [field.zero()] * (n + 1 - len(asc))
    return list(reversed(asc))


def newton_root_valuations(coeffs: list[PadicScalar]) -> list[Fraction]:
    """Eigenvalue valuations with multiplicity, via the exact Newton polygon.

    coeffs = [1, c1, ..., cn] for lambda^n + c1 lambda^(n-1) + ... + cn.
    Requires the constant coefficient to be resolved nonzero; raises
    PrecisionError if a zero-to-precision coefficient could alter the polygon.
    """

    def hull_slopes(points):
        hull = [points[0]]
        for pt in points[1:]:
            hull.append(pt)
            while len(hull) >= 3:
                (x1, y1), (x2, y2), (x3, y3) = hull[-3:]
                if (y2 - y1) * (x3 - x2) >= (y3 - y2) * (x2 - x1):
                    del hull[-2]
                else:
                    break
        slopes = []
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            slopes.extend([Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
        return slopes

    n = len(coeffs) - 1
    if coeffs[n].is_zero():
        raise PrecisionError("constant coefficient is zero to working precision")

    def points(pessimistic: bool):
        pts = [(0, Fraction(0))]
        for j in range(1, n + 1):
            c = coeffs[j]
            if c.is_zero():
                if pessimistic:
                    pts.append((j, c.val_lower_bound()))
            else:
                pts.append((j, c.valuation()))
        return pts

    opt = hull_slopes(points(False))
    pes = hull_slopes(points(True))
    if opt != pes:
        raise PrecisionError("Newton polygon unresolved at working precision")
    return opt


def _all_coeff_vals_positive(coeffs: list[PadicScalar]) -> bool:
    """All roots have positive valuation iff all non-leading coefficients do."""
    verdict = True
    for c in coeffs[1:]:
        if c.is_zero():
            if c.val_lower_bound() <= 0:
                raise PrecisionError("coefficient sign unresolved at working precision")
        else:
            v = c.valuation()
            if v <= 0:
                verdict = False
    return verdict


def is_topologically_nilpotent(x: PadicMatrix) -> bool:
    """True iff every eigenvalue of X has strictly positive valuation."""
    return _all_coeff_vals_positive(charpoly(x))


def is_topologically_unipotent(g: PadicMatrix) -> bool:
    """True iff every eigenvalue of g - 1 has strictly positive valuation.

    Requires g invertible to precision.
    """
    if not g.is_invertible():
        raise PrecisionError("matrix is singular to working precision")
    return _all_coeff_vals_positive(charpoly(g - PadicMatrix.identity(g.field, g.n)))
