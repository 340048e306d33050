"""2x2 complex matrices, polynomial matrices, and matrix equations."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .poly import Poly

# Rank decisions scale with a caller-provided magnitude reference, never with
# raw machine epsilon: equation coefficients can reach ~1e3.
RANK_TOL = 1e-8
# Determinants of evaluated polynomial matrices carry roundoff of order
# (degree+1) * eps * scale^2, so the singularity test needs this floor.
_DET_FLOOR = 4e-13

MAX_DEGREE = 16


@dataclass(frozen=True)
class Vec2:
    x: complex
    y: complex

    def __post_init__(self):
        object.__setattr__(self, "x", complex(self.x))
        object.__setattr__(self, "y", complex(self.y))
        if not (cmath.isfinite(self.x) and cmath.isfinite(self.y)):
            raise ValueError("vector entries must be finite")

    def norm(self) -> float:
        return (abs(self.x) ** 2 + abs(self.y) ** 2) ** 0.5

    def normalized(self, zero_tol: float = 1e-12) -> "Vec2":
        """Unit norm with the first nonzero component rotated positive real."""
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        x, y = self.x / n, self.y / n
        lead = x if abs(x) > zero_tol else y
        phase = abs(lead) / lead
        return Vec2(x * phase, y * phase)


def det2(u: Vec2, v: Vec2) -> complex:
    return u.x * v.y - u.y * v.x


@dataclass(frozen=True)
class Mat2:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise ValueError("matrix entries must be finite")
            object.__setattr__(self, name, value)

    @staticmethod
    def zero() -> "Mat2":
        return Mat2(0, 0, 0, 0)

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1, 0, 0, 1)

    @staticmethod
    def diag(a: complex, b: complex) -> "Mat2":
        return Mat2(a, 0, 0, b)

    @staticmethod
    def from_rows(rows) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(a, b, c, d)

    def rows(self):
        return ((self.m11, self.m12), (self.m21, self.m22))

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.m11 + o.m11, self.m12 + o.m12,
                    self.m21 + o.m21, self.m22 + o.m22)

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.m11 - o.m11, self.m12 - o.m12,
                    self.m21 - o.m21, self.m22 - o.m22)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.m11, -self.m12, -self.m21, -self.m22)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )

    def scale(self, s: complex) -> "Mat2":
        return Mat2(s * self.m11, s * self.m12, s * self.m21, s * self.m22)

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(self.m11 * v.x + self.m12 * v.y,
                    self.m21 * v.x + self.m22 * v.y)

    def trace(self) -> complex:
        return self.m11 + self.m22

    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def max_norm(self) -> float:
        return max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))

    def adjugate(self) -> "Mat2":
        return Mat2(self.m22, -self.m12, -self.m21, self.m11)

    def inverse(self) -> "Mat2":
        d = self.det()
        if d == 0:
            raise ZeroDivisionError("singular 2x2 matrix")
        return self.adjugate().scale(1.0 / d)

    def dist(self, o: "Mat2") -> float:
        return (self - o).max_norm()


def outer(u: Vec2, v: Vec2) -> Mat2:
    """Rank-one matrix u v^T (plain transpose, no conjugation)."""
    return Mat2(u.x * v.x, u.x * v.y, u.y * v.x, u.y * v.y)


E1 = Vec2(1, 0)
E2 = Vec2(0, 1)


@dataclass(frozen=True)
class MatrixEquation:
    """Monic equation X^n + A_{n-1} X^{n-1} + ... + A_1 X + A_0 = 0.

    ``coeffs`` lists A_0 first; the leading identity coefficient is implicit.
    """

    coeffs: tuple[Mat2, ...]

    def __post_init__(self):
        if not 1 <= len(self.coeffs) <= MAX_DEGREE:
            raise ValueError(f"degree must be in 1..{MAX_DEGREE}")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def coeff_scale(self) -> float:
        """Largest coefficient entry magnitude, floored at the implicit 1."""
        return max(1.0, max(a.max_norm() for a in self.coeffs))


@dataclass(frozen=True)
class PolyMat2:
    e11: Poly
    e12: Poly
    e21: Poly
    e22: Poly

    def eval(self, t: complex) -> Mat2:
        return Mat2(self.e11(t), self.e12(t), self.e21(t), self.e22(t))

    def det(self) -> Poly:
        return self.e11 * self.e22 - self.e12 * self.e21

    def derivative(self) -> "PolyMat2":
        return PolyMat2(self.e11.derivative(), self.e12.derivative(),
                        self.e21.derivative(), self.e22.derivative())

    def entries(self):
        return ((self.e11, self.e12), (self.e21, self.e22))


def poly_matrix(eq: MatrixEquation) -> PolyMat2:
    """The polynomial matrix M(t) = t^n I + sum_i A_i t^i of an equation.

    A vector v is annihilated by M(lam) exactly when lam, v can be an
    eigenpair of a solution, so det M(t) gates all solution eigenvalues.
    """
    n = eq.n
    entries = [[0j] * (n + 1) for _ in range(4)]
    for i, a in enumerate(eq.coeffs):
        for slot, value in enumerate((a.m11, a.m12, a.m21, a.m22)):
            entries[slot][i] = value
    entries[0][n] = 1.0
    entries[3][n] = 1.0
    return PolyMat2(*(Poly(e) for e in entries))


def eval_equation(eq: MatrixEquation, x: Mat2) -> Mat2:
    """Residual X^n + A_{n-1} X^{n-1} + ... + A_0 at X.

    Association is fixed left to right, (((X + A_{n-1})X + A_{n-2})X + ...),
    so residuals are bit-reproducible.
    """
    acc = x + eq.coeffs[-1]
    for a in reversed(eq.coeffs[:-1]):
        acc = acc @ x + a
    return acc


def rank_and_nullspace(a: Mat2, scale: float,
                       tol: float = RANK_TOL) -> tuple[int, list[Vec2]]:
    """Numerical rank of a 2x2 matrix and an orthonormal kernel basis.

    ``scale`` is the magnitude reference supplied by the caller; entries are
    negligible below tol*scale and determinants below (tol*scale)^2.  Kernel
    vectors come from the orthogonal complement of the larger-norm row and
    are normalized (unit norm, first nonzero component positive real).
    """
    ref = tol * max(scale, 1e-300)
    if a.max_norm() <= ref:
        return 0, [E1, E2]
    if abs(a.det()) <= max(ref * ref, _DET_FLOOR * scale * scale):
        r1, r2 = a.rows()
        row = r1 if abs(r1[0]) ** 2 + abs(r1[1]) ** 2 >= abs(r2[0]) ** 2 + abs(r2[1]) ** 2 else r2
        v = Vec2(-row[1], row[0]).normalized()
        return 1, [v]
    return 2, []


@dataclass(frozen=True)
class Eigen2:
    """Eigenvalues of a 2x2 matrix; ``vectors`` holds one vector when the
    matrix is defective, otherwise two."""

    values: tuple[complex, complex]
    vectors: tuple[Vec2, ...]
    defective: bool


def eigen2(a: Mat2, tol: float = RANK_TOL) -> Eigen2:
    """Eigen-decomposition through the quadratic formula on the
    characteristic polynomial; classifies defective matrices by eigenvalue
    gap and kernel dimension."""
    tr, dt = a.trace(), a.det()
    disc = cmath.sqrt(tr * tr - 4 * dt)
    lam1, lam2 = (tr + disc) / 2, (tr - disc) / 2
    scale = max(1.0, a.max_norm())
    if abs(lam1 - lam2) > tol * scale:
        vecs = []
        for lam in (lam1, lam2):
            shifted = a - Mat2.identity().scale(lam)
            rank, basis = rank_and_nullspace(shifted, scale, tol)
            vecs.append(basis[0] if basis else E1)
        order = sorted(((lam1, vecs[0]), (lam2, vecs[1])),
                       key=lambda p: (p[0].real, p[0].imag))
        return Eigen2((order[0][0], order[1][0]),
                      (order[0][1], order[1][1]), False)
    lam = tr / 2
    shifted = a - Mat2.identity().scale(lam)
    if shifted.max_norm() <= tol * scale:
        return Eigen2((lam, lam), (E1, E2), False)
    rank, basis = rank_and_nullspace(shifted, scale, tol)
    return Eigen2((lam, lam), (basis[0] if basis else E1,), True)
