"""Build equations with a prescribed finite number of solutions.

Given n and 1 <= m <= C(2n, 2), pick p distinct critical values with
C(p-1, 2) < m <= C(p, 2), group the indices 0..p-1 into blocks so that
exactly m cross-block pairs remain, give every block a shared target y with
the block's critical values its distinct n-th roots, and solve two small
linear systems for coefficient entries so the critical vectors come out
[1, 0] for the value 0 and [1, y_i] elsewhere.  Vectors agree inside a
block and are independent across blocks, so the equation has exactly m
diagonalizable solutions and nothing else.  m = 4 and m = 16 escape the
partition counting and use explicit diagonal equations instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .mat2 import Mat2, MatrixEquation, Vec2
from .poly import Poly, dense_solve
from .solver import SolutionSet, solution_bound, solve_equation

SPECIAL_COUNTS = (4, 16)


class DomainError(ValueError):
    """The requested (n, m) lies outside the constructible range."""


class ValidationFailure(RuntimeError):
    """The built equation did not round-trip to exactly m solutions."""


class UnreachableCase(RuntimeError):
    """Partition case that provably reduces to m = 4 or m = 16."""


@dataclass(frozen=True)
class ConstructionPlan:
    """Full witness of the choices behind a constructed equation."""

    n: int
    m: int
    p: int
    pbar: int
    partition: tuple[tuple[int, ...], ...]
    lambdas: tuple[complex, ...]   # index 0 is the distinguished zero
    ys: tuple[complex, ...]        # ys[0] unused, kept index-aligned
    vectors: tuple[Vec2, ...]


@dataclass(frozen=True)
class ConstructionResult:
    equation: MatrixEquation
    plan: Optional[ConstructionPlan]   # None for the m = 4, 16 diagonals
    special_case: Optional[int]
    expected_count: int


def choose_p(m: int) -> tuple[int, int, int]:
    """The unique p with C(p-1, 2) < m <= C(p, 2), plus the split
    C(p, 2) - m = 3a + b with b in {0, 1, 2}."""
    if m < 1:
        raise DomainError("m must be positive")
    p = 1
    while math.comb(p, 2) < m:
        p += 1
    gap = math.comb(p, 2) - m
    return p, gap // 3, gap % 3


def build_partition(m: int, p: int, a: int, b: int) -> tuple[tuple[int, ...], ...]:
    """Blocks over 0..p-1 leaving exactly m cross-block index pairs.

    0 always sits alone.  The equivalent-pair budget C(p, 2) - m = 3a + b is
    spent on triples (3 pairs each), pairs (1 each), and for one corner case
    a quadruple (6); with b = 2 the two-pair layout is preferred over the
    quadruple when both fit.
    """
    if m in SPECIAL_COUNTS:
        raise DomainError(f"m = {m} is handled by the explicit special case")
    blocks: list[tuple[int, ...]] = [(0,)]
    if b == 0:
        nxt = _take_triples(blocks, a, start=1)
    elif b == 1:
        nxt = _take_triples(blocks, a, start=1)
        blocks.append((nxt, nxt + 1))
        nxt += 2
    elif p > 3 * a + 4:
        nxt = _take_triples(blocks, a, start=1)
        blocks.append((nxt, nxt + 1))
        blocks.append((nxt + 2, nxt + 3))
        nxt += 4
    elif a >= 2:
        nxt = _take_triples(blocks, a - 2, start=1)
        blocks.append((nxt, nxt + 1, nxt + 2, nxt + 3))
        blocks.append((nxt + 4, nxt + 5))
        blocks.append((nxt + 6, nxt + 7))
        nxt += 8
    else:
        raise UnreachableCase(
            f"b = 2, a = {a}, p = {p} reduces to a special count, got m = {m}")
    blocks.extend((i,) for i in range(nxt, p))
    _check_partition(blocks, m, p)
    return tuple(blocks)


def _take_triples(blocks, count, start):
    for t in range(count):
        blocks.append((start + 3 * t, start + 3 * t + 1, start + 3 * t + 2))
    return start + 3 * count


def _check_partition(blocks, m, p):
    flat = sorted(i for b in blocks for i in b)
    assert flat == list(range(p)), "blocks must partition 0..p-1"
    assert blocks[0] == (0,), "0 must sit in a singleton block"
    equivalent = sum(math.comb(len(b), 2) for b in blocks)
    if math.comb(p, 2) - equivalent != m:
        raise UnreachableCase(
            f"partition leaves {math.comb(p, 2) - equivalent} pairs, wanted {m}")
    assert max(len(b) for b in blocks) <= -(-p // 2), "block too large"


def choose_values(partition: Sequence[Sequence[int]], n: int,
                  y_values: Optional[Sequence[float]] = None):
    """Assign each nonzero block a target y and its members distinct n-th
    roots of y; y defaults to the block's 1-based position."""
    p = sum(len(b) for b in partition)
    lambdas = [0j] * p
    ys = [0j] * p
    omega = cmath.exp(2j * cmath.pi / n)
    nonzero_blocks = [b for b in partition if b != (0,)]
    if y_values is not None and len(y_values) < len(nonzero_blocks):
        raise DomainError(f"need at least {len(nonzero_blocks)} y values")
    for pos, block in enumerate(nonzero_blocks, start=1):
        if len(block) > n:
            raise DomainError(f"block of {len(block)} values exceeds n = {n}")
        y = complex(y_values[pos - 1]) if y_values is not None else complex(pos)
        if y == 0:
            raise DomainError("block y values must be nonzero")
        root = y ** (1.0 / n)
        for j, idx in enumerate(sorted(block)):
            lambdas[idx] = root * omega ** j
            ys[idx] = y
    vectors = [Vec2(1, 0)] + [Vec2(1, ys[i]) for i in range(1, p)]
    return tuple(lambdas), tuple(ys), tuple(vectors)


def solve_coefficients(plan: ConstructionPlan) -> MatrixEquation:
    """Coefficient entries realizing the plan's critical pairs.

    Both branches zero out enough entries to force the value 0 with
    multiplicity pbar = 2n - p + 1 and critical vector [1, 0]; the remaining
    entries solve Vandermonde-like systems stating that M(lambda_i) must
    annihilate [1, y_i].  Distinct nonzero lambda_i keep those systems
    regular.
    """
    n, p, pbar = plan.n, plan.p, plan.pbar
    lams = plan.lambdas[1:]
    ys = plan.ys[1:]
    entries = {key: [0j] * n for key in ("a11", "a12", "a21", "a22")}

    if pbar <= n:
        rows = [[lam ** k for k in range(pbar, n)]
                + [y * lam ** k for k in range(n)]
                for lam, y in zip(lams, ys)]
        first = dense_solve(rows, [-lam ** n for lam in lams])
        second = dense_solve(rows, [-lam ** n * y for lam, y in zip(lams, ys)])
        head = n - pbar
        for k in range(head):
            entries["a11"][pbar + k] = first[k]
            entries["a21"][pbar + k] = second[k]
        for k in range(n):
            entries["a12"][k] = first[head + k]
            entries["a22"][k] = second[head + k]
    else:
        # explicit first row; the y-weighted rows cancel since y_i != 0
        entries["a12"][0] = -1
        rows = [[lam ** k for k in range(pbar - n, n)] for lam in lams]
        second = dense_solve(rows, [-lam ** n for lam in lams])
        for k, value in enumerate(second):
            entries["a22"][pbar - n + k] = value

    coeffs = tuple(
        Mat2(entries["a11"][i], entries["a12"][i],
             entries["a21"][i], entries["a22"][i])
        for i in range(n)
    )
    return MatrixEquation(coeffs)


def special_case(m: int, n: int) -> MatrixEquation:
    """Explicit diagonal equations for m = 4 (n >= 2) and m = 16 (n >= 4)."""
    if m == 4:
        if n < 2:
            raise DomainError("m = 4 requires n >= 2")
        top = Poly.from_roots([(1, 1), (-1, n - 1)])
        bottom = Poly.from_roots([(2, 1), (-2, n - 1)])
    elif m == 16:
        if n < 4:
            raise DomainError("m = 16 requires n >= 4")
        top = Poly.from_roots([(3, 1), (-3, 1), (1, 1), (-1, n - 3)])
        bottom = Poly.from_roots([(4, 1), (-4, 1), (2, 1), (-2, n - 3)])
    else:
        raise DomainError(f"no special case for m = {m}")
    coeffs = tuple(Mat2.diag(top.coeffs[i], bottom.coeffs[i]) for i in range(n))
    return MatrixEquation(coeffs)


def construct(n: int, m: int,
              y_values: Optional[Sequence[float]] = None,
              validate: bool = True) -> ConstructionResult:
    """An n-th degree equation with exactly m solutions, plus its witness.

    Self-validates by solving the built equation; a mismatch raises
    ValidationFailure rather than returning silently.
    """
    if n < 1:
        raise DomainError("n must be positive")
    if n > 16:
        raise DomainError("n is capped at 16")
    if not 1 <= m <= solution_bound(n):
        raise DomainError(
            f"m must lie in 1..{solution_bound(n)} for n = {n}, got {m}")

    if m in SPECIAL_COUNTS:
        eq = special_case(m, n)
        result = ConstructionResult(eq, None, m, m)
    else:
        p, a, b = choose_p(m)
        partition = build_partition(m, p, a, b)
        lambdas, ys, vectors = choose_values(partition, n, y_values)
        plan = ConstructionPlan(n, m, p, 2 * n - p + 1, partition,
                                lambdas, ys, vectors)
        result = ConstructionResult(solve_coefficients(plan), plan, None, m)

    if validate:
        solved = solve_equation(result.equation)
        _validate_count(solved, m)
    return result


def _validate_count(solved: SolutionSet, m: int) -> None:
    if not solved.is_finite:
        raise ValidationFailure(
            f"construction came out infinite ({solved.certificate.reason})")
    if solved.count != m:
        raise ValidationFailure(
            f"construction yielded {solved.count} solutions, wanted {m}")
