"""Low-rank matrix generators, rank condensers and randomized identity tests.

``G(Y, Z) = Y Z`` with Y n x r and Z r x m parametrizes the matrices of
rank at most r.  A polynomial in the entries of an n x m matrix vanishes
on it exactly when it lies in the ideal of (r+1) x (r+1) minors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import BadOmega, CondenserTooSmall, InconsistentSchedule, InputError
from .exact_poly import Poly, Rat, VarId, poly_sum, rat
from .straightening import (
    check_context, generic_matrix, infer_shape, is_in_det_ideal, straighten, symbolic_det, xvar,
)

# ---------------------------------------------------------------- the matrix generator


@dataclass(frozen=True)
class MatrixGenerator:
    n: int
    m: int
    r: int
    stage: Optional[int] = None

    def __post_init__(self):
        if self.r < 0 or self.r > min(self.n, self.m):
            raise InputError(f"need 0 <= r <= min(n, m), got r = {self.r}")

    def left(self, i: int, l: int) -> VarId:
        return VarId("y", (i, l) if self.stage is None else (self.stage, i, l))

    def right(self, l: int, j: int) -> VarId:
        return VarId("z", (l, j) if self.stage is None else (self.stage, l, j))

    @property
    def seed(self) -> List[VarId]:
        ys = [self.left(i, l) for i in range(1, self.n + 1) for l in range(1, self.r + 1)]
        zs = [self.right(l, j) for l in range(1, self.r + 1) for j in range(1, self.m + 1)]
        return ys + zs


def expand_generator(g: MatrixGenerator) -> List[List[Poly]]:
    return [
        [poly_sum(Poly.var(g.left(i, l)) * Poly.var(g.right(l, j)) for l in range(1, g.r + 1))
         for j in range(1, g.m + 1)]
        for i in range(1, g.n + 1)
    ]


def apply_generator(f: Poly, g: MatrixGenerator) -> Poly:
    check_context(f, g.n, g.m)
    mat = expand_generator(g)
    return f.substitute({xvar(i, j): mat[i - 1][j - 1] for i in range(1, g.n + 1) for j in range(1, g.m + 1)})


def vanishing_equivalence(f: Poly, r: int, n: Optional[int] = None, m: Optional[int] = None) -> dict:
    """Compare f(rank <= r-1 generator) = 0 with membership in the r-minor ideal."""
    if n is None or m is None:
        n0, m0 = infer_shape(f)
        n, m = n or n0, m or m0
    if not 1 <= r <= min(n, m) + 1:
        raise InputError(f"r = {r} out of range for a {n}x{m} matrix")
    vanishes = apply_generator(f, MatrixGenerator(n, m, r - 1)).is_zero()
    member = is_in_det_ideal(f, r, n, m)
    return {"vanishes": vanishes, "member": member, "agree": vanishes == member}


def factor_low_rank(mat: Sequence[Sequence[Rat]], r: int) -> Tuple[List[List[Rat]], List[List[Rat]]]:
    """Y (n x r) and Z (r x m) with Y Z = mat, for a rational matrix of rank <= r."""
    n, m = len(mat), len(mat[0])
    _, piv = linalg.echelon(linalg._integer_rows(mat))
    if len(piv) > r:
        raise InputError(f"matrix has rank {len(piv)} > {r}")
    y = [[mat[i][c] for c in piv] for i in range(n)]
    z = linalg.solve(y, mat) if piv else []
    y = [row + [0] * (r - len(piv)) for row in y]
    z = [list(row) for row in z] + [[0] * m for _ in range(r - len(piv))]
    return y, z


# ---------------------------------------------------------------- recursive composition


@dataclass
class RecursiveGenerator:
    """Generator composed k times; stage s feeds the seed of stage s-1.

    Stage 1 arranges the n outputs as a square matrix; each later stage
    arranges the previous seed (its Y entries row by row, then Z) as a
    square matrix again.
    """

    n: int
    schedule: Tuple[int, ...]
    stages: List[MatrixGenerator] = field(default_factory=list)

    def __post_init__(self):
        if not self.schedule:
            raise InconsistentSchedule("the schedule needs at least one stage")
        arity = self.n
        for s, r in enumerate(self.schedule, 1):
            side = isqrt(arity)
            if side * side != arity:
                raise InconsistentSchedule(f"stage {s} input arity {arity} is not a square")
            if r < 1 or r > side:
                raise InconsistentSchedule(f"stage {s} rank {r} not in 1..{side}")
            self.stages.append(MatrixGenerator(side, side, r, stage=s))
            arity = 2 * side * r
        if comb(self.seed_length + self.degree, self.degree) < self.n:
            raise InconsistentSchedule("seed too short: binom(seed + degree, degree) < n")

    @property
    def k(self) -> int:
        return len(self.schedule)

    @property
    def degree(self) -> int:
        return 2 ** self.k

    @property
    def seed_length(self) -> int:
        return len(self.stages[-1].seed)

    def seed(self) -> List[VarId]:
        return self.stages[-1].seed

    def materialize(self) -> List[Poly]:
        """The n output coordinates as polynomials in the last stage's seed."""
        first = self.stages[0]
        mat = expand_generator(first)
        out = [p for row in mat for p in row]
        prev = first
        for g in self.stages[1:]:
            inner = [p for row in expand_generator(g) for p in row]
            sub = dict(zip(prev.seed, inner))
            out = [p.substitute(sub) for p in out]
            prev = g
        return out

    def report(self) -> dict:
        return {
            "n": self.n,
            "schedule": list(self.schedule),
            "degree": self.degree,
            "seed_length": self.seed_length,
            "stage_arities": [2 * g.n * g.r for g in self.stages],
            "seed_bound_holds": comb(self.seed_length + self.degree, self.degree) >= self.n,
        }


def recursive_generator(n: int, k: int, schedule: Sequence[int]) -> RecursiveGenerator:
    if len(schedule) != k:
        raise InconsistentSchedule(f"schedule has {len(schedule)} entries for k = {k}")
    return RecursiveGenerator(n, tuple(schedule))


# ---------------------------------------------------------------- rank condensers


@dataclass
class RankCondenser:
    matrices: List[List[List[Rat]]]
    r: int
    loss: int
    points: List[Rat] = field(default_factory=list)
    omega: Optional[Rat] = None

    @property
    def n(self) -> int:
        return len(self.matrices[0][0])

    def __len__(self) -> int:
        return len(self.matrices)

    def failures(self, a: Sequence[Sequence[Rat]]) -> int:
        """How many E lose rank on the full-column-rank matrix ``a``."""
        target = linalg.rank(a)
        return sum(1 for e in self.matrices if linalg.rank(_matmul(e, a)) < target)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "loss": self.loss,
            "omega": None if self.omega is None else str(self.omega),
            "points": [str(p) for p in self.points],
            "matrices": [[[str(c) for c in row] for row in e] for e in self.matrices],
        }


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def fs_condenser(n: int, r: int, omega: object = 2, points: Optional[Sequence[object]] = None,
                 size: Optional[int] = None, seed: int = 0) -> RankCondenser:
    """{W(a) : a in points} with W(a)[i][j] = (omega^i a)^j, i in 1..r, j in 1..n.

    Without ``points``, ``size`` distinct nonzero integers are drawn from a
    seeded generator (default size 2r(n-r)+1).
    """
    omega = rat(omega)
    if omega in (0, 1, -1):
        raise BadOmega(f"omega = {omega} has finite multiplicative order")
    if not 1 <= r <= n:
        raise InputError(f"need 1 <= r <= n, got r = {r}, n = {n}")
    if points is None:
        size = size if size is not None else 2 * r * (n - r) + 1
        rng = np.random.default_rng(seed)
        pool = [int(v) for v in rng.permutation(np.arange(1, 4 * size + 2))]
        points = [p if rng.random() < 0.5 else -p for p in pool[:size]]
    pts = [rat(p) for p in points]
    if any(p == 0 for p in pts):
        raise InputError("evaluation points must be nonzero")
    if len(set(pts)) != len(pts):
        raise InputError("evaluation points must be distinct")
    mats = [[[(omega ** i * a) ** j for j in range(1, n + 1)] for i in range(1, r + 1)] for a in pts]
    return RankCondenser(mats, r, r * (n - r), pts, omega)


def random_condenser(n: int, r: int, size: int, seed: int = 0, bound: int = 3) -> RankCondenser:
    """``size`` seeded r x n integer matrices with entries in [-bound, bound]."""
    rng = np.random.default_rng(seed)
    mats = [[[int(v) for v in rng.integers(-bound, bound + 1, n)] for _ in range(r)] for _ in range(size)]
    return RankCondenser(mats, r, r * (n - r))


def rank_lt_equations(n: int, r: int, c: RankCondenser, check: bool = True) -> List[Poly]:
    """det(E X E^T) for each E; these vanish on every matrix of rank < r."""
    if len(c) < 2 * r * (n - r) + 1:
        raise CondenserTooSmall(f"need {2 * r * (n - r) + 1} matrices, got {len(c)}")
    if c.r != r or c.n != n:
        raise InputError("condenser dimensions do not match")
    x = generic_matrix(n, n)
    out = []
    for e in c.matrices:
        ep = [[Poly.const(v) for v in row] for row in e]
        et = [list(col) for col in zip(*ep)]
        mid = [[poly_sum(ep[i][k] * x[k][j] for k in range(n)) for j in range(n)] for i in range(r)]
        full = [[poly_sum(mid[i][k] * et[k][j] for k in range(n)) for j in range(r)] for i in range(r)]
        p = symbolic_det(full)
        if check and not p.is_zero() and straighten(p, n, n).min_width() < r:
            raise AssertionError("condensed minor left the ideal of r x r minors")
        out.append(p)
    return out


# ---------------------------------------------------------------- Schwartz-Zippel


def sz_test(f: Poly, trials: int = 10, seed: int = 0, low: int = -50, high: int = 50) -> bool:
    """True iff some random evaluation of f is nonzero.

    Each variable is drawn uniformly from low..high; eps gets a random
    nonzero value from the same range.
    """
    if f.is_zero():
        return False
    if high - low + 1 <= f.degree():
        raise InputError("sampling range must exceed the degree")
    rng = np.random.default_rng(seed)
    vs = f.variables()
    for _ in range(trials):
        point = {v: int(rng.integers(low, high + 1)) for v in vs}
        e = 0
        while e == 0:
            e = int(rng.integers(low, high + 1))
        if f.evaluate(point, eps=Fraction(e)) != 0:
            return True
    return False
