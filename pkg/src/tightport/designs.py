"""Latin squares and complex Hadamard matrices.

These two combinatorial designs are exactly the data needed to assemble a
shift-and-multiply family of unitaries: the Latin square fixes where each
column of a basis element lands (the permutation part) and one Hadamard
matrix per column-shift fixes the phases (the diagonal part).

Grid orientation: ``grid[j][k]`` is the target row for column ``k`` under
shift selector ``j``; the same ``j`` selects the j-th Hadamard matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .common import DEFAULT_TOL, CheckResult, as_permutation
from .errors import (
    DesignInvalid,
    DimensionTooLarge,
    NotUnimodular,
    PeriodicityViolated,
    SymbolOutOfRange,
)
from .tensor import max_abs

__all__ = [
    "LatinSquare",
    "HadamardMatrix",
    "latin_from_cyclic",
    "validate_latin",
    "latin_equivalence_apply",
    "count_normalized_latin",
    "fourier_hadamard",
    "hadamard_d4_family",
    "periodic_phase_hadamard",
    "validate_hadamard",
    "dephase_hadamard",
    "hadamards_equivalent",
    "MAX_ENUMERATION_D",
]

# Exhaustive Latin-square counting is capped here; the search space beyond
# d=5 explodes far past desk scale.
MAX_ENUMERATION_D = 5


def _as_grid(square) -> np.ndarray:
    if isinstance(square, LatinSquare):
        return square.grid
    grid = np.asarray(square, dtype=int)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise DesignInvalid(f"grid must be square, got shape {grid.shape}")
    return grid


def _as_phase_matrix(h) -> np.ndarray:
    if isinstance(h, HadamardMatrix):
        return h.matrix
    m = np.asarray(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DesignInvalid(f"matrix must be square, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class LatinSquare:
    """A d x d grid over symbols 0..d-1, each exactly once per row and column.

    Construction validates the grid and rejects anything else, so holding a
    ``LatinSquare`` is proof of validity.
    """

    grid: np.ndarray

    def __post_init__(self):
        grid = _as_grid(self.grid)
        result = validate_latin(grid)
        if not result:
            raise DesignInvalid(f"not a Latin square: {result.witness}")
        grid = grid.copy()
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @property
    def d(self) -> int:
        return self.grid.shape[0]


@dataclass(frozen=True)
class HadamardMatrix:
    """A square matrix of unit-modulus entries with H H* = d I.

    Construction validates both conditions at the package default tolerance.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_phase_matrix(self.matrix)
        result = validate_hadamard(m)
        if not result:
            raise DesignInvalid(
                f"not a Hadamard matrix: {result.witness} (deviation {result.deviation:.3e})"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


def latin_from_cyclic(d: int) -> LatinSquare:
    """Addition table of the cyclic group: grid[j, k] = (j + k) mod d."""
    j, k = np.indices((d, d))
    return LatinSquare((j + k) % d)


def validate_latin(grid) -> CheckResult:
    """Check row and column injectivity of a grid over symbols 0..d-1.

    Returns a failing result naming the first violating row or column.
    Raises ``SymbolOutOfRange`` when an entry is not a valid symbol.
    """
    g = _as_grid(grid)
    d = g.shape[0]
    if g.size and (g.min() < 0 or g.max() >= d):
        raise SymbolOutOfRange(f"entries must lie in 0..{d - 1}")
    violations = 0
    witness = None
    for j in range(d):
        if len(set(g[j, :].tolist())) != d:
            violations += 1
            witness = witness or f"row {j}"
    for k in range(d):
        if len(set(g[:, k].tolist())) != d:
            violations += 1
            witness = witness or f"column {k}"
    if violations:
        return CheckResult(False, float(violations), witness)
    return CheckResult(True, 0.0)


def latin_equivalence_apply(square, p, q, r) -> LatinSquare:
    """Relabel rows by p, columns by q, and symbols by r.

    The result grid is ``r[grid[p[j], q[k]]]``; equivalence moves preserve
    the Latin property, which construction re-checks.
    """
    g = _as_grid(square)
    d = g.shape[0]
    pp = as_permutation(p, d)
    qq = as_permutation(q, d)
    rr = as_permutation(r, d)
    return LatinSquare(rr[g[np.ix_(pp, qq)]])


def count_normalized_latin(d: int) -> int:
    """Count d x d Latin squares whose first row and column are 0, 1, ..., d-1.

    Exhaustive depth-first search with one symbol bitmask per column;
    capped at d = 5.
    """
    if d > MAX_ENUMERATION_D:
        raise DimensionTooLarge(
            f"normalized Latin squares are only enumerated up to d={MAX_ENUMERATION_D}; "
            f"counts grow astronomically beyond that"
        )
    if d <= 1:
        return 1

    full = (1 << d) - 1
    # Row 0 is 0..d-1; column k has already consumed symbol k.
    col_used = [1 << k for k in range(d)]

    def fill(row: int, col: int, row_used: int) -> int:
        if col == d:
            return fill_row(row + 1)
        free = full & ~row_used & ~col_used[col]
        total = 0
        while free:
            bit = free & -free
            free ^= bit
            col_used[col] |= bit
            total += fill(row, col + 1, row_used | bit)
            col_used[col] ^= bit
        return total

    def fill_row(row: int) -> int:
        if row == d:
            return 1
        # First column is fixed to the row index.
        bit = 1 << row
        if col_used[0] & bit:
            return 0
        col_used[0] |= bit
        total = fill(row, 1, bit)
        col_used[0] ^= bit
        return total

    return fill_row(1)


def fourier_hadamard(d: int) -> HadamardMatrix:
    """Discrete Fourier phases: entry (k, l) is exp(2 pi i k l / d)."""
    k, l = np.indices((d, d))
    return HadamardMatrix(np.exp(2j * np.pi * k * l / d))


def hadamard_d4_family(u: complex) -> HadamardMatrix:
    """The one-parameter family of 4 x 4 Hadamard matrices.

    ``u`` may be any unit-modulus phase; every choice yields a valid
    Hadamard matrix, and the family sweeps through all of them at d = 4
    up to equivalence.
    """
    u = complex(u)
    if abs(abs(u) - 1.0) > 1e-12:
        raise NotUnimodular(f"|u| = {abs(u)} is not 1")
    return HadamardMatrix(
        np.array(
            [
                [1, 1, 1, 1],
                [1, 1, -1, -1],
                [1, -1, u, -u],
                [1, -1, -u, u],
            ],
            dtype=complex,
        )
    )


def periodic_phase_hadamard(p: int, q: int, phase_matrix) -> HadamardMatrix:
    """Twist the Fourier matrix of order p*q by a doubly periodic phase grid.

    ``phase_matrix`` must be (p*q) x (p*q) with unit-modulus entries, constant
    under index shifts of p in the row direction and q in the column
    direction (mod p*q).  Entry (k, l) of the result is
    ``phase_matrix[k, l] * exp(2 pi i k l / (p*q))``.
    """
    d = p * q
    v = np.asarray(phase_matrix, dtype=complex)
    if v.shape != (d, d):
        raise PeriodicityViolated(f"phase matrix shape {v.shape} is not ({d}, {d})")
    bad = np.abs(np.abs(v) - 1.0) > 1e-12
    if bad.any():
        k, l = np.argwhere(bad)[0]
        raise NotUnimodular(f"phase matrix entry ({k}, {l}) has modulus {abs(v[k, l])}")
    row_shift = np.roll(v, -p, axis=0)
    col_shift = np.roll(v, -q, axis=1)
    for shifted, direction in ((row_shift, "row"), (col_shift, "column")):
        bad = np.abs(v - shifted) > 1e-12
        if bad.any():
            k, l = np.argwhere(bad)[0]
            raise PeriodicityViolated(
                f"phase matrix is not periodic in the {direction} direction "
                f"(first violation at ({k}, {l}))"
            )
    k, l = np.indices((d, d))
    return HadamardMatrix(v * np.exp(2j * np.pi * k * l / d))


def validate_hadamard(h, tol: float = DEFAULT_TOL) -> CheckResult:
    """Check unimodular entries and H H* = d I, reporting the worse deviation."""
    m = _as_phase_matrix(h)
    d = m.shape[0]
    modulus_dev = max_abs(np.abs(m) - 1.0)
    product_dev = max_abs(m @ m.conj().T - d * np.eye(d))
    deviation = max(modulus_dev, product_dev)
    if deviation <= tol:
        return CheckResult(True, deviation)
    witness = (
        "an entry is not unimodular"
        if modulus_dev >= product_dev
        else "rows are not orthogonal at norm sqrt(d)"
    )
    return CheckResult(False, deviation, witness)


def _dephased(m: np.ndarray) -> np.ndarray:
    out = m / m[:, :1]
    return out / out[:1, :]


def dephase_hadamard(h) -> HadamardMatrix:
    """Equivalent representative with all-ones first row and column.

    Divides each row by its first entry, then each column by its resulting
    first entry.  Idempotent, and invariant under row/column phase twists.
    """
    return HadamardMatrix(_dephased(_as_phase_matrix(h)))


def hadamards_equivalent(h1, h2, tol: float = 1e-8) -> bool:
    """Decide equivalence by row/column permutation search on dephased forms.

    Two Hadamard matrices are equivalent when one maps to the other by row
    and column permutations and phase multiplications; dephasing removes the
    phase freedom, so a match of dephased forms over all d! x d! permutation
    pairs settles the question.  Feasible only at small d (the intended use
    is d <= 4; d = 5 is the practical ceiling).
    """
    a = _as_phase_matrix(h1)
    b = _as_phase_matrix(h2)
    if a.shape != b.shape:
        return False
    d = a.shape[0]
    target = _dephased(b)
    for rows in permutations(range(d)):
        pa = a[list(rows), :]
        for cols in permutations(range(d)):
            if max_abs(_dephased(pa[:, list(cols)]) - target) <= tol:
                return True
    return False
