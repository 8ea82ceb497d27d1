"""Unitary operator bases: construction and verification.

A unitary basis on a d-dimensional space is a family of d^2 unitaries that
is orthonormal in the normalized trace inner product tr(U* V) / d.  Such a
family is simultaneously a depolarizing channel decomposition: conjugating
any probe by all elements and summing yields d tr(probe) I.  Both facts are
checked numerically here, never assumed.

The workhorse construction is shift-and-multiply: element (i, j) sends
basis vector k to row ``grid[j, k]`` with phase ``H_j[i, k]``, where the
grid is a Latin square and each H_j is a complex Hadamard matrix.  Flat
element labels are x = i*d + j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import DEFAULT_TOL, CheckResult, as_permutation
from .designs import (
    fourier_hadamard,
    latin_from_cyclic,
    validate_hadamard,
    validate_latin,
    _as_grid,
    _as_phase_matrix,
)
from .errors import (
    DesignInvalid,
    DimensionMismatch,
    NoSolution,
    NotUnitary,
    WeightNotPositive,
)
from .tensor import matrix_units, max_abs

__all__ = [
    "UnitaryBasis",
    "GramReport",
    "shift_multiply_basis",
    "weyl_basis",
    "verify_orthonormal",
    "verify_depolarizer",
    "weighted_gram",
    "recover_weight_from_unitary_gram",
    "tensor_bases",
    "apply_equivalence",
]


@dataclass(frozen=True)
class UnitaryBasis:
    """d^2 operators on a d-dimensional space, stacked as one (d^2, d, d) array.

    Construction checks shapes only; the defining unitarity and
    orthonormality conditions are the business of :func:`verify_orthonormal`,
    so that perturbed or corrupted families can still be represented and
    diagnosed.  ``label_map`` records (i, j) -> flat index provenance for
    shift-and-multiply families.
    """

    d: int
    elements: np.ndarray
    label_map: dict[tuple[int, int], int] | None = None

    def __post_init__(self):
        elems = np.asarray(self.elements, dtype=complex)
        if elems.shape != (self.d * self.d, self.d, self.d):
            raise DimensionMismatch(
                f"expected {self.d ** 2} matrices of shape ({self.d}, {self.d}), "
                f"got array of shape {elems.shape}"
            )
        elems = elems.copy()
        elems.setflags(write=False)
        object.__setattr__(self, "elements", elems)


@dataclass(frozen=True)
class GramReport:
    """Pairwise inner products of a family plus its distance from identity.

    ``max_deviation`` measures the Gram matrix against I;
    ``unitarity_deviation`` is the worst per-element distance of U*U from I
    (zero when the check does not apply).  ``passed`` requires both within
    the tolerance the caller supplied.
    """

    gram: np.ndarray
    max_deviation: float
    unitarity_deviation: float
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def _raw_shift_multiply(grid: np.ndarray, phase_mats: list[np.ndarray]) -> np.ndarray:
    """Assemble the operator family without validating the designs.

    Exists so tests can show the converse: a non-Latin grid or a
    non-Hadamard phase matrix yields a family that fails orthonormality.
    """
    d = grid.shape[0]
    elems = np.zeros((d * d, d, d), dtype=complex)
    cols = np.arange(d)
    for i in range(d):
        for j in range(d):
            u = np.zeros((d, d), dtype=complex)
            u[grid[j], cols] = phase_mats[j][i]
            elems[i * d + j] = u
    return elems


def shift_multiply_basis(square, hadamards) -> UnitaryBasis:
    """Build a unitary basis from a Latin square and d Hadamard matrices.

    Element (i, j) acts as ``e_k -> H_j[i, k] e_{grid[j, k]}``; validity of
    the two designs is necessary and sufficient for the result to be a
    basis, so invalid inputs are rejected with ``DesignInvalid`` instead of
    silently producing a non-basis.
    """
    grid = _as_grid(square)
    d = grid.shape[0]
    latin_check = validate_latin(grid)
    if not latin_check:
        raise DesignInvalid(f"grid is not a Latin square: {latin_check.witness}")
    mats = [_as_phase_matrix(h) for h in hadamards]
    if len(mats) != d:
        raise DesignInvalid(f"need exactly {d} Hadamard matrices, got {len(mats)}")
    for j, m in enumerate(mats):
        if m.shape != (d, d):
            raise DesignInvalid(f"Hadamard {j} has shape {m.shape}, expected ({d}, {d})")
        check = validate_hadamard(m)
        if not check:
            raise DesignInvalid(
                f"matrix {j} is not Hadamard: {check.witness} "
                f"(deviation {check.deviation:.3e})"
            )
    labels = {(i, j): i * d + j for i in range(d) for j in range(d)}
    return UnitaryBasis(d, _raw_shift_multiply(grid, mats), labels)


def weyl_basis(d: int) -> UnitaryBasis:
    """Shift-and-multiply basis from the cyclic Latin square and Fourier phases.

    The resulting family is closed under multiplication up to unimodular
    factors, with labels adding componentwise mod d; at d = 2 it is the
    identity and the three Pauli matrices up to phases.
    """
    return shift_multiply_basis(latin_from_cyclic(d), [fourier_hadamard(d)] * d)


def verify_orthonormal(basis: UnitaryBasis, tol: float = DEFAULT_TOL) -> GramReport:
    """Gram matrix of trace inner products, checked against the identity.

    Also re-checks that every element is unitary; a family can have an
    identity Gram matrix while containing non-unitaries, and it is only a
    basis in the intended sense when both hold.
    """
    elems = basis.elements
    d = basis.d
    gram = np.einsum("xij,yij->xy", elems.conj(), elems) / d
    gram_dev = max_abs(gram - np.eye(d * d))
    products = np.einsum("xki,xkj->xij", elems.conj(), elems)
    unit_dev = max_abs(products - np.eye(d))
    return GramReport(gram, gram_dev, unit_dev, gram_dev <= tol and unit_dev <= tol)


def verify_depolarizer(
    basis: UnitaryBasis, probes=None, tol: float = DEFAULT_TOL
) -> CheckResult:
    """Check that conjugating probes by all elements sums to d tr(probe) I.

    With no probes given, all d^2 matrix units are used; they span, so by
    linearity the check is then complete rather than probabilistic.
    """
    d = basis.d
    elems = basis.elements
    probes = None if probes is None else [np.asarray(p, dtype=complex) for p in probes]
    if not probes:
        probes = matrix_units(d)
        names = [f"matrix unit E[{x // d},{x % d}]" for x in range(d * d)]
    else:
        names = [f"probe {i}" for i in range(len(probes))]
    worst = 0.0
    worst_name = None
    eye = np.eye(d)
    for name, probe in zip(names, probes):
        if probe.shape != (d, d):
            raise DimensionMismatch(f"{name} has shape {probe.shape}, expected ({d}, {d})")
        total = np.einsum("xki,kl,xlj->ij", elems.conj(), probe, elems)
        deviation = max_abs(total - d * np.trace(probe) * eye)
        if deviation > worst:
            worst, worst_name = deviation, name
    return CheckResult(worst <= tol, worst, worst_name if worst > tol else None)


def weighted_gram(operators, weight_inverse, tol: float = DEFAULT_TOL) -> GramReport:
    """Gram matrix tr(K_x* W K_y), with W the supplied inverse weight.

    W must be positive definite.  Among all W, only the maximally mixed
    density I/d admits d^2 unitaries with an identity weighted Gram matrix,
    so a deformed weight must push the report off identity for any unitary
    family.
    """
    ops = np.asarray(operators, dtype=complex)
    if ops.ndim != 3 or ops.shape[-2] != ops.shape[-1]:
        raise DimensionMismatch(
            f"operators must stack to (n, d, d), got shape {ops.shape}"
        )
    w = np.asarray(weight_inverse, dtype=complex)
    d = ops.shape[-1]
    if w.shape != (d, d):
        raise DimensionMismatch(f"weight shape {w.shape} does not match operators ({d}, {d})")
    if max_abs(w - w.conj().T) > 1e-12:
        raise WeightNotPositive("weight is not Hermitian")
    if float(np.linalg.eigvalsh(w).min()) <= 1e-12:
        raise WeightNotPositive("weight has an eigenvalue at or below 1e-12")
    weighted = np.einsum("ab,xbc->xac", w, ops)
    gram = np.einsum("xij,yij->xy", ops.conj(), weighted)
    deviation = max_abs(gram - np.eye(ops.shape[0]))
    return GramReport(gram, deviation, 0.0, deviation <= tol)


def _hermitian_basis(d: int) -> np.ndarray:
    """A real-spanning basis of the Hermitian d x d matrices."""
    mats = []
    for k in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[k, k] = 1.0
        mats.append(m)
    for k in range(d):
        for l in range(k + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[k, l] = m[l, k] = 1.0
            mats.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[k, l] = -1j
            m[l, k] = 1j
            mats.append(m)
    return np.asarray(mats)


def recover_weight_from_unitary_gram(
    basis: UnitaryBasis, tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Solve for the density operator rho with tr(U_x* rho U_y) = delta_{xy}.

    The d^4 equations overdetermine the d^2 real parameters of a Hermitian
    rho but are consistent exactly when the family is a genuine basis, in
    which case the unique solution is I/d.  Least squares recovers it; a
    residual beyond ``tol`` (or a solution away from I/d) raises
    ``NoSolution``, signalling that the input was not a basis.
    """
    d = basis.d
    elems = basis.elements
    herm = _hermitian_basis(d)
    # Column m holds tr(U_x* G_m U_y) flattened over (x, y).
    coeffs = np.einsum("xki,mkl,yli->mxy", elems.conj(), herm, elems)
    design = coeffs.reshape(d * d, -1).T
    target = np.eye(d * d, dtype=complex).reshape(-1)
    design_real = np.vstack([design.real, design.imag])
    target_real = np.concatenate([target.real, target.imag])
    solution, *_ = np.linalg.lstsq(design_real, target_real, rcond=None)
    rho = np.einsum("m,mkl->kl", solution, herm)
    rho = (rho + rho.conj().T) / 2
    trace = complex(np.trace(rho))
    if abs(trace) < 1e-12:
        raise NoSolution("recovered operator has vanishing trace")
    rho = rho / trace.real
    gram = np.einsum("xki,kl,yli->xy", elems.conj(), rho, elems)
    residual = max_abs(gram - np.eye(d * d))
    if residual > tol:
        raise NoSolution(
            f"weighted Gram residual {residual:.3e} exceeds {tol}; "
            f"the family is not an orthonormal basis"
        )
    witness_dev = max_abs(rho - np.eye(d) / d)
    if witness_dev > tol:
        raise NoSolution(
            f"recovered weight deviates from I/d by {witness_dev:.3e} "
            f"despite a small residual"
        )
    return rho


def tensor_bases(b1: UnitaryBasis, b2: UnitaryBasis) -> UnitaryBasis:
    """Elementwise Kronecker products, a basis on the product space."""
    n2 = b2.d * b2.d
    elems = np.asarray(
        [
            np.kron(b1.elements[x], b2.elements[y])
            for x in range(b1.d * b1.d)
            for y in range(n2)
        ]
    )
    return UnitaryBasis(b1.d * b2.d, elems)


def apply_equivalence(
    basis: UnitaryBasis, v1, v2, relabel=None
) -> UnitaryBasis:
    """Map every element U to V1 U V2 after an optional relabelling.

    V1 and V2 must be unitary; the move preserves orthonormality exactly,
    which is what makes it an equivalence of bases.
    """
    d = basis.d
    for name, v in (("V1", v1), ("V2", v2)):
        v = np.asarray(v, dtype=complex)
        if v.shape != (d, d):
            raise DimensionMismatch(f"{name} has shape {v.shape}, expected ({d}, {d})")
        dev = max_abs(v.conj().T @ v - np.eye(d))
        if dev > DEFAULT_TOL:
            raise NotUnitary(f"{name} deviates from unitarity by {dev:.3e}")
    order = (
        np.arange(d * d)
        if relabel is None
        else as_permutation(relabel, d * d)
    )
    v1 = np.asarray(v1, dtype=complex)
    v2 = np.asarray(v2, dtype=complex)
    elems = np.einsum("ab,xbc,cd->xad", v1, basis.elements[order], v2)
    return UnitaryBasis(d, elems)
