"""Tight teleportation and dense-coding schemes.

A tight scheme moves quantum or classical information between two parties
who share an entangled resource on a d x d space, using a classical channel
with exactly d^2 signals.  Its components are always the same triple:

* a resource vector (the shared entangled state),
* d^2 channel unitaries (the sender's encodings, or the receiver's
  corrections, depending on direction),
* d^2 effect vectors forming a complete von Neumann measurement.

Built from a unitary basis, the triple satisfies the teleportation identity
(averaging the measure-and-correct protocol over outcomes reproduces every
input state exactly) and the dense-coding identity (the receiver's outcome
matrix is exactly the identity).  The verifiers here evaluate both
identities on spanning probe sets, so a pass is complete by linearity, and
the converse direction is exercised by feeding them deliberately damaged
resources.

Phase convention: operators extracted from entangled vectors keep the phase
the correspondence delivers; round-trip equality assertions are therefore
phrased modulo a global phase per element.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .bases import UnitaryBasis, verify_orthonormal
from .common import DEFAULT_TOL, CheckResult
from .errors import (
    DimensionMismatch,
    NotDensityOperator,
    NotMaximallyEntangled,
    NotUnitaryExtraction,
    SchemeInvalid,
)
from .tensor import (
    is_maximally_entangled,
    check_projector_completeness,
    max_abs,
    omega_vector,
    partial_trace,
    vector_to_operator,
)

__all__ = [
    "TELEPORTATION",
    "DENSE_CODING",
    "MODES",
    "MaxEntangledBasis",
    "TightScheme",
    "SchemeVerdict",
    "basis_to_entangled",
    "entangled_to_basis",
    "build_scheme",
    "verify_teleportation",
    "verify_dense_coding",
    "verify_entangled_basis",
    "swap_roles",
    "teleport_state",
    "extract_basis_from_scheme",
]

TELEPORTATION = "teleportation"
DENSE_CODING = "dense_coding"
MODES = (TELEPORTATION, DENSE_CODING)


@dataclass(frozen=True)
class MaxEntangledBasis:
    """d^2 vectors on the d x d space, stacked as a (d^2, d^2) array.

    Constructors guarantee pairwise orthonormality and maximal entanglement
    of every vector; the dataclass itself checks shapes only so damaged
    families can be loaded and diagnosed.
    """

    d: int
    vectors: np.ndarray

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=complex)
        if vecs.shape != (self.d * self.d, self.d * self.d):
            raise DimensionMismatch(
                f"expected {self.d ** 2} vectors of length {self.d ** 2}, "
                f"got array of shape {vecs.shape}"
            )
        vecs = vecs.copy()
        vecs.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)


@dataclass(frozen=True)
class TightScheme:
    """Shared components of a teleportation or dense-coding scheme.

    ``omega`` is normally the resource vector (length d^2); a (d^2, d^2)
    density matrix is also accepted so the verifiers can probe mixed
    resources, which no valid scheme can actually have.  ``mode`` records
    which identity the scheme is meant to satisfy; the components
    themselves are direction-agnostic.
    """

    d: int
    omega: np.ndarray
    channel_unitaries: np.ndarray
    effects: MaxEntangledBasis
    mode: str

    def __post_init__(self):
        d = self.d
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        omega = np.asarray(self.omega, dtype=complex)
        if omega.shape not in ((d * d,), (d * d, d * d)):
            raise DimensionMismatch(
                f"resource must be a vector of length {d * d} or a "
                f"({d * d}, {d * d}) density matrix, got shape {omega.shape}"
            )
        unitaries = np.asarray(self.channel_unitaries, dtype=complex)
        if unitaries.shape != (d * d, d, d):
            raise DimensionMismatch(
                f"expected {d ** 2} channel matrices of shape ({d}, {d}), "
                f"got array of shape {unitaries.shape}"
            )
        if self.effects.d != d:
            raise DimensionMismatch(
                f"effect vectors live at d={self.effects.d}, scheme has d={d}"
            )
        omega = omega.copy()
        omega.setflags(write=False)
        unitaries = unitaries.copy()
        unitaries.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "channel_unitaries", unitaries)

    def resource_density(self) -> np.ndarray:
        """The resource as a density matrix on the d x d space."""
        if self.omega.ndim == 1:
            return np.outer(self.omega, self.omega.conj())
        return self.omega


@dataclass(frozen=True)
class SchemeVerdict:
    """Result of checking one of the two defining identities.

    ``table`` carries the full outcome matrix for dense coding (rows are
    outcome distributions) and is None for teleportation.
    """

    mode: str
    max_deviation: float
    worst_case: str
    passed: bool
    table: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.passed


def _act_on_first(op: np.ndarray, vec: np.ndarray, d: int) -> np.ndarray:
    """(op (x) I) applied to a vector on the d x d space."""
    return (op @ vec.reshape(d, d)).reshape(-1)


def basis_to_entangled(
    basis: UnitaryBasis, omega=None, tol: float = DEFAULT_TOL
) -> MaxEntangledBasis:
    """Apply each basis element to the first factor of a reference vector.

    With a unitary basis and a maximally entangled reference, the images are
    pairwise orthonormal and each is maximally entangled.  The reference
    defaults to ``omega_vector(d)``.
    """
    d = basis.d
    ref = omega_vector(d) if omega is None else np.asarray(omega, dtype=complex)
    check = is_maximally_entangled(ref, d, tol)
    if not check:
        raise NotMaximallyEntangled(
            f"reference vector deviates from maximal entanglement by {check.deviation:.3e}"
        )
    vecs = np.asarray([_act_on_first(u, ref, d) for u in basis.elements])
    return MaxEntangledBasis(d, vecs)


def entangled_to_basis(
    entangled: MaxEntangledBasis, omega=None, tol: float = DEFAULT_TOL
) -> UnitaryBasis:
    """Read the unitary family back off an entangled basis.

    Inverts :func:`basis_to_entangled` for the same reference vector: with
    the canonical reference the operator of each vector is taken directly,
    and a non-canonical reference contributes one extra unitary factor that
    is divided out.  A vector whose operator is not unitary (for example a
    product vector) raises ``NotUnitaryExtraction``.
    """
    d = entangled.d
    ref = omega_vector(d) if omega is None else np.asarray(omega, dtype=complex)
    check = is_maximally_entangled(ref, d, tol)
    if not check:
        raise NotMaximallyEntangled(
            f"reference vector deviates from maximal entanglement by {check.deviation:.3e}"
        )
    ref_op = vector_to_operator(ref, d)
    eye = np.eye(d)
    ops = []
    for x, vec in enumerate(entangled.vectors):
        op = vector_to_operator(vec, d) @ ref_op.conj().T
        dev = max_abs(op.conj().T @ op - eye)
        if dev > tol:
            raise NotUnitaryExtraction(
                f"vector {x} yields an operator {dev:.3e} away from unitarity"
            )
        ops.append(op)
    return UnitaryBasis(d, np.asarray(ops))


def build_scheme(basis: UnitaryBasis, mode: str = TELEPORTATION) -> TightScheme:
    """Assemble the scheme triple generated by a unitary basis.

    The resource is the canonical maximally entangled vector, the channels
    conjugate by the basis elements, and the effects project onto the
    entangled basis obtained from the same elements.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    d = basis.d
    ref = omega_vector(d)
    effects = basis_to_entangled(basis, ref)
    return TightScheme(d, ref, basis.elements, effects, mode)


def verify_teleportation(
    scheme: TightScheme, tol: float = DEFAULT_TOL, require_mode: bool = True
) -> SchemeVerdict:
    """Evaluate the teleportation identity on all pairs of matrix units.

    For input state rho and observable A, summing over outcomes the joint
    probability of measuring x on (input, resource-left) and then finding A
    on the corrected right half must reproduce tr(rho A) exactly.  Matrix
    units span, so checking all d^4 (rho, A) pairs settles the identity for
    every state and observable.
    """
    if require_mode and scheme.mode != TELEPORTATION:
        raise SchemeInvalid(
            f"scheme mode is {scheme.mode!r}; use swap_roles() or require_mode=False"
        )
    d = scheme.d
    omega4 = scheme.resource_density().reshape(d, d, d, d)
    lhs = np.zeros((d, d, d, d), dtype=complex)
    for x in range(d * d):
        phi = scheme.effects.vectors[x].reshape(d, d)
        u = scheme.channel_unitaries[x]
        lhs += np.einsum(
            "jkmn,bm,aj,cn,dk->abcd",
            omega4,
            phi,
            phi.conj(),
            u.conj(),
            u,
            optimize=True,
        )
    eye = np.eye(d)
    target = np.einsum("bc,ad->abcd", eye, eye)
    gap = np.abs(lhs - target)
    deviation = float(gap.max())
    a, b, c, dd = np.unravel_index(int(gap.argmax()), gap.shape)
    worst = f"state unit E[{a},{b}], observable unit E[{c},{dd}]"
    return SchemeVerdict(TELEPORTATION, deviation, worst, deviation <= tol)


def verify_dense_coding(scheme: TightScheme, tol: float = DEFAULT_TOL) -> SchemeVerdict:
    """Compute the full outcome matrix and check it against the identity.

    Entry (x, y) is the probability of decoding y when x was encoded:
    the sender conjugates the resource's left half by channel x, and the
    receiver projects onto effect y.  Each row is an outcome distribution
    regardless of validity; validity means the matrix is exactly I.
    """
    d = scheme.d
    rho = scheme.resource_density()
    eye = np.eye(d, dtype=complex)
    vecs = scheme.effects.vectors
    table = np.zeros((d * d, d * d))
    for x in range(d * d):
        big = np.kron(scheme.channel_unitaries[x], eye)
        moved = big @ rho @ big.conj().T
        table[x] = np.real(np.einsum("yi,ij,yj->y", vecs.conj(), moved, vecs))
    gap = np.abs(table - np.eye(d * d))
    deviation = float(gap.max())
    x, y = np.unravel_index(int(gap.argmax()), gap.shape)
    worst = f"encoded {x}, decoded {y}"
    return SchemeVerdict(DENSE_CODING, deviation, worst, deviation <= tol, table)


def verify_entangled_basis(
    entangled: MaxEntangledBasis, tol: float = DEFAULT_TOL
) -> CheckResult:
    """Check both defining properties of an entangled basis.

    The vectors must resolve the identity on the d^2-dimensional space
    (equivalently, be pairwise orthonormal) and each must have reduced
    operator I/d.  Reports the worse of the two deviations.
    """
    d = entangled.d
    completeness = check_projector_completeness(entangled.vectors, tol)
    worst = completeness.deviation
    witness = completeness.witness
    target = np.eye(d) / d
    for x, vec in enumerate(entangled.vectors):
        reduced = partial_trace(np.outer(vec, vec.conj()), (d, d), "second")
        dev = max_abs(reduced - target)
        if dev > worst:
            worst = dev
            witness = f"vector {x} is not maximally entangled"
    return CheckResult(worst <= tol, worst, witness if worst > tol else None)


def swap_roles(scheme: TightScheme) -> TightScheme:
    """Flip the scheme's direction; the parties exchange equipment.

    The component triple is untouched: a valid teleportation scheme read in
    the other direction is a valid dense-coding scheme and conversely.
    """
    other = DENSE_CODING if scheme.mode == TELEPORTATION else TELEPORTATION
    return replace(scheme, mode=other)


def _check_density(rho: np.ndarray, d: int, tol: float) -> None:
    if rho.shape != (d, d):
        raise NotDensityOperator(f"state shape {rho.shape} is not ({d}, {d})")
    if max_abs(rho - rho.conj().T) > tol:
        raise NotDensityOperator("state is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise NotDensityOperator(f"state trace {np.trace(rho):.6f} is not 1")
    if float(np.linalg.eigvalsh(rho).min()) < -tol:
        raise NotDensityOperator("state has a negative eigenvalue")


def teleport_state(
    scheme: TightScheme, rho, tol: float = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate the measure-and-correct protocol on one input state.

    Returns the outcome-averaged output state and the d^2 outcome
    probabilities.  For a valid scheme the output equals the input and the
    outcomes are uniform at 1/d^2.  Outcomes with probability below 1e-14
    contribute no conditional state and their weight is dropped (this
    cannot happen for valid schemes).
    """
    d = scheme.d
    rho = np.asarray(rho, dtype=complex)
    _check_density(rho, d, tol)
    resource = scheme.resource_density()
    joint = np.kron(rho, resource)
    eye = np.eye(d, dtype=complex)
    output = np.zeros((d, d), dtype=complex)
    probabilities = np.zeros(d * d)
    for x in range(d * d):
        phi = scheme.effects.vectors[x]
        effect = np.kron(np.outer(phi, phi.conj()), eye)
        conditional = partial_trace(joint @ effect, (d * d, d), "first")
        p = float(np.trace(conditional).real)
        probabilities[x] = p
        if p < 1e-14:
            continue
        u = scheme.channel_unitaries[x]
        output += u @ conditional @ u.conj().T
    return output, probabilities


def extract_basis_from_scheme(scheme: TightScheme, tol: float = DEFAULT_TOL) -> UnitaryBasis:
    """Recover the unitary basis generating a verified scheme.

    The scheme must pass the verifier of its own mode; extraction is only
    guaranteed for valid schemes, so failures raise ``SchemeInvalid``.  The
    recovered elements may differ from the generating ones by global
    phases, which affect neither the channels nor the effects.
    """
    if scheme.mode == TELEPORTATION:
        verdict = verify_teleportation(scheme, tol)
    else:
        verdict = verify_dense_coding(scheme, tol)
    if not verdict:
        raise SchemeInvalid(
            f"{scheme.mode} identity fails by {verdict.max_deviation:.3e} "
            f"at {verdict.worst_case}; cannot extract a basis"
        )
    if scheme.omega.ndim == 1:
        ref = scheme.omega
    else:
        # A verified scheme has a pure resource; peel the vector off.
        values, vectors = np.linalg.eigh(scheme.omega)
        if abs(values[-1] - 1.0) > tol:
            raise SchemeInvalid("resource of a verified scheme should be pure")
        ref = vectors[:, -1]
    basis = entangled_to_basis(scheme.effects, ref, tol)
    report = verify_orthonormal(basis, tol)
    if not report:
        raise SchemeInvalid(
            f"extracted family fails orthonormality by {report.max_deviation:.3e}"
        )
    return basis
