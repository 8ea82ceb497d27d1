"""Command-line front end: generate, verify, simulate, count-latin.

Exit codes: 0 on success, 1 when a verification or simulation check fails,
2 on malformed input or bad parameters.  All randomness requires an
explicit ``--rng-seed``; default paths are fully deterministic.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bases import UnitaryBasis, shift_multiply_basis, verify_orthonormal, weyl_basis
from .common import DEFAULT_TOL
from .designs import (
    count_normalized_latin,
    fourier_hadamard,
    hadamard_d4_family,
    latin_equivalence_apply,
    latin_from_cyclic,
    periodic_phase_hadamard,
    validate_hadamard,
    validate_latin,
)
from .errors import DimensionTooLarge, SymbolOutOfRange, TightportError
from .schemes import (
    DENSE_CODING,
    TELEPORTATION,
    MaxEntangledBasis,
    basis_to_entangled,
    build_scheme,
    teleport_state,
    verify_dense_coding,
    verify_entangled_basis,
    verify_teleportation,
)
from .serialize import DesignDocument, document_to_object, load, make_document, save

_MODE_FLAGS = {"teleportation": TELEPORTATION, "dense-coding": DENSE_CODING}


def _err(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _load_as(path, kind: str):
    doc = load(path)
    if doc.kind != kind:
        raise TightportError(f"{path} holds a {doc.kind!r} document, expected {kind!r}")
    return document_to_object(doc)


# ---------------------------------------------------------------------------
# generate

def _generate_object(args):
    kind = args.kind
    construction = args.construction

    if kind == "latin":
        if construction == "cyclic":
            return latin_from_cyclic(_require(args, "d")), f"cyclic d={args.d}"
        if construction == "random":
            d = _require(args, "d")
            rng = _rng(args)
            p, q, r = (rng.permutation(d) for _ in range(3))
            square = latin_equivalence_apply(latin_from_cyclic(d), p, q, r)
            return square, f"random d={d} seed={args.rng_seed}"
        raise TightportError(f"unknown latin construction {construction!r}")

    if kind == "hadamard":
        if construction == "fourier":
            return fourier_hadamard(_require(args, "d")), f"fourier d={args.d}"
        if construction == "d4-family":
            if args.u_phase is None:
                raise TightportError("d4-family requires --u-phase")
            u = np.exp(1j * args.u_phase)
            return hadamard_d4_family(u), f"d4-family u-phase={args.u_phase}"
        if construction == "periodic":
            p, q = _require(args, "p"), _require(args, "q")
            d = p * q
            if args.rng_seed is None:
                cell = np.ones((d, d), dtype=complex)
            else:
                rng = _rng(args)
                angles = rng.uniform(0.0, 2.0 * np.pi, size=(p, q))
                cell = np.exp(1j * np.tile(angles, (d // p, d // q)))
            return (
                periodic_phase_hadamard(p, q, cell),
                f"periodic p={p} q={q} seed={args.rng_seed}",
            )
        raise TightportError(f"unknown hadamard construction {construction!r}")

    if kind == "unitary-basis":
        if construction == "weyl":
            return weyl_basis(_require(args, "d")), f"weyl d={args.d}"
        if construction == "shift-multiply":
            if not args.latin or not args.hadamards:
                raise TightportError("shift-multiply requires --latin and --hadamards")
            square = _load_as(args.latin, "latin")
            mats = [_load_as(path, "hadamard") for path in args.hadamards]
            if len(mats) == 1:
                mats = mats * square.d
            basis = shift_multiply_basis(square, mats)
            return basis, f"shift-multiply from {args.latin} + {len(args.hadamards)} hadamard file(s)"
        raise TightportError(f"unknown unitary-basis construction {construction!r}")

    if kind == "entangled-basis":
        basis = _load_as(_require(args, "from_basis"), "unitary_basis")
        return basis_to_entangled(basis), f"from basis {args.from_basis}"

    if kind == "scheme":
        basis = _load_as(_require(args, "from_basis"), "unitary_basis")
        mode = _MODE_FLAGS[args.mode]
        return build_scheme(basis, mode), f"{mode} scheme from basis {args.from_basis}"

    raise TightportError(f"unknown kind {kind!r}")


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise TightportError(f"--{name.replace('_', '-')} is required here")
    return value


def _rng(args) -> np.random.Generator:
    if args.rng_seed is None:
        raise TightportError("randomized generation requires --rng-seed")
    return np.random.default_rng(args.rng_seed)


def cmd_generate(args) -> int:
    obj, meta = _generate_object(args)
    save(make_document(obj, meta), args.output)
    print(f"wrote {args.kind} document to {args.output}")
    return 0


# ---------------------------------------------------------------------------
# verify

def _verify_document(doc: DesignDocument, tol: float):
    """Returns (passed, deviation, detail)."""
    if doc.kind == "latin":
        result = validate_latin(doc.payload["grid"])
        return result.passed, result.deviation, result.witness
    if doc.kind == "hadamard":
        result = validate_hadamard(doc.payload["matrix"], tol)
        return result.passed, result.deviation, result.witness
    if doc.kind == "unitary_basis":
        report = verify_orthonormal(UnitaryBasis(doc.d, doc.payload["elements"]), tol)
        deviation = max(report.max_deviation, report.unitarity_deviation)
        return report.passed, deviation, "Gram matrix or unitarity off identity"
    if doc.kind == "entangled_basis":
        result = verify_entangled_basis(
            MaxEntangledBasis(doc.d, doc.payload["vectors"]), tol
        )
        return result.passed, result.deviation, result.witness
    scheme = document_to_object(doc)
    if scheme.mode == TELEPORTATION:
        verdict = verify_teleportation(scheme, tol)
    else:
        verdict = verify_dense_coding(scheme, tol)
    return verdict.passed, verdict.max_deviation, verdict.worst_case


def cmd_verify(args) -> int:
    try:
        doc = load(args.file)
        passed, deviation, detail = _verify_document(doc, args.tol)
    except SymbolOutOfRange as exc:
        return _err(str(exc))
    label = f"{doc.kind} (d={doc.d})"
    if passed:
        print(f"PASS {label}: max deviation {deviation:.3e} within tol {args.tol:g}")
        return 0
    worst = f"; worst: {detail}" if detail else ""
    print(f"FAIL {label}: max deviation {deviation:.3e} exceeds tol {args.tol:g}{worst}")
    return 1


# ---------------------------------------------------------------------------
# simulate

def _input_state(spec: str, d: int, args) -> list[np.ndarray]:
    if spec == "maximally-mixed":
        return [np.eye(d, dtype=complex) / d] * args.trials
    if spec.startswith("pure:"):
        index = int(spec.split(":", 1)[1])
        if not 0 <= index < d:
            raise TightportError(f"pure state index {index} out of range for d={d}")
        rho = np.zeros((d, d), dtype=complex)
        rho[index, index] = 1.0
        return [rho] * args.trials
    if spec == "random":
        rng = _rng(args)
        states = []
        for _ in range(args.trials):
            g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            rho = g @ g.conj().T
            states.append(rho / np.trace(rho))
        return states
    raise TightportError(
        f"unknown state spec {spec!r}; use pure:<i>, maximally-mixed, or random"
    )


def cmd_simulate(args) -> int:
    scheme = _load_as(args.scheme, "scheme")
    states = _input_state(args.state, scheme.d, args)
    worst = 0.0
    histogram = np.zeros(scheme.d**2)
    for rho in states:
        output, probabilities = teleport_state(scheme, rho)
        worst = max(worst, float(np.abs(output - rho).max()))
        histogram += probabilities / len(states)
    print(f"max output deviation over {len(states)} trial(s): {worst:.3e}")
    print("outcome histogram [" + ", ".join(f"{p:.6f}" for p in histogram) + "]")
    if worst <= args.tol:
        print(f"PASS within tol {args.tol:g}")
        return 0
    print(f"FAIL: deviation exceeds tol {args.tol:g}")
    return 1


# ---------------------------------------------------------------------------
# count-latin

def cmd_count_latin(args) -> int:
    try:
        print(count_normalized_latin(args.d))
    except DimensionTooLarge as exc:
        return _err(str(exc))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tightport",
        description=(
            "Construct and verify unitary operator bases, entangled bases, and "
            "tight teleportation / dense-coding schemes."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="construct an object and write it to a file")
    gen.add_argument(
        "kind",
        choices=["latin", "hadamard", "unitary-basis", "entangled-basis", "scheme"],
    )
    gen.add_argument("--construction", default=None)
    gen.add_argument("--d", type=int, default=None)
    gen.add_argument("--u-phase", type=float, default=None, help="phase angle in radians")
    gen.add_argument("--p", type=int, default=None)
    gen.add_argument("--q", type=int, default=None)
    gen.add_argument("--latin", default=None)
    gen.add_argument("--hadamards", nargs="+", default=None)
    gen.add_argument("--from-basis", dest="from_basis", default=None)
    gen.add_argument("--mode", choices=sorted(_MODE_FLAGS), default="teleportation")
    gen.add_argument("--rng-seed", dest="rng_seed", type=int, default=None)
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify", help="check a document against its defining identities")
    ver.add_argument("file")
    ver.add_argument("--tol", type=float, default=DEFAULT_TOL)
    ver.set_defaults(func=cmd_verify)

    sim = sub.add_parser("simulate", help="teleport a state through a scheme file")
    sim.add_argument("scheme")
    sim.add_argument("--state", required=True)
    sim.add_argument("--trials", type=int, default=1)
    sim.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sim.add_argument("--rng-seed", dest="rng_seed", type=int, default=None)
    sim.set_defaults(func=cmd_simulate)

    cnt = sub.add_parser("count-latin", help="count normalized Latin squares")
    cnt.add_argument("d", type=int)
    cnt.set_defaults(func=cmd_count_latin)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (TightportError, OSError, ValueError) as exc:
        return _err(str(exc))


if __name__ == "__main__":
    sys.exit(main())
