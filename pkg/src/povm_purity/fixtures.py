"""Built-in example measurements, all on qubits."""

from __future__ import annotations

import numpy as np

from .povm import Povm, validate

__all__ = ["FIXTURE_NAMES", "fixture"]


def _ket(*amps) -> np.ndarray:
    v = np.asarray(amps, dtype=np.complex128)
    return v / np.linalg.norm(v)


def _proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def _computational_pvm_d2() -> Povm:
    return validate(2, [("0", np.diag([1.0, 0.0])), ("1", np.diag([0.0, 1.0]))])


def _coin() -> Povm:
    # Labels shared with the computational PVM so the two can be compared
    # (mixed, channel-connected) without relabeling.
    half = np.eye(2) / 2.0
    return validate(2, [("0", half), ("1", half)])


def _trine() -> Povm:
    outcomes = []
    for k in range(3):
        phi = _ket(1.0, np.exp(2j * np.pi * k / 3.0))
        outcomes.append((f"t{k}", (2.0 / 3.0) * _proj(phi)))
    return validate(2, outcomes)


def _qubit_sic() -> Povm:
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    sz = np.diag([1.0, -1.0])
    vertices = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    outcomes = []
    for k, (x, y, z) in enumerate(vertices):
        bloch = np.array([x, y, z]) / np.sqrt(3.0)
        outcomes.append((f"s{k}", (np.eye(2) + bloch[0] * sx + bloch[1] * sy + bloch[2] * sz) / 4.0))
    return validate(2, outcomes)


def _mixed_basis_4() -> Povm:
    plus = _ket(1.0, 1.0)
    minus = _ket(1.0, -1.0)
    return validate(
        2,
        [
            ("z0", np.diag([0.5, 0.0])),
            ("z1", np.diag([0.0, 0.5])),
            ("x+", _proj(plus) / 2.0),
            ("x-", _proj(minus) / 2.0),
        ],
    )


def _smeared_pvm_d2() -> Povm:
    return validate(2, [("0", np.diag([0.75, 0.25])), ("1", np.diag([0.25, 0.75]))])


_BUILDERS = {
    "computational-pvm-d2": _computational_pvm_d2,
    "coin": _coin,
    "trine": _trine,
    "qubit-sic": _qubit_sic,
    "mixed-basis-4": _mixed_basis_4,
    "smeared-pvm-d2": _smeared_pvm_d2,
}

FIXTURE_NAMES = tuple(_BUILDERS)


def fixture(name: str) -> Povm:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; one of {FIXTURE_NAMES}") from None
