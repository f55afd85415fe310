"""Entanglement-swapping analysis: Bell-basis decomposition, Bell-state
projection of the middle pair, conditional state of the outer pair, and
fidelity/visibility/CHSH metrics.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .states import (
    BELL_KINDS,
    DensityMatrix,
    PureState,
    StateError,
    bell_state,
    fidelity,
    tensor,
)

_I2 = np.eye(2, dtype=complex)

# Bell amplitudes over (HH, HV, VH, VV), matching bell_state()
_BELL_VECS = {
    "psi+": np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2),
    "psi-": np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2),
    "phi+": np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2),
}


@dataclass(frozen=True)
class SwapResult:
    conditioned_state_14: DensityMatrix
    projection_probability: float
    fidelity_to_target: float
    visibility_45: float

    def as_dict(self) -> dict:
        return {
            "projection_probability": self.projection_probability,
            "fidelity_to_target": self.fidelity_to_target,
            "visibility_45": self.visibility_45,
        }


def bell_decompose(
    state: PureState,
    pair_a: tuple[int, int] = (1, 4),
    pair_b: tuple[int, int] = (2, 3),
) -> dict[tuple[str, str], complex]:
    """Coefficients of a four-photon state in the Bell x Bell product basis.

    Keys are (kind on pair_a, kind on pair_b). Summing coefficient x basis
    state reproduces the input.
    """
    if state.photon_count != 4:
        raise StateError("Bell decomposition needs a four-photon state")
    if set(pair_a) | set(pair_b) != set(state.photons):
        raise StateError("pairs must partition the state's photons")
    modes_a = tuple(state.fixed_mode(p) for p in pair_a)
    modes_b = tuple(state.fixed_mode(p) for p in pair_b)
    out: dict[tuple[str, str], complex] = {}
    for ka, kb in itertools.product(BELL_KINDS, repeat=2):
        basis = tensor(
            bell_state(ka, *pair_a, modes=modes_a),
            bell_state(kb, *pair_b, modes=modes_b),
        )
        out[(ka, kb)] = basis.inner(state)
    return out


def _as_density(state_or_rho, mode_order: Sequence[str] | None) -> DensityMatrix:
    if isinstance(state_or_rho, DensityMatrix):
        return state_or_rho
    if mode_order is None:
        mode_order = sorted({m for ket in state_or_rho.amps for _, m in ket})
    return DensityMatrix.from_pure(state_or_rho, mode_order)


def _embed_pair_operator(op4: np.ndarray, n: int, pos: tuple[int, int]) -> np.ndarray:
    """Embed a two-qubit operator at tensor positions `pos` of an n-qubit space."""
    full = op4
    for _ in range(n - 2):
        full = np.kron(full, _I2)
    # `full` acts on qubit order (pos[0], pos[1], rest...); permute to natural order
    order = list(pos) + [i for i in range(n) if i not in pos]
    inv = list(np.argsort(order))
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(inv + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


def _trace_out(rho: np.ndarray, n: int, pos: tuple[int, int]) -> np.ndarray:
    """Partial trace over the qubits at tensor positions `pos`."""
    t = rho.reshape((2,) * (2 * n))
    for p in sorted(pos, reverse=True):
        t = np.trace(t, axis1=p, axis2=p + (t.ndim // 2))
        # after tracing, the remaining axes re-pair automatically
    k = n - len(pos)
    return t.reshape(2**k, 2**k)


def _conditioned_pair_state(
    rho: DensityMatrix, pair_modes: Sequence[str], kraus_ops: list[np.ndarray]
) -> tuple[np.ndarray, float, tuple[str, ...]]:
    """Sum of Kraus-projected states, traced down to the remaining pair."""
    n = len(rho.modes)
    pos = tuple(rho.modes.index(m) for m in pair_modes)
    acc = np.zeros_like(rho.matrix)
    for k4 in kraus_ops:
        k_full = _embed_pair_operator(k4, n, pos)
        acc += k_full @ rho.matrix @ k_full.conj().T
    prob = float(np.trace(acc).real)
    rest_modes = tuple(m for m in rho.modes if m not in pair_modes)
    reduced = _trace_out(acc, n, pos)
    return reduced, prob, rest_modes


def _finish(
    reduced: np.ndarray, prob: float, rest_modes: tuple[str, ...]
) -> SwapResult:
    if prob <= 1e-30:
        raise StateError("zero-probability Bell projection")
    rho14 = DensityMatrix(rest_modes, reduced / prob)
    target = bell_state("phi+", 1, 2, modes=rest_modes)
    f = fidelity(rho14, target)
    return SwapResult(
        conditioned_state_14=rho14,
        projection_probability=prob,
        fidelity_to_target=f,
        visibility_45=2.0 * f - 1.0,
    )


def project_bell(
    state_or_rho,
    pair_modes: Sequence[str],
    kind: str,
    mode_order: Sequence[str] | None = None,
) -> SwapResult:
    """Project the photons in `pair_modes` onto a Bell state.

    Returns the conditional state of the remaining two photons, the
    projection probability, and fidelity/visibility relative to |phi+>.
    """
    if kind not in BELL_KINDS:
        raise StateError(f"unknown Bell kind {kind!r}")
    rho = _as_density(state_or_rho, mode_order)
    v = _BELL_VECS[kind]
    proj = np.outer(v, v.conj())
    return _finish(*_conditioned_pair_state(rho, pair_modes, [proj]))


def phi_plus_via_45_coincidence(
    state_or_rho,
    pair_modes: Sequence[str] = ("2'", "3'"),
    mode_order: Sequence[str] | None = None,
) -> SwapResult:
    """Operational phi+ identification: +45/+45 or -45/-45 coincidences.

    Each coincidence outcome is a separate detection event, so the
    conditional state is the mixture over the two outcomes. On the PBS
    coincidence subspace (no psi+- component in the analyzed pair) this
    equals the abstract phi+ projection.
    """
    rho = _as_density(state_or_rho, mode_order)
    s = 1 / math.sqrt(2)
    plus = np.array([s, s], dtype=complex)
    minus = np.array([s, -s], dtype=complex)
    kraus = []
    for v1 in (plus, minus):
        v = np.kron(v1, v1)
        kraus.append(np.outer(v, v.conj()))
    return _finish(*_conditioned_pair_state(rho, pair_modes, kraus))


def visibility_from_counts(
    counts: Mapping[str, int],
    even_parity_keys: Sequence[str],
    odd_parity_keys: Sequence[str],
) -> tuple[float, float]:
    """Raw-data visibility (Ne - No)/(Ne + No) with first-order Poisson error.

    error = 2 sqrt(Ne * No / (Ne + No)^3).
    """
    ne = sum(counts[k] for k in even_parity_keys)
    no = sum(counts[k] for k in odd_parity_keys)
    total = ne + no
    if total == 0:
        raise StateError("visibility needs at least one count")
    v = (ne - no) / total
    err = 2.0 * math.sqrt(ne * no / total**3)
    return v, err


def _analyzer_operator(angle_deg: float) -> np.ndarray:
    """+1/-1 valued polarization observable at the given analyzer angle."""
    t = math.radians(angle_deg)
    a = np.array([math.cos(t), math.sin(t)])
    b = np.array([math.sin(t), -math.cos(t)])
    return np.outer(a, a) - np.outer(b, b)


def correlation(rho_pair: DensityMatrix, angle_a: float, angle_b: float) -> float:
    """E(a, b) = <sigma(a) x sigma(b)> for a two-photon density matrix."""
    if len(rho_pair.modes) != 2:
        raise StateError("correlation needs a two-photon density matrix")
    op = np.kron(_analyzer_operator(angle_a), _analyzer_operator(angle_b))
    return float(np.trace(rho_pair.matrix @ op).real)


CHSH_PHI_PLUS_SETTINGS = ((0.0, 45.0), (22.5, 67.5))


def chsh_value(
    rho_pair: DensityMatrix,
    settings: tuple[tuple[float, float], tuple[float, float]] = CHSH_PHI_PLUS_SETTINGS,
) -> float:
    """S = E(a,b) - E(a,b') + E(a',b) + E(a',b'); |S| <= 2 for LHV models.

    The default settings are optimal for |phi+> (S = 2 sqrt 2).
    """
    (a, ap), (b, bp) = settings
    return (
        correlation(rho_pair, a, b)
        - correlation(rho_pair, a, bp)
        + correlation(rho_pair, ap, b)
        + correlation(rho_pair, ap, bp)
    )


def write_swap_report(path, result: SwapResult, chsh: float | None = None) -> None:
    data = result.as_dict()
    if chsh is not None:
        data["chsh_value"] = chsh
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
