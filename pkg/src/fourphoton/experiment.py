"""Apparatus composition, post-selection, exact outcome probabilities, and
seeded Monte Carlo coincidence counting.

The default apparatus mirrors the two-pair source + PBS layout: singlet
pairs on photons (1,2) and (3,4), a PBS combining modes 2 and 3 into 2' and
3', and detectors D1..D4 watching modes 1, 2', 3', 4. Four-fold coincidence
post-selection keeps only kets with exactly one photon per detector mode.

Rates are calibrated to the reported summary statistics: 0.5 background
four-fold counts per non-desired combination in 6000 s, and a 200:1 ratio
of each desired combination to that background.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .elements import DelayElement, PbsElement, apply_pbs, dephase_by_distinguishability, distinguishability
from .states import (
    PureState,
    StateError,
    detection_amplitude,
    spdc_pair,
    tensor,
)


class PostselectionError(StateError):
    """Post-selection left no surviving amplitude."""


@dataclass(frozen=True)
class PairSource:
    """One down-conversion pair: photon indices and their initial modes."""

    photons: tuple[int, int]
    modes: tuple[str, str]


@dataclass(frozen=True)
class Apparatus:
    sources: tuple[PairSource, ...]
    elements: tuple[PbsElement, ...]
    detectors: Mapping[str, str]  # detector id -> mode

    def __post_init__(self):
        modes = list(self.detectors.values())
        if len(set(modes)) != len(modes):
            raise StateError("each detector must watch a distinct mode")

    def detector_ids(self) -> list[str]:
        return sorted(self.detectors)

    def mode_order(self) -> list[str]:
        return [self.detectors[d] for d in self.detector_ids()]


def default_apparatus(pbs_error: float = 0.0) -> Apparatus:
    return Apparatus(
        sources=(
            PairSource((1, 2), ("1", "2")),
            PairSource((3, 4), ("3", "4")),
        ),
        elements=(
            PbsElement(("2", "3"), ("2'", "3'"), error_rate=pbs_error),
        ),
        detectors={"D1": "1", "D2": "2'", "D3": "3'", "D4": "4"},
    )


@dataclass(frozen=True)
class MeasurementSetting:
    """Per-detector analyzer angles in degrees; None means pass-through."""

    angles: Mapping[str, float | None]

    def angle(self, detector: str) -> float | None:
        return self.angles.get(detector)

    @staticmethod
    def labels(angle: float | None) -> tuple[str, str]:
        """Outcome symbols for the pass/reject analyzer ports."""
        if angle == 0.0:
            return ("H", "V")
        return ("+", "-")


def hv_setting(apparatus: Apparatus) -> MeasurementSetting:
    return MeasurementSetting({d: 0.0 for d in apparatus.detector_ids()})


def diagonal_setting(apparatus: Apparatus) -> MeasurementSetting:
    return MeasurementSetting({d: 45.0 for d in apparatus.detector_ids()})


@dataclass(frozen=True)
class RateModel:
    """Count-rate calibration for the Monte Carlo engine.

    fourfold_rate_desired is the rate of the two desired outcomes combined;
    the default (1/30 per second) makes each desired combination 200 times
    the 0.5-per-6000-s background floor.
    """

    fourfold_rate_desired: float = 200.0 / 6000.0
    background_fourfold_rate: float = 0.5 / 6000.0
    detector_efficiency: float = 1.0
    dark_count_rate: float = 0.0
    coincidence_window: float = 3e-9

    def __post_init__(self):
        if self.fourfold_rate_desired < 0 or self.background_fourfold_rate < 0:
            raise StateError("rates must be nonnegative")
        if not 0.0 < self.detector_efficiency <= 1.0:
            raise StateError("detector efficiency must lie in (0, 1]")
        if self.dark_count_rate < 0:
            raise StateError("dark count rate must be nonnegative")
        if self.coincidence_window <= 0:
            raise StateError("coincidence window must be positive")

    def effective_fourfold_rate(self) -> float:
        return self.fourfold_rate_desired * self.detector_efficiency**4

    def accidental_fourfold_rate(self) -> float:
        # four independent dark counts landing in one window
        return self.dark_count_rate**4 * self.coincidence_window**3


@dataclass(frozen=True)
class CountTable:
    counts: Mapping[str, int]
    integration_time: float
    seed: int

    def total(self) -> int:
        return sum(self.counts.values())


def source_state(apparatus: Apparatus) -> PureState:
    state = None
    for src in apparatus.sources:
        pair = spdc_pair(*src.photons, modes=src.modes)
        state = pair if state is None else tensor(state, pair)
    if state is None:
        raise StateError("apparatus declares no sources")
    return state


def postselect_fourfold(
    state: PureState, modes: Sequence[str]
) -> tuple[PureState, float]:
    """Keep kets with exactly one photon in each listed mode; renormalize.

    Returns (state, surviving probability mass).
    """
    wanted = sorted(modes)
    kept = {
        ket: a
        for ket, a in state.amps.items()
        if sorted(m for _, m in ket) == wanted
    }
    prob = sum(abs(a) ** 2 for a in kept.values())
    if prob <= 1e-30:
        raise PostselectionError(
            f"no amplitude with one photon in each of {list(modes)}"
        )
    return PureState(state.photons, kept), prob


def ghz_after_postselection(
    apparatus: Apparatus, flipped_photons: frozenset = frozenset()
) -> tuple[PureState, float]:
    """Run sources through the elements and post-select on the detector modes."""
    state = source_state(apparatus)
    for el in apparatus.elements:
        state = apply_pbs(state, el, flipped_photons)
    return postselect_fourfold(state, apparatus.mode_order())


def _branch_mixture(
    state: PureState, visibility: float
) -> list[tuple[float, PureState]]:
    """Two-branch phase-flip mixture with the given interference visibility."""
    kets = state.kets()
    if len(kets) == 1 or visibility >= 1.0:
        return [(1.0, state)]
    if len(kets) != 2:
        raise StateError("dephasing expects at most two branches")
    k0, k1 = kets
    flipped = PureState(state.photons, {k0: state.amps[k0], k1: -state.amps[k1]})
    w = (1.0 + visibility) / 2.0
    return [(w, state), (1.0 - w, flipped)]


def _outcomes(apparatus: Apparatus, setting: MeasurementSetting):
    """Iterate (key, angles, branches) over all analyzer outcome combinations."""
    dets = apparatus.detector_ids()
    per_det = []
    for d in dets:
        ang = setting.angle(d)
        lab = MeasurementSetting.labels(ang)
        eff_ang = 0.0 if ang is None else ang
        per_det.append(
            [(lab[0], eff_ang, "pass"), (lab[1], eff_ang, "reject")]
        )
    for combo in itertools.product(*per_det):
        key = "".join(sym for sym, _, _ in combo)
        angles = [a for _, a, _ in combo]
        branches = [b for _, _, b in combo]
        yield key, angles, branches


def exact_outcome_probabilities(
    apparatus: Apparatus,
    setting: MeasurementSetting,
    delay: DelayElement | None = None,
    v0: float = 0.79,
    pbs_error: float | None = None,
) -> dict[str, float]:
    """Probabilities over the 16 analyzer outcomes, conditioned on a
    four-fold coincidence.

    `pbs_error` mixes in incoherent wrong-port routing per PBS photon (the
    Monte Carlo engine passes the element's configured rate; the exact path
    defaults to the ideal PBS).
    """
    d = 1.0 if delay is None else distinguishability(delay)
    vis = d * v0
    err = 0.0 if pbs_error is None else pbs_error

    pbs_photons: list[int] = []
    if err > 0.0:
        in_modes = {m for el in apparatus.elements for m in el.input_modes}
        for src in apparatus.sources:
            for ph, mode in zip(src.photons, src.modes):
                if mode in in_modes:
                    pbs_photons.append(ph)

    patterns: list[tuple[float, frozenset]] = []
    if err == 0.0:
        patterns.append((1.0, frozenset()))
    else:
        for r in range(len(pbs_photons) + 1):
            for subset in itertools.combinations(pbs_photons, r):
                w = err ** len(subset) * (1 - err) ** (len(pbs_photons) - len(subset))
                patterns.append((w, frozenset(subset)))

    mode_order = apparatus.mode_order()
    totals = {key: 0.0 for key, _, _ in _outcomes(apparatus, setting)}
    total_mass = 0.0
    for w_pat, flipped in patterns:
        try:
            state, p_sel = ghz_after_postselection(apparatus, flipped)
        except PostselectionError:
            continue
        mixture = _branch_mixture(state, vis)
        total_mass += w_pat * p_sel
        for key, angles, branches in _outcomes(apparatus, setting):
            p = sum(
                wb * abs(detection_amplitude(psi, mode_order, angles, branches)) ** 2
                for wb, psi in mixture
            )
            totals[key] += w_pat * p_sel * p
    if total_mass <= 0.0:
        raise PostselectionError("no routing pattern survives post-selection")
    return {k: v / total_mass for k, v in totals.items()}


def monte_carlo_counts(
    apparatus: Apparatus,
    setting: MeasurementSetting,
    rates: RateModel,
    integration_time: float,
    seed: int,
    delay: DelayElement | None = None,
    v0: float = 0.79,
) -> CountTable:
    """Seeded Poisson draw of four-fold coincidence counts per outcome.

    Expected count per outcome = exact probability x desired four-fold rate
    x time, plus a flat background (and dark-count accidental) floor.
    Deterministic for a given seed (numpy PCG64).
    """
    pbs_err = max((el.error_rate for el in apparatus.elements), default=0.0)
    probs = exact_outcome_probabilities(
        apparatus, setting, delay=delay, v0=v0, pbs_error=pbs_err or None
    )
    rate = rates.effective_fourfold_rate()
    floor = rates.background_fourfold_rate + rates.accidental_fourfold_rate()
    rng = np.random.default_rng(seed)
    counts = {}
    for key in probs:
        lam = (probs[key] * rate + floor) * integration_time
        counts[key] = int(rng.poisson(lam)) if lam > 0 else 0
    return CountTable(counts=counts, integration_time=integration_time, seed=seed)


def derive_point_seed(seed: int, point_index: int) -> int:
    """Deterministic per-point stream seed for parallel-safe scans."""
    return int(np.random.SeedSequence([seed, point_index]).generate_state(1)[0])


def delay_scan(
    apparatus: Apparatus,
    setting: MeasurementSetting,
    delays_fs: Sequence[float],
    rates: RateModel,
    time_per_point: float,
    seed: int,
    coherence_time_fs: float = 550.0,
    v0: float = 0.79,
) -> list[tuple[float, CountTable]]:
    """One Monte Carlo count table per delay; independent stream per point."""
    out = []
    for i, tau in enumerate(delays_fs):
        table = monte_carlo_counts(
            apparatus,
            setting,
            rates,
            time_per_point,
            derive_point_seed(seed, i),
            delay=DelayElement(tau, coherence_time_fs),
            v0=v0,
        )
        out.append((tau, table))
    return out


def three_photon_ghz(
    apparatus: Apparatus, polarizer_mode: str, angle: float
) -> tuple[PureState, float]:
    """Condition the four-photon GHZ state on a polarizer in one output.

    Returns the conditional state of the remaining three photons and the
    projection probability, given that post-selection already produced the
    four-photon GHZ state.
    """
    state, _ = ghz_after_postselection(apparatus)
    t = math.radians(angle)
    vec = {"H": math.cos(t), "V": math.sin(t)}

    idx_by_ket = {}
    amps: dict[tuple, complex] = {}
    dropped = None
    for ket, a in state.amps.items():
        hits = [i for i, (_, m) in enumerate(ket) if m == polarizer_mode]
        if len(hits) != 1:
            raise StateError(f"mode {polarizer_mode!r} must hold exactly one photon")
        i = hits[0]
        dropped = state.photons[i]
        overlap = vec[ket[i][0]]
        if overlap == 0.0:
            continue
        rest = ket[:i] + ket[i + 1 :]
        amps[rest] = amps.get(rest, 0.0) + a * overlap
    if not amps:
        raise PostselectionError("polarizer projection has zero probability")
    p_proj = sum(abs(a) ** 2 for a in amps.values())
    photons = tuple(p for p in state.photons if p != dropped)
    return PureState(photons, amps), p_proj


def feasibility_estimate(target_events: int, rates: RateModel) -> float:
    """Seconds of continuous measurement needed for `target_events`
    usable four-fold events at the calibrated rates."""
    if target_events < 0:
        raise StateError("target event count must be nonnegative")
    if target_events == 0:
        return 0.0
    rate = rates.effective_fourfold_rate()
    if rate <= 0.0:
        return math.inf
    return target_events / rate


def write_counts_csv(path, table: CountTable) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["outcome", "count", "integration_time_s", "seed"])
        for key in sorted(table.counts):
            w.writerow([key, table.counts[key], table.integration_time, table.seed])


def write_probabilities_csv(path, probs: Mapping[str, float]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["outcome", "probability"])
        for key in sorted(probs):
            w.writerow([key, f"{probs[key]:.12g}"])
