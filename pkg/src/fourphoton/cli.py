"""Command-line front end: each scenario reproduces one headline result as
CSV plus a plain-text summary.

Scenarios:
  hv-table       H/V-basis four-fold count table (signal-to-noise check)
  basis45-table  45-degree basis probabilities and counts (parity structure)
  delay-scan     interference visibility vs PBS arrival delay
  swap-report    entanglement-swapping fidelity/visibility/CHSH report
  feasibility    measurement-time estimate for a full Bell test on photons 1,4

Exit codes: 0 success, 1 usage error, 2 config error, 3 physically
impossible request (zero-probability post-selection).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiment, swap
from .elements import DelayElement
from .experiment import (
    Apparatus,
    CountTable,
    MeasurementSetting,
    PairSource,
    PostselectionError,
    RateModel,
    default_apparatus,
    delay_scan,
    diagonal_setting,
    exact_outcome_probabilities,
    feasibility_estimate,
    hv_setting,
    monte_carlo_counts,
)
from .elements import PbsElement
from .states import StateError

SCENARIOS = ("hv-table", "basis45-table", "delay-scan", "swap-report", "feasibility")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_PHYSICS = 3


def default_config() -> dict:
    """Paper-calibrated defaults; see README for the schema."""
    return {
        "apparatus": {
            "sources": [
                {"photons": [1, 2], "modes": ["1", "2"]},
                {"photons": [3, 4], "modes": ["3", "4"]},
            ],
            "pbs": {"inputs": ["2", "3"], "outputs": ["2'", "3'"], "error_rate": 0.0},
            "detectors": {"D1": "1", "D2": "2'", "D3": "3'", "D4": "4"},
        },
        "rates": {
            "fourfold_rate_desired": 200.0 / 6000.0,
            "background_fourfold_rate": 0.5 / 6000.0,
            "detector_efficiency": 1.0,
            "dark_count_rate": 0.0,
            "coincidence_window_s": 3e-9,
        },
        "visibility_zero_delay": 0.79,
        "coherence_time_fs": 550.0,
        # Bell test on photons 1,4 conditioned on the phi+ detection
        # (success probability 0.5): event budget for 16 correlation
        # settings at the precision needed to beat the LHV bound.
        "bell_test_target_events": 600000,
        "scan_delays_fs": [round(x, 1) for x in np.linspace(-1200, 1200, 25)],
        "scan_time_per_point_s": 24000.0,
    }


class ConfigError(ValueError):
    pass


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"missing config key: {key}")
    return cfg[key]


def load_config(path: str | None) -> dict:
    cfg = default_config()
    if path is None:
        return cfg
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        user = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    for key, val in user.items():
        if key not in cfg:
            raise ConfigError(f"unknown config key: {key}")
        if isinstance(cfg[key], dict) and isinstance(val, dict):
            for sub, sval in val.items():
                if sub not in cfg[key]:
                    raise ConfigError(f"unknown config key: {key}.{sub}")
                cfg[key][sub] = sval
        else:
            cfg[key] = val
    return cfg


def build_apparatus(cfg: dict) -> Apparatus:
    app = _require(cfg, "apparatus")
    try:
        sources = tuple(
            PairSource(tuple(s["photons"]), tuple(s["modes"]))
            for s in _require(app, "sources")
        )
        pbs = _require(app, "pbs")
        element = PbsElement(
            tuple(pbs["inputs"]), tuple(pbs["outputs"]), pbs.get("error_rate", 0.0)
        )
        return Apparatus(sources, (element,), dict(_require(app, "detectors")))
    except (KeyError, TypeError, StateError) as exc:
        raise ConfigError(f"bad apparatus config: {exc}") from exc


def build_rates(cfg: dict) -> RateModel:
    r = _require(cfg, "rates")
    try:
        return RateModel(
            fourfold_rate_desired=r["fourfold_rate_desired"],
            background_fourfold_rate=r["background_fourfold_rate"],
            detector_efficiency=r.get("detector_efficiency", 1.0),
            dark_count_rate=r.get("dark_count_rate", 0.0),
            coincidence_window=r.get("coincidence_window_s", 3e-9),
        )
    except (KeyError, StateError) as exc:
        raise ConfigError(f"bad rates config: {exc}") from exc


def _summary(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n")


def run_hv_table(cfg, args, out: Path) -> None:
    apparatus = build_apparatus(cfg)
    rates = build_rates(cfg)
    setting = hv_setting(apparatus)
    table = monte_carlo_counts(apparatus, setting, rates, args.time, args.seed)
    experiment.write_counts_csv(out / "hv-table.csv", table)
    probs = exact_outcome_probabilities(apparatus, setting, v0=cfg["visibility_zero_delay"])
    desired = [k for k, p in probs.items() if p > 1e-9]
    n_des = sum(table.counts[k] for k in desired) / len(desired)
    others = [k for k in table.counts if k not in desired]
    n_bg = sum(table.counts[k] for k in others) / len(others)
    snr = n_des / n_bg if n_bg > 0 else float("inf")
    _summary(
        out / "hv-table_summary.txt",
        [
            f"integration time: {table.integration_time} s, seed {table.seed}",
            f"desired outcomes: {', '.join(sorted(desired))}",
            f"mean desired count: {n_des:.2f}",
            f"mean non-desired count: {n_bg:.3f}",
            f"signal-to-noise ratio: {snr:.1f}",
        ],
    )


def run_basis45_table(cfg, args, out: Path) -> None:
    apparatus = build_apparatus(cfg)
    rates = build_rates(cfg)
    setting = diagonal_setting(apparatus)
    delay = DelayElement(args.delay, cfg["coherence_time_fs"])
    v0 = cfg["visibility_zero_delay"]
    probs = exact_outcome_probabilities(apparatus, setting, delay=delay, v0=v0)
    table = monte_carlo_counts(
        apparatus, setting, rates, args.time, args.seed, delay=delay, v0=v0
    )
    with open(out / "basis45-table.csv", "w", newline="") as fh:
        fh.write("outcome,probability,count,integration_time_s,seed\n")
        for key in sorted(probs):
            fh.write(
                f"{key},{probs[key]:.12g},{table.counts[key]},{args.time},{args.seed}\n"
            )
    even = [k for k in probs if k.count("+") % 2 == 0]
    _summary(
        out / "basis45-table_summary.txt",
        [
            f"delay: {args.delay} fs, zero-delay visibility: {v0}",
            f"even-parity probability total: {sum(probs[k] for k in even):.6f}",
            f"nonzero outcomes: {sum(1 for p in probs.values() if p > 1e-12)}",
        ],
    )


def run_delay_scan(cfg, args, out: Path) -> None:
    apparatus = build_apparatus(cfg)
    rates = build_rates(cfg)
    setting = diagonal_setting(apparatus)
    v0 = cfg["visibility_zero_delay"]
    points = delay_scan(
        apparatus,
        setting,
        cfg["scan_delays_fs"],
        rates,
        cfg["scan_time_per_point_s"],
        args.seed,
        coherence_time_fs=cfg["coherence_time_fs"],
        v0=v0,
    )
    rows = []
    for tau, table in points:
        n_pppp = table.counts["++++"]
        n_pppm = table.counts["+++-"]
        if n_pppp + n_pppm > 0:
            vis, err = swap.visibility_from_counts(table.counts, ["++++"], ["+++-"])
        else:
            vis, err = 0.0, 0.0
        rows.append((tau, n_pppp, n_pppm, vis, err))
    with open(out / "delay-scan.csv", "w", newline="") as fh:
        fh.write("delay_fs,counts_pppp,counts_pppm,visibility,visibility_error\n")
        for tau, a, b, vis, err in rows:
            fh.write(f"{tau},{a},{b},{vis:.6f},{err:.6f}\n")
    peak = max(rows, key=lambda r: r[3])
    _summary(
        out / "delay-scan_summary.txt",
        [
            f"points: {len(rows)}, time per point: {cfg['scan_time_per_point_s']} s",
            f"peak visibility {peak[3]:.3f} +- {peak[4]:.3f} at delay {peak[0]} fs",
        ],
    )


def run_swap_report(cfg, args, out: Path) -> None:
    apparatus = build_apparatus(cfg)
    v0 = cfg["visibility_zero_delay"]
    state, _ = experiment.ghz_after_postselection(apparatus)
    from .elements import dephase_by_distinguishability

    rho = dephase_by_distinguishability(state, 1.0, v0)
    result = swap.phi_plus_via_45_coincidence(rho)
    chsh = swap.chsh_value(result.conditioned_state_14)
    swap.write_swap_report(out / "swap-report.json", result, chsh)
    with open(out / "swap-report.csv", "w", newline="") as fh:
        fh.write("projection_probability,fidelity,visibility,chsh_value\n")
        fh.write(
            f"{result.projection_probability:.12g},{result.fidelity_to_target:.12g},"
            f"{result.visibility_45:.12g},{chsh:.12g}\n"
        )
    _summary(
        out / "swap-report_summary.txt",
        [
            f"phi+ projection probability: {result.projection_probability:.4f}",
            f"fidelity to phi+ on photons 1,4: {result.fidelity_to_target:.4f}",
            f"45-degree visibility: {result.visibility_45:.4f}",
            f"CHSH value at phi+-optimal settings: {chsh:.4f} (LHV bound 2)",
        ],
    )


def run_feasibility(cfg, args, out: Path) -> None:
    rates = build_rates(cfg)
    target = cfg["bell_test_target_events"]
    # phi+ identification succeeds on half of the four-fold events
    seconds = feasibility_estimate(target, rates) / 0.5
    months = seconds / (30 * 86400)
    with open(out / "feasibility.csv", "w", newline="") as fh:
        fh.write("target_events,effective_fourfold_rate_per_s,seconds,months\n")
        fh.write(
            f"{target},{rates.effective_fourfold_rate() * 0.5:.6g},"
            f"{seconds:.6g},{months:.3f}\n"
        )
    _summary(
        out / "feasibility_summary.txt",
        [
            f"target usable events: {target}",
            f"usable event rate: {rates.effective_fourfold_rate() * 0.5:.3g}/s",
            f"required continuous measurement: {seconds:.3g} s ({months:.1f} months)",
        ],
    )


RUNNERS = {
    "hv-table": run_hv_table,
    "basis45-table": run_basis45_table,
    "delay-scan": run_delay_scan,
    "swap-report": run_swap_report,
    "feasibility": run_feasibility,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fourphoton",
        description="Four-photon GHZ / entanglement-swapping experiment simulator",
    )
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--scenario", metavar="NAME", help=f"one of {', '.join(SCENARIOS)}")
    p.add_argument("--seed", type=int, default=1, metavar="U64")
    p.add_argument("--time", type=float, default=6000.0, metavar="SECONDS",
                   help="integration time for count tables")
    p.add_argument("--delay", type=float, default=0.0, metavar="FS",
                   help="PBS arrival delay (basis45-table)")
    p.add_argument("--out", default="out", metavar="DIR", help="output directory")
    p.add_argument("--print-default-config", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_USAGE

    if args.print_default_config:
        print(json.dumps(default_config(), indent=2))
        return EXIT_OK

    if args.scenario is None:
        parser.print_usage(sys.stderr)
        print("error: --scenario is required", file=sys.stderr)
        return EXIT_USAGE
    if args.scenario not in SCENARIOS:
        print(
            f"error: unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}",
            file=sys.stderr,
        )
        return EXIT_USAGE

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        RUNNERS[args.scenario](cfg, args, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PostselectionError as exc:
        print(f"physically impossible: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except StateError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
