"""Command-line front end.

Subcommands: simulate, invert, noise-apply, diagnose, reproduce. Exit codes:
0 success, 2 configuration/usage errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .core import NetworkConfig
from .diagnostics import fit_decay, spectrum_diagnostics
from .errors import ConfigError, HeavinetError, NumericalError
from .experiment import (
    ExperimentSpec,
    NetworkSpec,
    reproduce_tables,
    run_experiment,
    simulate_schedule,
)
from .inversion import SelectionSpec, assemble_all_systems, reconstruct_connectivity
from .noise import NoiseSpec, perturb_schedule_paired
from .serialization import (
    load_connectivity,
    load_json,
    load_schedule,
    save_json,
    save_matrix_csv,
    save_schedule,
    save_spectra_csv,
)
from .simulate import extract_firing_schedule, simulate_euler, simulate_exact

__all__ = ["main"]


def _load_network(path, replicate: int) -> NetworkConfig:
    return NetworkSpec.from_json_dict(load_json(path)).realize(replicate)


def _cmd_simulate(args) -> int:
    cfg = _load_network(args.config, args.replicate)
    if args.connectivity:
        w = load_connectivity(args.connectivity)
    else:
        d = load_json(args.config)
        conn = d.get("connectivity")
        if conn is None:
            raise ConfigError("need --connectivity or a connectivity entry in config")
        from .experiment import _generate_connectivity

        w = (
            load_connectivity(conn["path"])
            if "path" in conn
            else _generate_connectivity(conn.get("kind", "symmetric"), cfg.n)
        )

    if args.out_trajectory:
        traj = (
            simulate_euler(cfg, w) if args.method == "euler" else simulate_exact(cfg, w)
        )
        schedule = extract_firing_schedule(traj)
        sample_dt = args.sample_dt or cfg.dt
        n_pts = int(np.floor(cfg.T / sample_dt + 1e-9))
        ts = np.arange(n_pts + 1) * sample_dt
        samples = traj.sample(ts)
        header = "t," + ",".join(f"s{i}" for i in range(cfg.n))
        body = np.column_stack([ts, samples.T])
        np.savetxt(
            args.out_trajectory, body, fmt="%.17g", delimiter=",",
            header=header, comments="",
        )
    else:
        schedule = simulate_schedule(cfg, w, args.method)
    save_schedule(args.out_schedule, schedule)
    firing = len(schedule.gamma)
    print(f"simulated n={cfg.n} T={cfg.T:g} ({args.method}); {firing} neurons fire")
    return 0


def _parse_selection(args) -> SelectionSpec:
    raw = args.selection
    if raw.startswith("fixed:"):
        return SelectionSpec(method="fixed", kappa=int(raw.split(":", 1)[1]), nu=args.nu)
    name = raw.replace("-", "_")
    if name not in ("morozov_b", "morozov_a", "oracle"):
        raise ConfigError(f"unknown selection {raw!r} (use fixed:K, morozov-b, morozov-a, oracle)")
    return SelectionSpec(method=name, noise_norm=args.noise_norm, nu=args.nu)


def _cmd_invert(args) -> int:
    schedule, pairing = load_schedule(args.schedule)
    cfg = _load_network(args.config, args.replicate)
    selection = _parse_selection(args)

    kwargs = {}
    if args.noise_level is not None:
        noise_seed = args.noise_seed
        if noise_seed is None:
            noise_seed = args.global_seed if args.global_seed is not None else 0
        kwargs["rhs_noise"] = NoiseSpec(
            target="rhs", level=args.noise_level, seed=noise_seed
        )
    if selection.method == "morozov_a":
        if not args.clean_schedule:
            raise ConfigError("morozov-a needs --clean-schedule")
        clean_schedule, _ = load_schedule(args.clean_schedule)
        if pairing is None:
            pairing = _nearest_onset_pairing(schedule, clean_schedule)
        kwargs["adjusted_reference"] = (clean_schedule, pairing)
    if selection.method == "oracle":
        if not args.true_connectivity:
            raise ConfigError("oracle selection needs --true-connectivity")
        kwargs["true_connectivity"] = load_connectivity(args.true_connectivity)

    w_inv, report = reconstruct_connectivity(schedule, cfg, selection, **kwargs)
    save_matrix_csv(args.out_connectivity, w_inv.w)
    if args.out_report:
        save_json(args.out_report, report.to_dict())
    rec = len(report.recovered)
    print(f"reconstructed {rec}/{cfg.n} rows ({selection.method})")
    return 0


def _nearest_onset_pairing(noisy, clean):
    """Fallback pairing when the schedule file carries no provenance: each
    noisy onset is matched to the nearest clean onset of the same neuron."""
    pairing = []
    for i in range(noisy.n):
        n_on = noisy.onsets(i)
        c_on = clean.onsets(i)
        if c_on.size == 0:
            if n_on.size:
                raise ConfigError(
                    f"neuron {i}: noisy schedule fires but clean schedule does not"
                )
            pairing.append(np.empty(0))
            continue
        idx = np.clip(np.searchsorted(c_on, n_on), 0, c_on.size - 1)
        left = np.clip(idx - 1, 0, c_on.size - 1)
        pick = np.where(
            np.abs(c_on[idx] - n_on) <= np.abs(c_on[left] - n_on), idx, left
        )
        pairing.append(c_on[pick])
    return tuple(pairing)


def _cmd_noise_apply(args) -> int:
    schedule, _ = load_schedule(args.schedule)
    if args.target != "intervals":
        raise ConfigError(
            "noise-apply perturbs schedules, so target must be 'intervals'; "
            "rhs noise is applied at inversion time (see invert --noise-level)"
        )
    seed = args.seed if args.seed is not None else args.global_seed
    if seed is None:
        raise ConfigError("need --seed (or the global --seed)")
    spec = NoiseSpec(target="intervals", level=args.level, seed=seed)
    noisy, pairing = perturb_schedule_paired(schedule, spec)
    save_schedule(args.out, noisy, source_onsets=pairing)
    kept = int(np.sum(noisy.counts()))
    total = int(np.sum(schedule.counts()))
    print(f"perturbed schedule: {kept}/{total} intervals kept")
    return 0


def _cmd_diagnose(args) -> int:
    schedule, _ = load_schedule(args.schedule)
    cfg = _load_network(args.config, args.replicate)
    systems = assemble_all_systems(schedule, cfg)
    if args.neuron is not None:
        if args.neuron not in systems:
            raise ConfigError(f"neuron {args.neuron} has no usable onsets")
        systems = {args.neuron: systems[args.neuron]}

    per_neuron = {}
    votes = []
    spectra = []
    for i, sys_i in sorted(systems.items()):
        diag = spectrum_diagnostics(sys_i, cfg.s0, cfg.T)
        entry = {"spectrum": diag.to_dict()}
        try:
            fit = fit_decay(diag.singular_values)
            entry["decay"] = fit.to_dict()
            votes.append(fit.classification)
        except HeavinetError as exc:
            entry["decay"] = {"error": str(exc)}
        per_neuron[str(i)] = entry
        spectra.append((i, diag.singular_values))

    overall = "inconclusive"
    if votes:
        counts = {c: votes.count(c) for c in set(votes)}
        top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if len(top) == 1 or top[0][1] > top[1][1]:
            overall = top[0][0]
    payload = {"neurons": per_neuron, "classification": overall}
    save_json(args.out, payload)
    if args.spectra_csv:
        save_spectra_csv(args.spectra_csv, spectra)
    print(f"diagnosed {len(per_neuron)} neurons: {overall} ill-posedness")
    return 0


def _cmd_reproduce(args) -> int:
    seed = args.seed
    if seed is None:
        seed = args.global_seed if args.global_seed is not None else 20240501
    cells = reproduce_tables(
        args.out,
        groups=tuple(args.groups.split(",")),
        replicates=args.replicates,
        seed=seed,
        workers=args.threads,
    )
    for key in sorted(cells):
        c = cells[key]
        star = "*" if c["flagged"] else ""
        print(
            f"{key}: {c['mean_rel_error']:.3f} +- {c['std_rel_error']:.3f} "
            f"(kappa~{c['mean_kappa']:.1f}){star}"
        )
    return 0


def _cmd_run(args) -> int:
    spec = ExperimentSpec.from_json_dict(load_json(args.config))
    report = run_experiment(spec, output_dir=args.out, workers=args.threads)
    print(
        f"{spec.replicates} replicate(s): rel error "
        f"{report.mean_rel_error:.4g} +- {report.std_rel_error:.4g}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="heavinet",
        description="Delayed Heaviside networks: simulate, perturb, reconstruct.",
    )
    p.add_argument(
        "--seed", dest="global_seed", type=int, default=None,
        help="fallback base seed for subcommands whose own seed flag is unset",
    )
    p.add_argument(
        "--threads", type=int, default=1,
        help="worker threads for replicate loops (reproduce, run)",
    )
    p.add_argument(
        "--log-level", default="warning",
        choices=("debug", "info", "warning", "error"),
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="integrate the network and extract firing intervals")
    ps.add_argument("--config", required=True, help="network config JSON")
    ps.add_argument("--connectivity", help="matrix CSV/JSON (overrides config entry)")
    ps.add_argument("--method", choices=("euler", "exact"), default="euler")
    ps.add_argument("--replicate", type=int, default=0, help="index for drawn s0")
    ps.add_argument("--out-schedule", required=True)
    ps.add_argument("--out-trajectory", help="also write sampled states CSV")
    ps.add_argument("--sample-dt", type=float, help="trajectory sampling step")
    ps.set_defaults(fn=_cmd_simulate)

    pi = sub.add_parser("invert", help="reconstruct connectivity from a schedule")
    pi.add_argument("--schedule", required=True)
    pi.add_argument("--config", required=True, help="network config JSON (true s0)")
    pi.add_argument("--replicate", type=int, default=0)
    pi.add_argument("--selection", required=True,
                    help="fixed:K | morozov-b | morozov-a | oracle")
    pi.add_argument("--nu", type=float, default=1.0)
    pi.add_argument("--noise-norm", type=float,
                    help="known rhs noise norm (morozov-b on pre-noised data)")
    pi.add_argument("--noise-level", type=float,
                    help="apply rhs noise at this relative level before inverting")
    pi.add_argument("--noise-seed", type=int, default=None, help="default 0")
    pi.add_argument("--clean-schedule", help="reference schedule for morozov-a")
    pi.add_argument("--true-connectivity", help="matrix CSV/JSON for oracle")
    pi.add_argument("--out-connectivity", required=True)
    pi.add_argument("--out-report")
    pi.set_defaults(fn=_cmd_invert)

    pn = sub.add_parser("noise-apply", help="perturb a schedule's intervals")
    pn.add_argument("--schedule", required=True)
    pn.add_argument("--target", default="intervals")
    pn.add_argument("--level", type=float, required=True)
    pn.add_argument("--seed", type=int, default=None)
    pn.add_argument("--out", required=True)
    pn.set_defaults(fn=_cmd_noise_apply)

    pd = sub.add_parser("diagnose", help="singular spectra, bounds, decay fits")
    pd.add_argument("--schedule", required=True)
    pd.add_argument("--config", required=True)
    pd.add_argument("--replicate", type=int, default=0)
    pd.add_argument("--neuron", type=int, help="restrict to one neuron")
    pd.add_argument("--out", required=True)
    pd.add_argument("--spectra-csv", help="also write neuron,m,sigma rows")
    pd.set_defaults(fn=_cmd_diagnose)

    pr = sub.add_parser("reproduce", help="benchmark error tables")
    pr.add_argument("--out", required=True)
    pr.add_argument("--groups", default="sym-20,nonsym-20,sym-100,nonsym-100")
    pr.add_argument("--replicates", type=int, default=10)
    pr.add_argument("--seed", type=int, default=None, help="default 20240501")
    pr.set_defaults(fn=_cmd_reproduce)

    pe = sub.add_parser("run", help="run an experiment config end to end")
    pe.add_argument("--config", required=True, help="experiment JSON")
    pe.add_argument("--out", help="output directory")
    pe.set_defaults(fn=_cmd_run)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    logging.basicConfig(level=getattr(logging, args.log_level.upper()))
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
