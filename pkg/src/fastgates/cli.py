"""Command-line front end.

The CLI is a thin client over the HTTP service: by default it mounts the
service in process (no socket), and --server targets a running instance
instead.  Exit codes: 0 success, 2 usage error, 3 infeasible problem,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import httpx

from .config import ConfigError, RunConfig, load_config, with_seed

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERICAL = 4

_FLOAT_FORMAT = "%.17g"


def _fmt(value) -> str:
    if isinstance(value, float):
        return _FLOAT_FORMAT % value
    return str(value)


def _write_csv(path: str, columns, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: str, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_payload(config: RunConfig) -> dict:
    fr = config.laser.repetition_rate_ghz
    return {
        "trap": {
            "frequency_mhz": config.trap.frequency_mhz,
            "mass_amu": config.trap.mass_amu,
            "wavelength_nm": config.trap.wavelength_nm,
            "ion_count": config.trap.ion_count,
        },
        "scheme": {
            "family": config.scheme.family,
            "convention": config.scheme.convention,
            "target_pair": list(config.scheme.target_pair),
        },
        "laser": {
            "repetition_rate_ghz": None if math.isinf(fr) else fr,
        },
        "motional": {"nbar": list(config.motional.nbar)},
        "optimizer": {
            "objective": config.optimizer.objective,
            "initial_temperature": config.optimizer.initial_temperature,
            "cooling_factor": config.optimizer.cooling_factor,
            "steps": config.optimizer.steps,
            "restarts": config.optimizer.restarts,
            "rng_seed": config.optimizer.rng_seed,
            "time_move_scale_ns": config.optimizer.time_move_scale_ns,
            "n_min": config.optimizer.n_min,
            "n_max": config.optimizer.n_max,
            "infidelity_threshold": config.optimizer.infidelity_threshold,
            "overlap_margin": config.optimizer.overlap_margin,
            "cycles": config.optimizer.cycles,
        },
    }


class ServiceFailure(Exception):
    def __init__(self, exit_code: int, message: str):
        self.exit_code = exit_code
        super().__init__(message)


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # in-process: mount the ASGI app behind a sync portal, no socket needed
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient
    from .service.app import app
    return TestClient(app, raise_server_exceptions=False)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code == 200:
        return response.json()
    try:
        body = response.json()
        message = body.get("message") or json.dumps(body)
    except ValueError:
        message = response.text
    if response.status_code in (400, 422):
        raise ServiceFailure(EXIT_USAGE, message)
    if response.status_code == 409:
        raise ServiceFailure(EXIT_INFEASIBLE, message)
    raise ServiceFailure(EXIT_NUMERICAL, message)


def _out_dir(args, config: RunConfig) -> str:
    directory = args.out or config.output.directory
    os.makedirs(directory, exist_ok=True)
    return directory


def _formats(args, config: RunConfig) -> tuple[str, ...]:
    if args.format:
        return (args.format,)
    return config.output.formats


def cmd_crystal(args, config: RunConfig, client: httpx.Client) -> int:
    data = _post(client, "/crystal", {"config": _config_payload(config)})
    directory = _out_dir(args, config)
    formats = _formats(args, config)
    if "json" in formats:
        _write_json(os.path.join(directory, "crystal.json"), data)
    if "csv" in formats:
        rows = []
        for i, (u, x) in enumerate(zip(data["positions"], data["positions_m"]),
                                   start=1):
            rows.append([i, u, x])
        _write_csv(os.path.join(directory, "positions.csv"),
                   ["ion", "position_dimensionless", "position_m"], rows)
        mode_rows = [[m["mode"], m["frequency_rad_s"], m["lamb_dicke"],
                      *m["vector"]] for m in data["modes"]]
        header = ["mode", "frequency_rad_s", "lamb_dicke"]
        header += [f"b_ion{i}" for i in range(1, data["ion_count"] + 1)]
        _write_csv(os.path.join(directory, "modes.csv"), header, mode_rows)
    print(f"crystal: {data['ion_count']} ions, "
          f"min radial ratio {_fmt(data['min_radial_ratio'])}")
    return EXIT_OK


def cmd_design(args, config: RunConfig, client: httpx.Client) -> int:
    payload = {"config": _config_payload(config)}
    data = _post(client, "/design", payload)
    manifest = data["manifest"]
    directory = _out_dir(args, config)
    _write_json(os.path.join(directory, "manifest.json"), manifest)
    _write_json(os.path.join(directory, "scheme.json"), manifest["scheme"])
    ion_count = manifest["problem"]["ion_count"]
    for state in ("gg", "ge", "eg", "ee"):
        columns = ["t_s"]
        series = []
        for mode in range(1, ion_count + 1):
            traj = _post(client, "/trajectory", {
                **payload, "scheme": manifest["scheme"], "state": state,
                "mode": mode, "frame": "rotating", "points": args.points})
            if not series:
                series.append(traj["times_s"])
            series.append(traj["position"])
            series.append(traj["momentum"])
            columns += [f"q_mode{mode}", f"p_mode{mode}"]
        rows = list(zip(*series))
        _write_csv(os.path.join(directory, f"trajectory_{state}.csv"),
                   columns, rows)
    print(f"design: infidelity {_fmt(manifest['result']['infidelity'])}, "
          f"gate time {_fmt(manifest['result']['gate_time_s'])} s")
    return EXIT_OK


def cmd_sweep(args, config: RunConfig, client: httpx.Client) -> int:
    payload = {"config": _config_payload(config), "axis": args.axis}
    if args.axis == "repetition-rate":
        if not args.rates_ghz:
            raise ServiceFailure(EXIT_USAGE, "--rates-ghz is required")
        payload["repetition_rate"] = {"rates_ghz": args.rates_ghz}
    elif args.axis == "ion-number":
        if not args.ion_counts:
            raise ServiceFailure(EXIT_USAGE, "--ion-counts is required")
        payload["ion_number"] = {"ion_counts": args.ion_counts,
                                 "mode": args.sweep_mode,
                                 "placement": args.placement}
    elif args.axis == "gate-time":
        if not args.gate_times_ns:
            raise ServiceFailure(EXIT_USAGE, "--gate-times-ns is required")
        payload["gate_time"] = {"gate_times_ns": args.gate_times_ns}
    else:
        if not args.shifts_ps:
            raise ServiceFailure(EXIT_USAGE, "--shifts-ps is required")
        payload["timing_shift"] = {"shifts_ps": args.shifts_ps}
    data = _post(client, "/sweep", payload)
    directory = _out_dir(args, config)
    formats = _formats(args, config)
    if "csv" in formats:
        _write_csv(os.path.join(directory, "sweep.csv"),
                   data["columns"], data["rows"])
    if "json" in formats:
        _write_json(os.path.join(directory, "sweep.json"), data)
    for name, value in sorted(data["fits"].items()):
        print(f"fit {name} = {_fmt(value)}")
    print(f"sweep: {len(data['rows'])} rows")
    return EXIT_OK


def cmd_power(args, config: RunConfig, client: httpx.Client) -> int:
    data = _post(client, "/power", {
        "repetition_rate_hz": args.rate_ghz * 1e9,
        "pulse_energy_j": args.energy_nj * 1e-9})
    print(f"average power per beam: {_fmt(data['average_power_w'])} W")
    return EXIT_OK


def cmd_trajectory(args, config: RunConfig, client: httpx.Client) -> int:
    data = _post(client, "/trajectory", {
        "config": _config_payload(config), "state": args.state,
        "mode": args.mode, "frame": args.frame, "points": args.points})
    directory = _out_dir(args, config)
    rows = list(zip(data["times_s"], data["position"], data["momentum"]))
    _write_csv(os.path.join(directory, "trajectory.csv"),
               ["t_s", "position", "momentum"], rows)
    print(f"trajectory: {len(rows)} samples")
    return EXIT_OK


def cmd_displacement(args, config: RunConfig, client: httpx.Client) -> int:
    data = _post(client, "/displacement", {
        "config": _config_payload(config), "state": args.state,
        "points": args.points})
    directory = _out_dir(args, config)
    series = data["displacement_m"]
    columns = ["t_s"] + [f"x_ion{i}_m" for i in range(1, len(series) + 1)]
    rows = list(zip(data["times_s"], *series))
    _write_csv(os.path.join(directory, "displacement.csv"), columns, rows)
    print(f"displacement: {len(rows)} samples, {len(series)} ions")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastgates",
        description="Design and evaluate pulsed fast entangling gates.")
    parser.add_argument("--config", help="run configuration file")
    parser.add_argument("--seed", type=int, help="override optimizer.rng_seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"),
                        help="restrict output format")
    parser.add_argument("--server", help="URL of a running service "
                        "(default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("crystal", help="equilibrium structure and mode table")

    p_design = sub.add_parser("design", help="optimize one gate scheme")
    p_design.add_argument("--points", type=int, default=1001)

    p_sweep = sub.add_parser("sweep", help="parameter sweeps")
    p_sweep.add_argument("--axis", required=True,
                         choices=("repetition-rate", "ion-number",
                                  "gate-time", "timing-shift"))
    p_sweep.add_argument("--rates-ghz", type=_float_list)
    p_sweep.add_argument("--ion-counts", type=_int_list)
    p_sweep.add_argument("--sweep-mode", default="fixed-distance",
                         choices=("fixed-frequency", "fixed-distance"))
    p_sweep.add_argument("--placement", default="end",
                         choices=("end", "middle"))
    p_sweep.add_argument("--gate-times-ns", type=_float_list)
    p_sweep.add_argument("--shifts-ps", type=_float_list)

    p_power = sub.add_parser("power", help="average laser power per beam")
    p_power.add_argument("--rate-ghz", type=float, required=True)
    p_power.add_argument("--energy-nj", type=float, required=True)

    p_traj = sub.add_parser("trajectory", help="phase-space trajectory CSV")
    p_traj.add_argument("--state", default="ee",
                        choices=("gg", "ge", "eg", "ee"))
    p_traj.add_argument("--mode", type=int, default=1)
    p_traj.add_argument("--frame", default="rotating",
                        choices=("rotating", "lab"))
    p_traj.add_argument("--points", type=int, default=1001)

    p_disp = sub.add_parser("displacement", help="driven ion displacement CSV")
    p_disp.add_argument("--state", default="ee",
                        choices=("gg", "ge", "eg", "ee"))
    p_disp.add_argument("--points", type=int, default=1001)
    return parser


def _float_list(raw: str) -> list[float]:
    return [float(p) for p in raw.split(",") if p]


def _int_list(raw: str) -> list[int]:
    return [int(p) for p in raw.split(",") if p]


_COMMANDS = {
    "crystal": cmd_crystal,
    "design": cmd_design,
    "sweep": cmd_sweep,
    "power": cmd_power,
    "trajectory": cmd_trajectory,
    "displacement": cmd_displacement,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else RunConfig()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.seed is not None:
        config = with_seed(config, args.seed)
    try:
        with _client(args.server) as client:
            return _COMMANDS[args.command](args, config, client)
    except ServiceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
