"""HTTP service exposing the gate-design workflows.

Errors map to status codes the CLI translates into exit codes: validation
and usage problems are 400/422, infeasible design problems are 409, and
numerical failures are 500.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..constants import ATOMIC_MASS
from ..crystal import TrapConfig, build_crystal, min_radial_ratio
from ..dynamics import coherent_trajectory, driven_displacement, trajectory_points
from ..errors import InfeasibleError, NumericalError, OverlapError
from ..fidelity import ThermalState
from ..optimizer import (AnnealConfig, DesignProblem, design, optimize,
                         perturbation_sweep, sweep_gate_time_distant,
                         sweep_ion_number, sweep_repetition_rate)
from ..schemes import GateScheme, expand
from . import models

API_VERSION = "1"


def _trap_config(model: models.RunConfigModel) -> TrapConfig:
    trap = model.trap
    return TrapConfig(
        axial_frequency=2.0 * math.pi * trap.frequency_mhz * 1e6,
        ion_mass=trap.mass_amu * ATOMIC_MASS,
        laser_wavenumber=2.0 * math.pi / (trap.wavelength_nm * 1e-9),
        ion_count=trap.ion_count,
    )


def _repetition_rate(model: models.RunConfigModel) -> float:
    ghz = model.laser.repetition_rate_ghz
    return math.inf if ghz is None else ghz * 1e9


def _thermal(model: models.RunConfigModel, mode_count: int) -> ThermalState:
    nbar = model.motional.nbar
    if len(nbar) == 1:
        return ThermalState.uniform(nbar[0], mode_count)
    if len(nbar) != mode_count:
        raise ValueError(
            f"motional.nbar: expected 1 or {mode_count} occupations, "
            f"got {len(nbar)}")
    return ThermalState(np.array(nbar, dtype=float))


def _problem(model: models.RunConfigModel) -> DesignProblem:
    crystal = build_crystal(_trap_config(model))
    return DesignProblem(
        crystal=crystal,
        family=model.scheme.family,
        target_pair=model.scheme.target_pair,
        repetition_rate=_repetition_rate(model),
        convention=model.scheme.convention,
        thermal=_thermal(model, crystal.ion_count),
        objective=model.optimizer.objective,
        cycles=model.optimizer.cycles,
    )


def _anneal_config(model: models.RunConfigModel) -> AnnealConfig:
    opt = model.optimizer
    return AnnealConfig(
        initial_temperature=opt.initial_temperature,
        cooling_factor=opt.cooling_factor,
        steps=opt.steps,
        restarts=opt.restarts,
        rng_seed=opt.rng_seed,
        time_move_scale=opt.time_move_scale_ns * 1e-9,
        n_range=(opt.n_min, opt.n_max),
        infidelity_threshold=opt.infidelity_threshold,
        overlap_margin=opt.overlap_margin,
    )


def _scheme_and_train(request_config: models.RunConfigModel, scheme_dict):
    problem = _problem(request_config)
    if scheme_dict is None:
        scheme, _ = optimize(problem, _anneal_config(request_config))
    else:
        scheme = GateScheme.from_json_dict(scheme_dict)
    train = expand(scheme, problem.repetition_rate)
    return problem, scheme, train


def create_app() -> FastAPI:
    app = FastAPI(title="fastgates", version=API_VERSION)

    @app.exception_handler(InfeasibleError)
    async def _infeasible(request: Request, exc: InfeasibleError):
        return JSONResponse(status_code=409, content={
            "type": "infeasible", "message": str(exc)})

    @app.exception_handler(OverlapError)
    async def _overlap(request: Request, exc: OverlapError):
        return JSONResponse(status_code=409, content={
            "type": "infeasible", "message": str(exc)})

    @app.exception_handler(NumericalError)
    async def _numerical(request: Request, exc: NumericalError):
        return JSONResponse(status_code=500, content={
            "type": "numerical", "message": str(exc)})

    @app.exception_handler(ValueError)
    async def _value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={
            "type": "usage", "message": str(exc)})

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": API_VERSION}

    @app.post("/crystal", response_model=models.CrystalResponse)
    async def crystal_endpoint(req: models.CrystalRequest):
        config = _trap_config(req.config)
        crystal = build_crystal(config)
        modes = [models.ModeRow(
            mode=p + 1,
            frequency_rad_s=float(crystal.mode_frequencies[p]),
            lamb_dicke=float(crystal.lamb_dicke[p]),
            vector=[float(v) for v in crystal.mode_vectors[:, p]],
        ) for p in range(crystal.ion_count)]
        return models.CrystalResponse(
            ion_count=crystal.ion_count,
            coulomb_length_m=config.coulomb_length,
            positions=[float(u) for u in crystal.positions],
            positions_m=[float(x) for x in crystal.positions_m],
            modes=modes,
            min_radial_ratio=min_radial_ratio(crystal.ion_count),
        )

    @app.post("/design", response_model=models.DesignResponse)
    async def design_endpoint(req: models.DesignRequest):
        manifest = design(_problem(req.config), _anneal_config(req.config))
        return models.DesignResponse(manifest=manifest)

    @app.post("/sweep", response_model=models.SweepResponse)
    async def sweep_endpoint(req: models.SweepRequest):
        problem = _problem(req.config)
        config = _anneal_config(req.config)
        if req.axis == "repetition-rate":
            table = sweep_repetition_rate(
                problem, [g * 1e9 for g in req.repetition_rate.rates_ghz],
                config)
        elif req.axis == "ion-number":
            table = sweep_ion_number(
                problem, req.ion_number.ion_counts, req.ion_number.mode,
                req.ion_number.placement, config)
        elif req.axis == "gate-time":
            table = sweep_gate_time_distant(
                problem, [t * 1e-9 for t in req.gate_time.gate_times_ns],
                config)
        else:
            scheme, _ = optimize(problem, config)
            table = perturbation_sweep(
                scheme, problem.crystal, problem.repetition_rate,
                [s * 1e-12 for s in req.timing_shift.shifts_ps],
                problem.thermal_state())
        return models.SweepResponse(
            columns=list(table.columns),
            rows=[[float(v) for v in row] for row in table.rows],
            fits=dict(table.fits))

    @app.post("/power", response_model=models.PowerResponse)
    async def power_endpoint(req: models.PowerRequest):
        return models.PowerResponse(
            average_power_w=req.repetition_rate_hz * req.pulse_energy_j)

    @app.post("/trajectory", response_model=models.TrajectoryResponse)
    async def trajectory_endpoint(req: models.TrajectoryRequest):
        problem, scheme, train = _scheme_and_train(req.config, req.scheme)
        if req.mode > problem.crystal.ion_count:
            raise ValueError(
                f"mode {req.mode} exceeds mode count "
                f"{problem.crystal.ion_count}")
        grid = np.linspace(train.times[0], train.times[-1], req.points)
        alpha = coherent_trajectory(
            train, problem.crystal, req.state, req.mode, grid,
            frame=req.frame, pair=scheme.target_pair,
            convention=scheme.convention)
        q, p = trajectory_points(alpha)
        return models.TrajectoryResponse(
            times_s=[float(t) for t in grid],
            position=[float(v) for v in q],
            momentum=[float(v) for v in p])

    @app.post("/displacement", response_model=models.DisplacementResponse)
    async def displacement_endpoint(req: models.DisplacementRequest):
        problem, scheme, train = _scheme_and_train(req.config, req.scheme)
        grid = np.linspace(train.times[0], train.times[-1], req.points)
        x = driven_displacement(train, problem.crystal, req.state, grid,
                                pair=scheme.target_pair,
                                convention=scheme.convention)
        return models.DisplacementResponse(
            times_s=[float(t) for t in grid],
            displacement_m=[[float(v) for v in row] for row in x])

    return app


app = create_app()
