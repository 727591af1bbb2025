"""Click CLI for the periodic Calderón toolkit."""

from __future__ import annotations

import functools
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError

from waveguide_calderon import __version__
from waveguide_calderon.config import (
    CalderonSettings,
    ExperimentConfig,
    config_hash,
    load_config,
)
from waveguide_calderon.errors import CheckFailedError, SolverError

EXIT_VALIDATION = 2
EXIT_CHECK = 3
EXIT_SOLVER = 4


def _handle_errors(fn: Callable[..., None]) -> Callable[..., None]:
    """Map toolkit exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            fn(*args, **kwargs)
        except ValidationError as exc:
            for error in exc.errors():
                location = ".".join(str(part) for part in error["loc"]) or "<root>"
                click.echo(f"config error: {location}: {error['msg']}", err=True)
            raise SystemExit(EXIT_VALIDATION) from exc
        except CheckFailedError as exc:
            click.echo(f"check failed: {exc}", err=True)
            raise SystemExit(EXIT_CHECK) from exc
        except SolverError as exc:
            click.echo(f"solver failure: {exc}", err=True)
            raise SystemExit(EXIT_SOLVER) from exc
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(EXIT_VALIDATION) from exc

    return wrapper


def _common_options(fn: Callable[..., None]) -> Callable[..., None]:
    options = [
        click.option(
            "--config",
            "config_path",
            required=True,
            type=click.Path(exists=True, dir_okay=False),
            help="Experiment TOML file",
        ),
        click.option("--output-dir", default=None, help="Directory for reports and tables"),
        click.option("--workers", default=None, type=int, help="Worker threads"),
        click.option("--verbose", "-v", is_flag=True, default=False, help="Debug logging"),
        click.option("--quiet", "-q", is_flag=True, default=False, help="Warnings only"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return _handle_errors(fn)


@dataclass
class Run:
    """Everything one command needs: settings, config, artifacts and display."""

    command: str
    settings: CalderonSettings
    config: ExperimentConfig

    @cached_property
    def config_hash(self) -> str:
        return config_hash(self.config)

    @cached_property
    def store(self):
        from waveguide_calderon.storage.artifacts import ArtifactStore

        return ArtifactStore(self.settings.output_dir, self.config_hash, self.command)

    @cached_property
    def display(self):
        from waveguide_calderon.display.terminal import TerminalDisplay

        return TerminalDisplay(self.settings)

    @cached_property
    def mesh(self):
        from waveguide_calderon.geometry.mesh import build_mesh

        return build_mesh(self.config.cross_section)

    @cached_property
    def partition(self):
        from waveguide_calderon.geometry.faces import BoundaryPartition

        faces = self.config.faces
        return BoundaryPartition.from_margins(
            self.mesh, faces.xi0, faces.input_margin, faces.output_margin
        )

    def potential(self, name: str):
        from waveguide_calderon.forward.presets import build_potential

        return build_potential(
            self.config.potentials[name], self.mesh, name=name, seed=self.config.seed
        )

    def conductivity(self, name: str):
        from waveguide_calderon.conductivity.field import build_conductivity

        chain = self.config.conductivity
        return build_conductivity(
            self.config.conductivities[name],
            self.mesh,
            a_star=chain.a_star,
            bound_plus=chain.bound_plus,
            bound_minus=chain.bound_minus,
            name=name,
        )


def _prepare(
    command: str,
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
) -> Run:
    # options left unset fall through to CALDERON_* environment variables
    overrides: dict[str, Any] = {}
    if output_dir is not None:
        overrides["output_dir"] = output_dir
    if workers is not None:
        overrides["workers"] = workers
    if verbose:
        overrides["verbose"] = True
    if quiet:
        overrides["quiet"] = True
    settings = CalderonSettings(**overrides)

    from waveguide_calderon.display.terminal import configure_logging

    configure_logging(settings)
    return Run(command, settings, load_config(config_path))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailedError(message)


@click.group()
@click.version_option(version=__version__)
def cli() -> None:
    """Partial-data Calderón toolkit for periodic waveguides."""


@cli.command()
@_common_options
def mesh(
    config_path: str, output_dir: str | None, workers: int | None, verbose: bool, quiet: bool
) -> None:
    """Triangulate the cross-section and write it in the mesh text format."""
    run = _prepare("mesh", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.geometry.mesh import mesh_summary
    from waveguide_calderon.storage.formats import write_mesh

    summary = mesh_summary(run.mesh)
    write_mesh(run.mesh, run.store.path("mesh.txt"))
    run.store.write_json("mesh.json", summary)
    run.display.display_summary("Mesh", summary)


@cli.command()
@_common_options
@click.option("--count", default=4, type=int, show_default=True, help="Eigenpairs to report")
def eig(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    count: int,
) -> None:
    """Poincaré constant C_ω with a refinement check, and the first Dirichlet eigenvalues."""
    run = _prepare("eig", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.geometry.poincare import (
        dirichlet_eigenpairs,
        poincare_constant_converged,
    )

    estimate = poincare_constant_converged(run.config.cross_section)
    values, _ = dirichlet_eigenpairs(run.mesh, count)
    run.store.write_json(
        "eig.json", {"poincare": estimate, "eigenvalues": [float(v) for v in values]}
    )
    run.display.display_summary(
        "Poincaré constant",
        {
            "C_ω(h)": f"{estimate.value:.6f}",
            "C_ω(h/2)": f"{estimate.refined_value:.6f}",
            "extrapolated": f"{estimate.extrapolated_value:.6f}",
            "eigenvalues": ", ".join(f"{v:.5f}" for v in values),
        },
    )


@cli.group()
def forward() -> None:
    """Fibered forward problem and DN differences."""


@forward.command("solve")
@_common_options
@click.option("--potential", "potential_name", default=None, help="Potential preset")
@click.option("--theta", default=None, type=float, help="Quasi-momentum (default: first θ)")
def forward_solve(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    potential_name: str | None,
    theta: float | None,
) -> None:
    """Solve one fiber problem with the quasi-periodic trace e^{iθx₁}(1 + x₂)."""
    run = _prepare("forward solve", config_path, output_dir, workers, verbose, quiet)

    import numpy as np

    from waveguide_calderon.forward.solver import DirichletData, FiberOperator
    from waveguide_calderon.spectral.fiber import FiberContext
    from waveguide_calderon.storage.formats import save_expansion

    name = potential_name or run.config.stability.base
    theta = run.config.fiber.thetas[0] if theta is None else theta
    ctx = FiberContext(theta, run.config.fiber.K, run.mesh)
    trace = DirichletData.from_function(ctx, lambda x1, x2, x3: np.exp(1j * theta * x1) * (1 + x2))
    operator = FiberOperator(run.potential(name), ctx)
    solution = operator.solve(trace)
    residual = operator.residual_norm(solution)
    _require(
        residual <= run.config.tolerances.residual,
        f"relative residual {residual:.3e} above {run.config.tolerances.residual:.1e}",
    )
    save_expansion(solution, run.store.path("solution.npz"))
    report = {
        "potential": name,
        "theta": theta,
        "l2_norm": solution.l2_norm(),
        "residual": residual,
    }
    run.store.write_json("forward_solve.json", report)
    run.display.display_summary("Forward solve", report)


@forward.command("dnnorm")
@_common_options
@click.option("--first", default=None, help="Preset for V₁ (default: recover.first)")
@click.option("--second", default=None, help="Preset for V₂ (default: recover.second)")
def forward_dnnorm(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    first: str | None,
    second: str | None,
) -> None:
    """sup over the θ-grid of ‖Λ_{V₁,θ} − Λ_{V₂,θ}‖."""
    run = _prepare("forward dnnorm", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.forward.dnmap import dn_sup_over_fibers

    first = first or run.config.recover.first
    second = second or run.config.recover.second
    result = dn_sup_over_fibers(
        run.potential(first),
        run.potential(second),
        run.config.fiber.thetas,
        run.partition.input_face,
        run.partition.output_face,
        run.config.fiber.K,
        workers=run.settings.workers,
    )
    run.store.write_csv("dn_fibers.csv", result.fibers, ["theta", "gamma"])
    run.store.write_json("dnnorm.json", result)
    run.display.display_dn_sup(result)


@cli.command()
@_common_options
@click.option("--potential", "potential_name", default=None, help="Potential preset")
@click.option("--theta", default=None, type=float, help="Quasi-momentum (default: first θ)")
def dnmap(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    potential_name: str | None,
    theta: float | None,
) -> None:
    """Assemble and store one partial DN map."""
    run = _prepare("dnmap", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.forward.dnmap import assemble_partial_dn
    from waveguide_calderon.spectral.fiber import FiberContext

    name = potential_name or run.config.recover.first
    theta = run.config.fiber.thetas[0] if theta is None else theta
    ctx = FiberContext(theta, run.config.fiber.K, run.mesh)
    dn = assemble_partial_dn(
        run.potential(name), ctx, run.partition.input_face, run.partition.output_face
    )
    run.store.save_dnmap(f"dnmap_{name}", dn)
    run.display.display_summary(
        "DN map",
        {"potential": name, "θ": theta, "inputs": dn.n_inputs, "outputs": dn.matrix.shape[0]},
    )


# also reachable as `forward dnmap`
forward.add_command(dnmap)


@cli.group()
def cgo() -> None:
    """Complex geometric optics solutions."""


@cgo.command("params")
@_common_options
def cgo_params(
    config_path: str, output_dir: str | None, workers: int | None, verbose: bool, quiet: bool
) -> None:
    """Derive ζ₁, ζ₂ from (k, η, r, θ) and verify their algebraic identities."""
    run = _prepare("cgo params", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.cgo.params import check_invariants, make_cgo_params

    c = run.config.cgo
    params = make_cgo_params(c.k, c.eta, c.r, c.theta, xi0=run.config.faces.xi0)
    defects = check_invariants(params)
    run.store.write_json("cgo_params.json", {"params": params.as_dict(), "defects": defects})
    run.display.display_summary("CGO parameters", {**params.as_dict(), **defects})
    worst = max(defects.values())
    _require(worst <= 1e-12, f"largest CGO invariant defect {worst:.3e}")


def _ladder_command(kind_name: str, check: bool, run: Run) -> None:
    from waveguide_calderon.cgo.ladder import decay_ladder
    from waveguide_calderon.models import CGOKind

    kind = CGOKind(kind_name)
    c = run.config.cgo
    ladder = decay_ladder(
        run.potential(c.potential),
        kind,
        c.k,
        c.eta,
        c.theta,
        c.taus,
        xi0=run.config.faces.xi0,
        epsilon=run.partition.epsilon,
        K=run.config.fiber.K,
        grid=c.grid,
        tau_floor=c.tau_floor,
        with_trace=kind == CGOKind.VANISHING,
        workers=run.settings.workers,
    )
    run.store.write_csv(f"ladder_{kind.value}.csv", ladder.rows)
    run.store.write_json(f"ladder_{kind.value}.json", ladder)
    run.display.display_ladder(ladder)
    if not check:
        return
    if kind == CGOKind.SMOOTH:
        _require(-1.25 <= ladder.slope <= -0.75, f"smooth decay slope {ladder.slope:.3f}")
    else:
        _require(ladder.slope <= -0.3, f"vanishing decay slope {ladder.slope:.3f}")


_check_option = click.option(
    "--check/--no-check", default=True, show_default=True, help="Assert the expected behaviour"
)


@cgo.command("smooth")
@_common_options
@_check_option
def cgo_smooth(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """τ-ladder of the periodic remainder ‖v_{ζ₁}‖."""
    run = _prepare("cgo smooth", config_path, output_dir, workers, verbose, quiet)
    _ladder_command("smooth", check, run)


@cgo.command("vanishing")
@_common_options
@_check_option
def cgo_vanishing(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """τ-ladder of the boundary-vanishing remainder ‖v_{ζ₂}‖."""
    run = _prepare("cgo vanishing", config_path, output_dir, workers, verbose, quiet)
    _ladder_command("vanishing", check, run)


@cgo.command("carleman")
@_common_options
@_check_option
def cgo_carleman(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """Empirical Carleman quotients over random zero-trace fields."""
    run = _prepare("cgo carleman", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.cgo.carleman import carleman_empirical, random_dirichlet_fields
    from waveguide_calderon.spectral.fiber import FiberContext

    c = run.config.cgo
    ctx = FiberContext(c.theta, run.config.fiber.K, run.mesh)
    fields = random_dirichlet_fields(ctx, c.carleman_fields, seed=run.config.seed)
    table = carleman_empirical(
        run.potential(c.potential), run.config.faces.xi0, c.theta, c.carleman_taus, fields
    )
    run.store.write_csv("carleman.csv", table.rows, ["tau", "field_index", "ratio"])
    run.store.write_json("carleman.json", {"floors": table.floors})
    run.display.display_carleman(table)
    if check:
        floors = [table.floors[t] for t in sorted(table.floors)]
        _require(min(floors) > 0, "Carleman floor is not positive")
        _require(table.floor_nondecreasing, "Carleman floor decreases along τ")


@cli.group()
def recover() -> None:
    """Fourier recovery of V₁ − V₂ from partial DN data."""


def _simulated_data(run: Run):
    from waveguide_calderon.forward.dnmap import SimulatedDNData, dn_sup_over_fibers

    r = run.config.recover
    first, second = run.potential(r.first), run.potential(r.second)
    gamma = dn_sup_over_fibers(
        first,
        second,
        run.config.fiber.thetas,
        run.partition.input_face,
        run.partition.output_face,
        run.config.fiber.K,
        workers=run.settings.workers,
    ).gamma
    return SimulatedDNData(first, second, run.partition), gamma


@recover.command("coeff")
@_common_options
@_check_option
def recover_coeff(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """Estimate one coefficient at the τ-policy value and compare with quadrature."""
    run = _prepare("recover coeff", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.cgo.params import params_for_tau
    from waveguide_calderon.forward.presets import preset_function
    from waveguide_calderon.oracle.quadrature import fourier_coefficient
    from waveguide_calderon.recon.budget import tau_policy
    from waveguide_calderon.recon.fourier import estimate_with_params

    r = run.config.recover
    data, gamma = _simulated_data(run)
    tau = tau_policy(gamma, r.tau_floor, r.c_hat, tau_max=r.tau_max)
    xi0 = run.partition.xi0
    params = params_for_tau(r.k, r.eta, run.config.fiber.thetas[0], tau, xi0=xi0)
    sample = estimate_with_params(
        data,
        params,
        xi0,
        run.partition.epsilon,
        K=run.config.fiber.K,
        grid=run.config.cgo.grid,
        tau_floor=min(r.tau_floor, tau),
        gamma=gamma or None,
    )
    first = preset_function(run.config.potentials[r.first], run.config.seed)
    second = preset_function(run.config.potentials[r.second], run.config.seed)
    exact = fourier_coefficient(
        lambda x1, x2, x3: first(x1, x2, x3) - second(x1, x2, x3), run.mesh, r.k, r.eta
    )
    error = abs(sample.estimate - exact)
    relative = error / abs(exact) if abs(exact) > 0 else error
    run.store.write_csv("coefficients.csv", [sample])
    run.store.write_json(
        "coefficient.json",
        {"sample": sample, "gamma": gamma, "exact": [exact.real, exact.imag], "error": relative},
    )
    run.display.display_coefficients([sample])
    run.display.display_summary(
        "Oracle", {"exact": f"{exact:.4e}", "relative error": f"{relative:.3%}", "γ": gamma}
    )
    if check and abs(exact) > 0:
        _require(relative <= 0.1, f"recovered coefficient off by {relative:.1%}")


@recover.command("field")
@_common_options
def recover_field(
    config_path: str, output_dir: str | None, workers: int | None, verbose: bool, quiet: bool
) -> None:
    """Estimate every accessible grid coefficient and synthesize V₁ − V₂."""
    run = _prepare("recover field", config_path, output_dir, workers, verbose, quiet)

    import numpy as np

    from waveguide_calderon.recon.fourier import FrequencyGrid, reconstruct_difference

    r = run.config.recover
    data, gamma = _simulated_data(run)
    grid = FrequencyGrid(r.ks, r.box_side, r.max_index)
    result = reconstruct_difference(
        data,
        grid,
        r.directions,
        gamma=gamma,
        tau_floor=r.tau_floor,
        tau_max=r.tau_max,
        c_hat=r.c_hat,
        theta=run.config.fiber.thetas[0],
        K=run.config.fiber.K,
        box_grid=run.config.cgo.grid,
        workers=run.settings.workers,
    )
    run.store.write_csv("coefficients.csv", result.samples)
    samples = result.field.samples(np.array([0.0, 0.25, 0.5]))
    run.store.write_json(
        "field.json",
        {"coverage": result.coverage, "gamma": gamma, "sup_at_x1": np.abs(samples).max(axis=1)},
    )
    run.display.display_coefficients(result.samples, result.coverage)


@cli.group()
def stability() -> None:
    """Stability of V from partial DN data."""


@stability.command("sweep")
@_common_options
@_check_option
def stability_sweep(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """Compare δ = ‖V₁ − V₂‖ with Φ(γ) along V₂ = V₁ + s·W."""
    run = _prepare("stability sweep", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.recon.stability import run_stability_experiment

    s = run.config.stability
    report = run_stability_experiment(
        run.potential(s.base),
        run.potential(s.perturbation),
        s.exponents,
        run.partition,
        run.config.fiber.thetas,
        run.config.fiber.K,
        s.gamma_star,
        include_zero=s.include_zero,
        workers=run.settings.workers,
    )
    run.store.write_csv("stability.csv", report.records, ["s", "gamma", "delta", "phi", "ratio"])
    run.store.write_json("stability.json", report)
    run.display.display_stability(report)
    if check:
        _require(report.gamma_monotone, "γ is not monotone along the ladder")
        _require(report.delta_monotone, "δ is not monotone along the ladder")
        _require(report.spread < 10.0, f"ratio spread {report.spread:.3g} exceeds one decade")


@cli.group()
def conductivity() -> None:
    """Conductivity equation via the Liouville transform."""


@conductivity.command("check")
@_common_options
@_check_option
def conductivity_check(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """Admissibility report for both conductivities of the pair."""
    run = _prepare("conductivity check", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.conductivity.liouville import admissibility_check

    chain = run.config.conductivity
    reports = {
        name: admissibility_check(run.conductivity(name)) for name in (chain.first, chain.second)
    }
    run.store.write_json("admissibility.json", reports)
    for report in reports.values():
        run.display.display_admissibility(report)
    if check:
        bad = [name for name, report in reports.items() if not report.admissible]
        _require(not bad, f"inadmissible conductivities: {', '.join(bad)}")


@conductivity.command("sigma")
@_common_options
@_check_option
def conductivity_sigma(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """‖Σ_{a₁} − Σ_{a₂}‖ and the Λ-difference it controls."""
    run = _prepare("conductivity sigma", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.conductivity.sigma import sigma_difference_norm
    from waveguide_calderon.spectral.fiber import FiberContext

    chain = run.config.conductivity
    ctx = FiberContext(chain.theta, run.config.fiber.K, run.mesh)
    report = sigma_difference_norm(
        run.conductivity(chain.first),
        run.conductivity(chain.second),
        ctx,
        run.partition.input_face,
        run.partition.output_face,
        tolerance=run.config.tolerances.compatibility,
    )
    run.store.write_json("sigma.json", report)
    run.display.display_sigma(report)
    if check:
        _require(report.inequality_holds, "‖Λ₁ − Λ₂‖ exceeds a*^(-1/2)‖Σ₁ − Σ₂‖")


@conductivity.command("stability")
@_common_options
@_check_option
def conductivity_stability_command(
    config_path: str,
    output_dir: str | None,
    workers: int | None,
    verbose: bool,
    quiet: bool,
    check: bool,
) -> None:
    """H¹ stability chain for the pair and the fitted constant over a bump ladder."""
    run = _prepare("conductivity stability", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.conductivity.field import bump_shape
    from waveguide_calderon.conductivity.stability import (
        conductivity_ladder,
        conductivity_stability,
    )

    chain = run.config.conductivity
    gamma_star = run.config.stability.gamma_star
    first = run.conductivity(chain.first)
    pair = conductivity_stability(
        first,
        run.conductivity(chain.second),
        run.partition,
        K=run.config.fiber.K,
        theta=chain.theta,
        gamma_star=gamma_star,
        tolerance=run.config.tolerances.compatibility,
        residual_tolerance=run.config.tolerances.residual,
    )
    ladder = conductivity_ladder(
        first,
        bump_shape(run.config.conductivities[chain.perturbation]),
        chain.exponents,
        run.partition,
        K=run.config.fiber.K,
        theta=chain.theta,
        gamma_star=gamma_star,
        workers=run.settings.workers,
    )
    run.store.write_csv("conductivity_ladder.csv", ladder.rows)
    run.store.write_json("conductivity_stability.json", {"pair": pair, "ladder": ladder})
    run.display.display_conductivity(pair)
    run.display.display_conductivity_ladder(ladder)
    if check:
        _require(pair.factor_holds, "‖a₁ − a₂‖_H¹ exceeds the α factor bound")
        _require(
            pair.alpha_agreement <= run.config.tolerances.agreement,
            f"α cross-check differs by {pair.alpha_agreement:.2%}",
        )
        _require(ladder.spread < 10.0, f"ladder ratio spread {ladder.spread:.3g}")


@cli.command()
@_common_options
def oracle(
    config_path: str, output_dir: str | None, workers: int | None, verbose: bool, quiet: bool
) -> None:
    """Regenerate the table of derived reference values."""
    run = _prepare("oracle", config_path, output_dir, workers, verbose, quiet)

    from waveguide_calderon.oracle.derived import derived_examples

    rows = derived_examples(run.config)
    run.store.write_csv("derived_examples.csv", rows, ["name", "value", "source"])
    run.display.display_examples(rows)


@cli.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--output", "-o", default=None, help="Output path (default: <run_dir>/report.html)")
@_handle_errors
def report(run_dir: str, output: str | None) -> None:
    """Turn the CSV tables of a run directory into one interactive HTML report."""
    from waveguide_calderon.display.charts import generate_html_report

    try:
        path = generate_html_report(Path(run_dir), output)
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"Generated HTML report: {path}")
