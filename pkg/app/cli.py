"""
Command-line front end: single-point properties, grid scans, engine cycles,
qubit estimates and the verification suite, emitted as CSV or JSON documents.

    python -m app.cli props --n 2 --d 2 --omega 1 --nu 0 --beta 1
    python -m app.cli scan --quantity p_fermi --x nu:-5:5:11 --y beta:0.5:2:4 --n 2 --d 2 --omega 1 --format csv
"""
import argparse
import json
import logging
import re
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.config import settings
from app.models.document import Document
from app.models.engine import Medium, OttoHeatForm, OttoSpec, StirlingSpec
from app.models.run_config import Command, OutputFormat, RunConfig
from app.models.scan import AxisSpec, GridScanRequest, ScanParameter, ScanQuantity
from app.models.system import FreeParameter, SystemParams, ThermoPoint
from app.models.validation import AnyonDomainError, ErrorFormatter, NoBracketError, UsageError
from app.repositories.document_repository import DocumentRepository
from app.services.engines import engine_service
from app.services.oracle import oracle_service
from app.services.report_builder import report_builder
from app.services.scan_service import scan_service
from app.services.transitions import transition_service
from app.services.verification import VerificationService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4

# pydantic field name -> command-line flag
FIELD_FLAGS = {
    "n_particles": "--n",
    "spin_dim": "--d",
    "omega": "--omega",
    "nu": "--nu",
    "beta": "--beta",
    "beta_hot": "--beta-hot",
    "beta_cold": "--beta-cold",
    "nu_1": "--nu1",
    "nu_2": "--nu2",
    "omega_1": "--omega1",
    "omega_2": "--omega2",
    "k_fermi": "--k-fermi",
    "medium": "--medium",
    "x_axis": "--x",
    "y_axis": "--y",
    "precision": "--precision",
    "jobs": "--jobs",
}


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting so errors become documents"""

    def error(self, message: str):
        match = re.search(r"argument (--?[\w-]+)", message) or re.search(r"required: (--?[\w-]+)", message)
        raise UsageError(match.group(1) if match else self.prog, message)


def _add_system_flags(parser: argparse.ArgumentParser, omega: bool = True, nu: bool = True) -> None:
    parser.add_argument("--n", type=int, required=True, help="Number of particles N")
    parser.add_argument("--d", type=int, required=True, help="Spin dimension d")
    if omega:
        parser.add_argument("--omega", type=float, required=True, help="Trap frequency")
    if nu:
        parser.add_argument("--nu", type=float, default=0.0, help="Symmetry bias energy")


def _add_thermal_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--temp", type=float, help="Temperature")
    group.add_argument("--beta", type=float, help="Inverse temperature")


def build_parser() -> argparse.ArgumentParser:
    common = CliArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--output", help="Output path (relative paths resolve against ANYON_OUTPUT_DIR)")
    common.add_argument("--precision", type=int, default=settings.OUTPUT_PRECISION, help="Significant digits")
    common.add_argument("--jobs", type=int, default=settings.SCAN_JOBS, help="Worker processes for scans")
    common.add_argument(
        "--si", type=float, nargs=2, metavar=("HBAR", "KB"), help="Explicit hbar and k_B instead of natural units"
    )

    parser = CliArgumentParser(
        prog="anyon-thermo",
        description="Thermodynamics, transitions and engine cycles of Hamiltonian anyons",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    props = subparsers.add_parser("props", parents=[common], help="Equilibrium properties at one point")
    _add_system_flags(props)
    _add_thermal_flags(props)

    scan = subparsers.add_parser("scan", parents=[common], help="Two-dimensional parameter scan")
    _add_system_flags(scan)
    _add_thermal_flags(scan, required=False)
    scan.add_argument("--quantity", choices=[q.value for q in ScanQuantity], required=True)
    scan.add_argument("--x", required=True, help="x axis, param:start:stop:count[:log]")
    scan.add_argument("--y", required=True, help="y axis, param:start:stop:count[:log]")

    transition = subparsers.add_parser("transition", parents=[common], help="Locate the phi = 0 midpoint")
    _add_system_flags(transition)
    _add_thermal_flags(transition)
    transition.add_argument("--free", choices=[f.value for f in FreeParameter], default=FreeParameter.NU.value)

    stirling = subparsers.add_parser("stirling", parents=[common], help="Bias-driven Stirling cycle")
    _add_system_flags(stirling, nu=False)
    stirling.add_argument("--beta-hot", type=float, required=True)
    stirling.add_argument("--beta-cold", type=float, required=True)
    stirling.add_argument("--nu1", type=float, required=True, help="Bias at the end of the hot isotherm")
    stirling.add_argument("--nu2", type=float, required=True, help="Bias at the end of the cold isotherm")

    stirling_map = subparsers.add_parser("stirling-map", parents=[common], help="Stirling performance over nu1 x nu2")
    _add_system_flags(stirling_map, nu=False)
    stirling_map.add_argument("--beta-hot", type=float, required=True)
    stirling_map.add_argument("--beta-cold", type=float, required=True)
    stirling_map.add_argument("--nu1", required=True, help="nu1 axis, start:stop:count[:log]")
    stirling_map.add_argument("--nu2", required=True, help="nu2 axis, start:stop:count[:log]")

    otto = subparsers.add_parser("otto", parents=[common], help="Frequency-switched Otto cycle")
    _add_system_flags(otto, omega=False)
    otto.add_argument("--beta-hot", type=float, required=True)
    otto.add_argument("--beta-cold", type=float, required=True)
    otto.add_argument("--omega1", type=float, required=True, help="Compressed trap frequency")
    otto.add_argument("--omega2", type=float, required=True, help="Expanded trap frequency")
    otto.add_argument("--medium", choices=[m.value for m in Medium], default=Medium.HAMILTONIAN_ANYON.value)
    otto.add_argument("--k-fermi", type=float, help="Fermionic fraction of the statistical medium")
    otto.add_argument("--heat-form", choices=[h.value for h in OttoHeatForm])

    otto_sweep = subparsers.add_parser("otto-sweep", parents=[common], help="Otto performance against N")
    otto_sweep.add_argument("--n-values", type=int, nargs="+", default=[4, 10, 20, 50])
    otto_sweep.add_argument("--beta-hot", type=float, default=1.0)
    otto_sweep.add_argument("--beta-ratio", type=float, default=2.0)
    otto_sweep.add_argument("--phi-hot", type=float, default=-0.1)
    otto_sweep.add_argument("--phi-cold", type=float, default=0.1)
    otto_sweep.add_argument(
        "--media",
        nargs="+",
        choices=[m.value for m in Medium],
        default=[Medium.HAMILTONIAN_ANYON.value, Medium.FERMION.value, Medium.BOSON.value],
    )
    otto_sweep.add_argument("--k-fermi", type=float, default=0.5)
    otto_sweep.add_argument("--heat-form", choices=[h.value for h in OttoHeatForm])

    qubits = subparsers.add_parser("qubits", parents=[common], help="Qubits needed to hold the thermal state")
    _add_system_flags(qubits, nu=False)
    qubits.add_argument("--temp", type=float, nargs="+", required=True, help="One or more temperatures")
    qubits.add_argument("--coverage", type=float, default=0.999)

    verify = subparsers.add_parser("verify", parents=[common], help="Run the verification suite")
    verify.add_argument("--seed", type=int, default=20240611)

    serve = subparsers.add_parser("serve", help="Run the HTTP API with uvicorn")
    serve.add_argument("--host", default="0.0.0.0")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Bind parsed arguments into a validated RunConfig"""
    bindings = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "format", "output", "precision", "jobs")
    }
    return RunConfig(
        command=args.command,
        bindings=bindings,
        output_format=args.format,
        output_path=args.output,
        precision=args.precision,
        jobs=args.jobs,
    )


def _units(config: RunConfig) -> Dict[str, float]:
    si = config.get("si")
    if si is None:
        return {}
    return {"hbar": si[0], "k_boltzmann": si[1]}


def _params(config: RunConfig, **overrides: Any) -> SystemParams:
    values = {
        "n_particles": config.get("n"),
        "spin_dim": config.get("d"),
        "omega": config.get("omega"),
        "nu": config.get("nu", 0.0),
        **_units(config),
    }
    values.update(overrides)
    return SystemParams(**values)


def _beta(config: RunConfig, params: SystemParams, required: bool = True) -> Optional[float]:
    temperature = config.get("temp")
    if temperature is not None:
        if temperature <= 0:
            raise UsageError("--temp", "temperature must be positive")
        return 1.0 / (params.k_boltzmann * temperature)
    beta = config.get("beta")
    if beta is None and required:
        raise UsageError("--temp/--beta", "one of --temp or --beta is required")
    return beta


def _parse_axis(text: str, flag: str, prefix: str = "") -> AxisSpec:
    try:
        return AxisSpec.parse(prefix + text)
    except (ValidationError, ValueError) as e:
        raise UsageError(flag, str(e))


def _props(config: RunConfig) -> Document:
    params = _params(config)
    return report_builder.props_document(ThermoPoint(params=params, beta=_beta(config, params)))


def _scan(config: RunConfig) -> Document:
    params = _params(config)
    x_axis = _parse_axis(config.get("x"), "--x")
    y_axis = _parse_axis(config.get("y"), "--y")
    thermal = {ScanParameter.TEMPERATURE, ScanParameter.BETA}
    scans_thermal = x_axis.parameter in thermal or y_axis.parameter in thermal

    # a thermal axis overrides the base point, which then only needs a placeholder
    beta = _beta(config, params, required=not scans_thermal) or 1.0
    request = GridScanRequest(
        x_axis=x_axis,
        y_axis=y_axis,
        quantity=config.get("quantity"),
        params=params,
        beta=beta,
    )
    return report_builder.scan_document(scan_service.grid_scan(request, jobs=config.jobs))


def _transition(config: RunConfig) -> Document:
    params = _params(config)
    point = ThermoPoint(params=params, beta=_beta(config, params))
    free = FreeParameter(config.get("free", FreeParameter.NU.value))
    value = transition_service.solve_transition(point, free)
    return report_builder.transition_document(
        point,
        free.value,
        value,
        transition_service.closed_form_transition(point, free),
        transition_service.transition_width(point, free),
    )


def _stirling(config: RunConfig) -> Document:
    spec = StirlingSpec(
        params=_params(config, nu=0.0),
        beta_hot=config.get("beta_hot"),
        beta_cold=config.get("beta_cold"),
        nu_1=config.get("nu1"),
        nu_2=config.get("nu2"),
    )
    result = engine_service.stirling_cycle(spec)
    limits = None if spec.params.antisymmetric_empty else engine_service.stirling_limits(spec)
    return report_builder.stirling_document(spec, result, limits)


def _stirling_map(config: RunConfig) -> Document:
    params = _params(config, nu=0.0)
    beta_hot = config.get("beta_hot")
    beta_cold = config.get("beta_cold")
    stirling_map = engine_service.stirling_map(
        params,
        beta_hot,
        beta_cold,
        _parse_axis(config.get("nu1"), "--nu1", "nu:"),
        _parse_axis(config.get("nu2"), "--nu2", "nu:"),
        jobs=config.jobs,
    )
    return report_builder.stirling_map_document(params, beta_hot, beta_cold, stirling_map)


def _otto(config: RunConfig) -> Document:
    omega_1 = config.get("omega1")
    spec = OttoSpec(
        params=_params(config, omega=omega_1),
        beta_hot=config.get("beta_hot"),
        beta_cold=config.get("beta_cold"),
        omega_1=omega_1,
        omega_2=config.get("omega2"),
        medium=config.get("medium", Medium.HAMILTONIAN_ANYON.value),
        k_fermi=config.get("k_fermi"),
    )
    heat_form = OttoHeatForm(config.get("heat_form", settings.OTTO_HEAT_FORM))
    result = engine_service.otto_cycle(spec, heat_form)
    return report_builder.otto_document(spec, result, heat_form.value)


def _otto_sweep(config: RunConfig) -> Document:
    heat_form = OttoHeatForm(config.get("heat_form", settings.OTTO_HEAT_FORM))
    options = {
        "beta_ratio": config.get("beta_ratio"),
        "phi_hot": config.get("phi_hot"),
        "phi_cold": config.get("phi_cold"),
        "beta_hot": config.get("beta_hot"),
        "k_fermi": config.get("k_fermi"),
    }
    if options["beta_ratio"] <= 1:
        raise UsageError("--beta-ratio", "the cold bath needs beta_ratio > 1")
    rows = engine_service.otto_sweep(
        config.get("n_values"),
        media=[Medium(m) for m in config.get("media")],
        heat_form=heat_form,
        **options,
    )
    return report_builder.otto_sweep_document(rows, {**options, "heat_form": heat_form.value})


def _qubits(config: RunConfig) -> Document:
    params = _params(config, nu=0.0)
    coverage = config.get("coverage")
    reports = [oracle_service.qubit_requirement(params, t, coverage) for t in config.get("temp")]
    return report_builder.qubits_document(params, reports)


def _verify(config: RunConfig) -> Tuple[Document, int]:
    service = VerificationService(seed=config.get("seed"))
    results = service.run_all_checks()
    service.print_report(results)
    status = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED
    return report_builder.verify_document(results), status


HANDLERS = {
    Command.PROPS: _props,
    Command.SCAN: _scan,
    Command.TRANSITION: _transition,
    Command.STIRLING: _stirling,
    Command.STIRLING_MAP: _stirling_map,
    Command.OTTO: _otto,
    Command.OTTO_SWEEP: _otto_sweep,
    Command.QUBITS: _qubits,
}


def _error_text(error: Dict[str, Any]) -> str:
    return json.dumps(error, indent=2, ensure_ascii=False) + "\n"


def _pydantic_usage_error(error: ValidationError) -> Dict[str, Any]:
    formatted = ErrorFormatter.format_pydantic_error(error)
    for detail in formatted["details"]:
        leaf = detail["field"].split(".")[-1] if detail["field"] else ""
        detail["flag"] = FIELD_FLAGS.get(leaf, leaf)
    return formatted


def run(config: RunConfig) -> Tuple[int, str]:
    """Execute one command; returns (exit status, document text).

    Error documents are returned with a non-zero status and the caller routes them to stderr.
    """
    status = EXIT_OK
    try:
        if config.command == Command.VERIFY:
            document, status = _verify(config)
        else:
            document = HANDLERS[config.command](config)
    except UsageError as e:
        logger.warning(f"Usage error on {e.flag}: {e}")
        return EXIT_USAGE, _error_text(ErrorFormatter.format_usage_error(e.flag, str(e)))
    except ValidationError as e:
        logger.warning(f"Validation error: {e}")
        return EXIT_USAGE, _error_text(_pydantic_usage_error(e))
    except NoBracketError as e:
        logger.warning(f"No bracket: {e}")
        return EXIT_NUMERICAL, _error_text(ErrorFormatter.format_numerical_error("bracketing", str(e)))
    except AnyonDomainError as e:
        logger.warning(f"Domain error: {e}")
        return EXIT_DOMAIN, _error_text(ErrorFormatter.format_domain_error(e))
    except (ArithmeticError, RuntimeError) as e:
        logger.error(f"Numerical failure in {config.command.value}: {e}")
        return EXIT_NUMERICAL, _error_text(ErrorFormatter.format_numerical_error(config.command.value, str(e)))

    try:
        text = DocumentRepository(config.precision).render(document, config.output_format.value)
    except ValueError as e:
        logger.error(f"Could not emit {document.kind} document: {e}")
        return EXIT_NUMERICAL, _error_text(ErrorFormatter.format_numerical_error("emission", str(e)))

    logger.info(f"{config.command.value}: {len(document.rows)} rows")
    return status, text


def serve(host: str, port: int) -> None:
    import uvicorn

    uvicorn.run("app.main:app", host=host, port=port)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            serve(args.host, args.port)
            return EXIT_OK
        config = config_from_args(args)
    except UsageError as e:
        sys.stderr.write(_error_text(ErrorFormatter.format_usage_error(e.flag, str(e))))
        return EXIT_USAGE
    except ValidationError as e:
        sys.stderr.write(_error_text(_pydantic_usage_error(e)))
        return EXIT_USAGE

    status, text = run(config)
    if status in (EXIT_OK, EXIT_VERIFY_FAILED):
        DocumentRepository(config.precision).write(text, config.output_path)
    else:
        sys.stderr.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
