"""Main application entry point."""

import argparse
import json
import os
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from quantum_witness.bounds.models import EntropyKind
from quantum_witness.config import get_optimizer_profile, get_settings
from quantum_witness.errors import QuantumWitnessError
from quantum_witness.experiment.analysis import AnalysisResult, WitnessAnalysis
from quantum_witness.utils.logger import bind_run_context, configure_logging, get_logger
from quantum_witness.utils.metrics import track_analysis, write_metrics

logger = get_logger(__name__)

Command = Literal["bounds", "entropy", "coherence", "chsh", "svetlichny", "witness", "tomography"]

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_ERROR = 2


class RunConfig(BaseModel):
    """Validated command-line options."""

    command: Command
    entropy: EntropyKind | None = None
    k: float = Field(default=2.0, gt=0.0)
    thetas: list[float] = Field(default_factory=list)
    pair: str | None = Field(default=None, pattern=r"^[XZWxzw]-[XZWxzw]$")
    fixtures: str | None = None
    seed: int | None = Field(default=None, ge=0)
    samples: int | None = Field(default=None, ge=1000)
    points: int | None = Field(default=None, ge=2)
    out: Path | None = None
    json_output: bool = False
    tol: float | None = Field(default=None, gt=0.0)
    profile: str | None = None
    workers: int | None = Field(default=None, ge=1, le=32)
    metrics_out: Path | None = None

    @field_validator("thetas")
    @classmethod
    def validate_thetas(cls, v: list[float]) -> list[float]:
        for theta in v:
            if not 0.0 <= theta <= 90.0:
                raise ValueError(f"theta {theta} outside [0, 90] degrees")
        return v

    @field_validator("pair")
    @classmethod
    def validate_pair(cls, v: str | None) -> str | None:
        if v is not None and v[0].upper() == v[2].upper():
            raise ValueError(f"pair {v} needs two different measurements")
        return v.upper() if v else v

    @model_validator(mode="after")
    def check_order(self) -> "RunConfig":
        # bounds without --entropy sweeps every kind, Renyi and Tsallis included.
        ordered = self.entropy not in (None, EntropyKind.SHANNON) or (self.entropy is None and self.command == "bounds")
        if ordered and self.k == 1.0:
            raise ValueError("Renyi and Tsallis entropies need k != 1")
        return self


def parse_thetas(value: str) -> list[float]:
    return [float(part) for part in value.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantum-witness",
        description="Majorization witnesses of uncertainty, coherence and nonlocality",
    )
    parser.add_argument("--profile", help="Optimizer profile from optimizer.yaml")
    parser.add_argument("--workers", type=int, help="Worker threads for refinement and resampling")
    parser.add_argument("--metrics-out", type=Path, help="Write Prometheus metrics to this file")
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    def add_output(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--out", type=Path, help="Write output to this file instead of stdout")
        sub.add_argument("--json", action="store_true", dest="json_output", help="Emit JSON instead of CSV")
        sub.add_argument("--tol", type=float, help="Tolerance for majorization verdicts")

    def add_fixtures(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--fixtures", help="Directory holding table1..table4.csv")

    def add_thetas(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--theta", type=parse_thetas, dest="thetas", default=[], help="Comma-separated angles (deg)")

    bounds = subparsers.add_parser("bounds", help="Sweep entropic lower bounds over the overlap c")
    bounds.add_argument("--entropy", choices=[k.value for k in EntropyKind], help="Entropy kind (default: all)")
    bounds.add_argument("--k", type=float, default=2.0, help="Renyi/Tsallis order")
    bounds.add_argument("--points", type=int, help="Number of overlap values")
    add_output(bounds)

    entropy = subparsers.add_parser("entropy", help="Measured entropy totals from the marginal table")
    entropy.add_argument("--entropy", choices=[k.value for k in EntropyKind], default="shannon")
    entropy.add_argument("--k", type=float, default=2.0, help="Renyi/Tsallis order")
    entropy.add_argument("--pair", help="Measurement pair such as X-Z (default: all)")
    add_thetas(entropy)
    add_fixtures(entropy)
    add_output(entropy)

    coherence = subparsers.add_parser("coherence", help="D_H from the phi-scan table")
    add_fixtures(coherence)
    add_thetas(coherence)
    add_output(coherence)

    chsh = subparsers.add_parser("chsh", help="CHSH values and verdicts from the coincidence table")
    add_fixtures(chsh)
    add_thetas(chsh)
    chsh.add_argument("--seed", type=int, help="Resampling seed")
    chsh.add_argument("--samples", type=int, help="Poisson resamples")
    add_output(chsh)

    svetlichny = subparsers.add_parser("svetlichny", help="Three-party Svetlichny demonstration")
    add_output(svetlichny)

    witness = subparsers.add_parser("witness", help="Bell-state witness as a majorization relation")
    add_thetas(witness)
    add_output(witness)

    tomography = subparsers.add_parser("tomography", help="Simulated reconstructions vs published fidelities")
    add_fixtures(tomography)
    add_thetas(tomography)
    tomography.add_argument("--seed", type=int, help="Noise seed")
    add_output(tomography)

    return parser


def apply_overrides(config: RunConfig) -> None:
    """Route global flags through the QW_ environment so every module sees them."""
    if config.profile:
        os.environ["QW_OPTIMIZER_PROFILE"] = config.profile
    if config.workers:
        os.environ["QW_MAX_WORKERS"] = str(config.workers)
    if config.profile or config.workers:
        get_settings.cache_clear()
        get_optimizer_profile.cache_clear()
    if config.profile:
        get_optimizer_profile(config.profile)


def _analysis(config: RunConfig) -> WitnessAnalysis:
    return WitnessAnalysis(fixtures_dir=config.fixtures, seed=config.seed, samples=config.samples, tol=config.tol)


@track_analysis("bounds")
def cmd_bounds(config: RunConfig) -> AnalysisResult:
    """MU, VS, FGG and optimizer bounds over c in [1/sqrt(2), 1] for one or all entropy kinds."""
    return _analysis(config).bounds(config.entropy, config.k, config.points)


@track_analysis("entropy")
def cmd_entropy(config: RunConfig) -> AnalysisResult:
    return _analysis(config).entropy(config.entropy or EntropyKind.SHANNON, config.k, config.pair, config.thetas)


@track_analysis("coherence")
def cmd_coherence(config: RunConfig) -> AnalysisResult:
    return _analysis(config).coherence(config.thetas)


@track_analysis("chsh")
def cmd_chsh(config: RunConfig) -> AnalysisResult:
    """S, Poisson spread, p-value and classical/quantum verdicts per measured angle."""
    return _analysis(config).chsh(config.thetas)


@track_analysis("svetlichny")
def cmd_svetlichny(config: RunConfig) -> AnalysisResult:
    return _analysis(config).svetlichny()


@track_analysis("witness")
def cmd_witness(config: RunConfig) -> AnalysisResult:
    return _analysis(config).witness(config.thetas)


@track_analysis("tomography")
def cmd_tomography(config: RunConfig) -> AnalysisResult:
    return _analysis(config).tomography(config.thetas)


COMMANDS: dict[str, Callable[[RunConfig], AnalysisResult]] = {
    "bounds": cmd_bounds,
    "entropy": cmd_entropy,
    "coherence": cmd_coherence,
    "chsh": cmd_chsh,
    "svetlichny": cmd_svetlichny,
    "witness": cmd_witness,
    "tomography": cmd_tomography,
}


def run(config: RunConfig) -> AnalysisResult:
    return COMMANDS[config.command](config)


def render(result: AnalysisResult, json_output: bool) -> str:
    if json_output:
        payload = {
            "command": result.command,
            "rows": json.loads(result.frame.to_json(orient="records", double_precision=15)),
            "failures": result.failures,
        }
        return json.dumps(payload, indent=2) + "\n"
    return result.frame.to_csv(index=False)


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_ERROR

    options = {k: v for k, v in vars(args).items() if v is not None}
    try:
        config = RunConfig(**options)
    except ValidationError as e:
        failures = [{"field": ".".join(map(str, err["loc"])), "error": err["msg"]} for err in e.errors()]
        sys.stderr.write(json.dumps({"failures": failures}) + "\n")
        return EXIT_ERROR

    bind_run_context(command=config.command, seed=config.seed, profile=config.profile)
    try:
        apply_overrides(config)
        result = run(config)
    except (QuantumWitnessError, FileNotFoundError, ValueError) as e:
        logger.error("command_failed", command=config.command, error=str(e))
        sys.stderr.write(json.dumps({"failures": [{"error": type(e).__name__, "message": str(e)}]}) + "\n")
        return EXIT_ERROR
    finally:
        if config.metrics_out or get_settings().enable_metrics:
            write_metrics(config.metrics_out or Path("metrics.prom"))

    text = render(result, config.json_output)
    if config.out:
        config.out.write_text(text)
        logger.info("output_written", path=str(config.out), rows=len(result.frame))
    else:
        sys.stdout.write(text)

    if result.failures:
        logger.warning("verdicts_failed", command=config.command, failures=len(result.failures))
        sys.stderr.write(json.dumps({"failures": result.failures}) + "\n")
        return EXIT_VERDICT
    return EXIT_OK


def cli() -> None:
    """Command-line interface."""
    sys.exit(main())


if __name__ == "__main__":
    cli()
