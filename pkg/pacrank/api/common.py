# pacrank/api/common.py
import contextlib
import logging
from typing import Iterator, Optional

import typer
from pydantic import ValidationError
from rich.console import Console

from pacrank.oracle.models import build_model, parse_model_spec
from pacrank.schemas.models import ExperimentSpec, ModelSpec
from pacrank.utils.errors import ExportError, PacRankError
from pacrank.utils.logging import configure_logging
from pacrank.utils.settings import get_settings

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)

EXIT_IO = 1
EXIT_INVALID = 2


@contextlib.contextmanager
def handle_errors() -> Iterator[None]:
    """Turn pacrank failures into a red message and an exit code."""
    try:
        yield
    except ExportError as exc:
        err_console.print(f"[red]error:[/red] {exc}")
        raise typer.Exit(EXIT_IO)
    except ValidationError as exc:
        problems = "; ".join(f"{'.'.join(map(str, e['loc'])) or 'input'}: {e['msg']}" for e in exc.errors())
        err_console.print(f"[red]invalid input:[/red] {problems}")
        raise typer.Exit(EXIT_INVALID)
    except PacRankError as exc:
        err_console.print(f"[red]invalid input:[/red] {exc}")
        raise typer.Exit(EXIT_INVALID)


def setup(verbose: bool) -> None:
    configure_logging("DEBUG" if verbose else None)


def build_spec(
    algorithm: str,
    model: str,
    n: Optional[int],
    eps: float,
    delta: float = 0.1,
    gamma: float = 1.0,
    x: int = 3,
    anchors: Optional[int] = None,
    runs: int = 1,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> ExperimentSpec:
    settings = get_settings()
    model_spec = parse_model_spec(model)
    if n is None and model_spec.kind not in ("btl", "matrix"):
        raise typer.BadParameter(f"--n is required for {model_spec.kind} models")
    return ExperimentSpec(
        algorithm=algorithm,
        model=model_spec,
        n=n if n is not None else _size_from_file(model_spec),
        eps=eps,
        delta=delta,
        gamma=gamma,
        x=x,
        anchors=anchors,
        runs=runs,
        seed=seed if seed is not None else settings.seed,
        workers=threads if threads is not None else settings.workers,
    )


def _size_from_file(model_spec: ModelSpec) -> int:
    return build_model(model_spec).n


# shared option declarations
ModelOpt   = typer.Option(..., "--model", "-m", help="kind:argument, e.g. adjacent-gap:0.6, mallows:0.8, matrix:p.csv")
NOpt       = typer.Option(None, "--n", help="Number of elements (read from the file for btl/matrix models)")
EpsOpt     = typer.Option(0.05, "--eps", help="Bias tolerance in (0, 1/2)")
DeltaOpt   = typer.Option(0.1, "--delta", help="Failure probability in (0, 1)")
SeedOpt    = typer.Option(None, "--seed", help="Root seed (defaults to PACRANK_SEED)")
ThreadsOpt = typer.Option(None, "--threads", help="Worker threads (defaults to PACRANK_WORKERS)")
VerboseOpt = typer.Option(False, "--verbose", "-v", help="Debug logging")
