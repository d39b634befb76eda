# equivarifier/cli.py
"""
Command-Line Interface (CLI)

Typer front end over the library: group inspection, toy lifts, training,
evaluation, the equivariance spot check and gradient checks.

Exit codes: 0 success, 1 failed check or diverged training, 2 usage or
configuration error, 3 missing or unreadable files.
"""

import os

# --- BLAS THREADING ---
# Single-threaded BLAS keeps float results independent of the machine.
# Must be set before numpy is imported; explicit user settings win.
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")
# ----------------------

import logging  # noqa: E402
from pathlib import Path  # noqa: E402
from typing import Optional  # noqa: E402

import numpy as np  # noqa: E402
import typer  # noqa: E402

from . import __version__  # noqa: E402
from .cli_helper import (  # noqa: E402
    EXIT_FAILED,
    GlobalOptions,
    command_errors,
    configure_logging,
    load_dataset,
    model_from_checkpoint,
    model_from_settings,
    resolve_command,
)
from .formatters import FormatterRegistry  # noqa: E402
from .groups import describe_group, parse_group_spec  # noqa: E402
from .mnist.dataset import synthetic_images  # noqa: E402
from .mnist.evaluation import evaluate  # noqa: E402
from .mnist.labels import encode_labels  # noqa: E402
from .mnist.training import train  # noqa: E402
from .mnist.verification import verify_equivariance_report  # noqa: E402
from .nn.checkpoint import save_checkpoint  # noqa: E402
from .nn.gradcheck import grad_check  # noqa: E402
from .toys import registry as toy_registry, run_toy  # noqa: E402

logger = logging.getLogger(__name__)

# Create the main Typer application instance
app = typer.Typer(
    name="equivarifier",
    help="Equivarify neural networks over finite groups and check the result exactly.",
    add_completion=False,
    no_args_is_help=True,
)


def _options(ctx: typer.Context) -> GlobalOptions:
    return ctx.obj if isinstance(ctx.obj, GlobalOptions) else GlobalOptions()


def _emit(ctx: typer.Context, kind: str, report) -> None:
    typer.echo(FormatterRegistry.format(kind, report, as_csv=_options(ctx).csv))


@app.command(name="group-info", help="Print a group's table, inverses and axiom check.")
def group_info_command(
    ctx: typer.Context,
    group_spec: str = typer.Argument(..., help="cyclic:n, dihedral:n or file:path"),
):
    options = _options(ctx)
    with command_errors():
        settings = resolve_command("group-info", options, group_spec=group_spec)
        info = describe_group(parse_group_spec(group_spec), seed=settings.seed)
    _emit(ctx, "group_info", info)
    if not info.axioms.ok:
        raise typer.Exit(code=EXIT_FAILED)


@app.command(name="demo-lift", help="Lift a built-in toy map and verify it by brute force.")
def demo_lift_command(
    ctx: typer.Context,
    toy: str = typer.Argument("translation", help="translation, constant, quotient or dihedral"),
):
    options = _options(ctx)
    with command_errors():
        resolve_command("demo-lift", options, toy=toy)
        demo = run_toy(toy)
    _emit(ctx, "lift_demo", demo)
    if not demo.passed:
        raise typer.Exit(code=EXIT_FAILED)


@app.command(name="toys", help="List the built-in toys.")
def toys_command():
    for toy in toy_registry.get_toys():
        typer.echo(f"  • {toy.name}: {toy.description}")


@app.command(name="train", help="Train the equivariant network on (unrotated) MNIST.")
def train_command(
    ctx: typer.Context,
    epochs: Optional[int] = typer.Option(None, "--epochs", help="Epochs (default from settings)"),
    lr: Optional[float] = typer.Option(None, "--lr", help="Learning rate"),
    batch: Optional[int] = typer.Option(None, "--batch", help="Minibatch size"),
    train_count: Optional[int] = typer.Option(None, "--train-count", help="Training images to use"),
    full_scale: bool = typer.Option(False, "--full-scale", help="All 60k images and the full epoch count"),
    out: Optional[Path] = typer.Option(None, "--out", help="Checkpoint directory"),
):
    options = _options(ctx)
    with command_errors():
        settings = resolve_command(
            "train", options, epochs=epochs, lr=lr, batch=batch, train_count=train_count,
            checkpoint_dir=out, full_scale=full_scale,
        )
        count = settings.full_train_count if full_scale else settings.train_count
        n_epochs = settings.full_epochs if full_scale and epochs is None else settings.epochs
        dataset = load_dataset(settings, "train", count, settings.rotate_train)
        model = model_from_settings(settings)
        result = train(
            model, dataset, settings.lr, settings.batch, n_epochs, settings.seed,
            checkpoint_dir=settings.checkpoint_dir,
        )
        final = save_checkpoint(model, Path(settings.checkpoint_dir) / "model.ckpt", settings.seed)
        result.checkpoints.append(str(final))
    _emit(ctx, "train", result)


@app.command(name="eval", help="Evaluate a checkpoint on seeded-randomly rotated test images.")
def eval_command(
    ctx: typer.Context,
    checkpoint: Path = typer.Option(..., "--checkpoint", help="Checkpoint to evaluate"),
    test_count: Optional[int] = typer.Option(None, "--test-count", help="Test images to use"),
    full_scale: bool = typer.Option(False, "--full-scale", help="All 10k test images"),
):
    options = _options(ctx)
    with command_errors():
        settings = resolve_command("eval", options, checkpoint=checkpoint, test_count=test_count, full_scale=full_scale)
        count = settings.full_test_count if full_scale else settings.test_count
        model = model_from_checkpoint(checkpoint)
        dataset = load_dataset(settings, "test", count, settings.rotate_test)
        report = evaluate(model, dataset, threads=settings.threads)
    _emit(ctx, "eval", report)


@app.command(name="verify", help="Check that rotating the input shifts the 40 outputs by 10 slots.")
def verify_command(
    ctx: typer.Context,
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", help="Checkpoint (random weights if omitted)"),
    images: int = typer.Option(10, "--images", help="Number of images to check"),
    synthetic: bool = typer.Option(False, "--synthetic", help="Seeded random images instead of MNIST"),
):
    options = _options(ctx)
    with command_errors():
        settings = resolve_command("verify", options, checkpoint=checkpoint, images=images, synthetic=synthetic)
        model = model_from_checkpoint(checkpoint) if checkpoint else model_from_settings(settings, np.float64)
        if synthetic:
            batch = synthetic_images(images, seed=settings.seed)
        else:
            batch = load_dataset(settings, "test", images, "none").images
        table = verify_equivariance_report(model, batch)
    _emit(ctx, "equivariance", table)
    if not table.passed:
        raise typer.Exit(code=EXIT_FAILED)


@app.command(name="gradcheck", help="Compare backprop against central differences on the full network.")
def gradcheck_command(
    ctx: typer.Context,
    samples: int = typer.Option(200, "--samples", help="Parameters to check"),
    batch: int = typer.Option(2, "--batch-size", help="Synthetic images in the probe batch"),
    epsilon: float = typer.Option(1e-6, "--epsilon", help="Finite-difference step"),
    tolerance: float = typer.Option(1e-5, "--tolerance", help="Largest accepted relative error"),
):
    options = _options(ctx)
    with command_errors():
        settings = resolve_command("gradcheck", options, samples=samples, batch_size=batch, epsilon=epsilon)
        model = model_from_settings(settings, np.float64)
        rng = np.random.default_rng(settings.seed)
        x = synthetic_images(batch, seed=settings.seed).astype(np.float64)
        target = encode_labels(rng.integers(0, 10, size=batch), rng.integers(0, 4, size=batch))
        report = grad_check(model, x, target, epsilon=epsilon, samples=samples, seed=settings.seed)
    _emit(ctx, "gradcheck", report)
    if not report.passed(tolerance):
        raise typer.Exit(code=EXIT_FAILED)


@app.callback(invoke_without_command=True)
def cli_entry_callback(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="key = value config file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for every random choice"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads for evaluation"),
    csv: bool = typer.Option(False, "--csv", help="Emit reports as CSV"),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging"),
    version: bool = typer.Option(None, "--version", help="Show version and exit"),
):
    if version:
        typer.echo(f"equivarifier v{__version__}")
        raise typer.Exit()
    configure_logging(verbose)
    ctx.obj = GlobalOptions(config=config, seed=seed, threads=threads, csv=csv, verbose=verbose)
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()


def main():
    """Entry point for the console script."""
    app()


if __name__ == "__main__":
    main()
