"""CLI entry point for renyisc."""

from __future__ import annotations

import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click
import numpy as np

from . import __version__
from .config import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    THREADS_ENV,
    RunConfig,
)
from .cqcoding import coding_exponent_curve
from .divergences import KINDS, divergence
from .errors import EXIT_INFINITE, InputError, PropertyViolation, RenyiError
from .export import LN2, in_unit, render_curve, render_divergence, render_report, render_tradeoff, write_atomic
from .hypotest import nfold_tradeoff, sc_exponent_curve, threshold_rate
from .loader import load_channel, load_state
from .utils import note
from .verify import SUITES, run_suites, run_fixture_checks

DEFAULT_RATES = "0:1:21"
DEFAULT_MUS = "-6:6:25"


class FloatList(click.ParamType):
    """Comma list ``a,b,c`` (``inf`` allowed) or ``start:stop:count`` (linspace)."""

    name = "floats"

    def __init__(self, log_range: bool = False) -> None:
        self.log_range = log_range

    def convert(self, value, param, ctx) -> Tuple[float, ...]:
        if isinstance(value, tuple):
            return value
        text = str(value).strip()
        try:
            if ":" in text:
                start, stop, count = text.split(":")
                grid = np.linspace(float(start), float(stop), int(count))
                if self.log_range:
                    grid = np.exp(grid)
                return tuple(float(x) for x in grid)
            return tuple(float(x) for x in text.split(",") if x.strip())
        except ValueError:
            self.fail(f"{value!r} is not a comma list or start:stop:count range", param, ctx)


def _alpha_text(grid: Sequence[float]) -> str:
    return ",".join("inf" if math.isinf(a) else repr(a) for a in grid)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        write_atomic(out, text)


def _fail(exc: RenyiError) -> None:
    click.echo(str(exc), err=True)
    raise SystemExit(exc.exit_code)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--threads",
    type=int,
    envvar=THREADS_ENV,
    default=1,
    show_default=True,
    help=f"Worker threads for restarts and grids (env {THREADS_ENV}).",
)
# GUARDRAIL: explicit version instead of click's metadata lookup, so a bare
# checkout without dist metadata still answers --version.
@click.version_option(version=__version__)
@click.pass_context
def main(ctx: click.Context, threads: int) -> None:
    """Quantum Rényi divergences, strong-converse bounds and exponents."""
    ctx.obj = {"threads": max(1, threads)}


def _run_config(seed: int, alphas: Sequence[float], tolerance: float, restarts: int, out: Optional[Path], fmt: str) -> RunConfig:
    return RunConfig(
        seed=seed,
        alpha_grid=tuple(sorted(alphas)),
        tolerance=tolerance,
        restarts=restarts,
        output_path=str(out) if out else None,
        format=fmt,
    )


@main.command("divergence")
@click.argument("rho", type=click.Path(dir_okay=False, path_type=Path))
@click.argument("sigma", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--alpha", type=float, required=True, help="Rényi order α (inf allowed).")
@click.option("--kind", type=click.Choice(KINDS), default="sandwiched", show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--restarts", type=int, default=DEFAULT_RESTARTS, show_default=True, help="PVM restarts (measured kind).")
@click.option("--bits", is_flag=True, help="Report in bits instead of nats.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write JSON here instead of stdout.")
@click.pass_context
def cmd_divergence(
    ctx: click.Context,
    rho: Path,
    sigma: Path,
    alpha: float,
    kind: str,
    seed: int,
    restarts: int,
    bits: bool,
    out: Optional[Path],
) -> None:
    """Evaluate D_α(ρ‖σ) for two state files; exit 2 when the value is +∞."""
    try:
        run = _run_config(seed, (alpha,), DEFAULT_TOLERANCE, restarts, out, "json")
        cfg = run.optimizer().with_(workers=ctx.obj["threads"])
        result = divergence(load_state(rho), load_state(sigma), alpha, kind, cfg)
        _emit(render_divergence(result, bits), out)
    except RenyiError as exc:
        _fail(exc)
    if not result.finite:
        raise SystemExit(EXIT_INFINITE)


@main.command("exponent")
@click.option("--mode", type=click.Choice(["hypothesis", "coding"]), required=True)
@click.option("--rho", type=click.Path(dir_okay=False, path_type=Path), help="State file (hypothesis mode).")
@click.option("--sigma", type=click.Path(dir_okay=False, path_type=Path), help="State file (hypothesis mode).")
@click.option("--channel", type=click.Path(dir_okay=False, path_type=Path), help="Channel file (coding mode).")
@click.option("--rates", type=FloatList(), default=DEFAULT_RATES, show_default=True, help="Rate grid.")
@click.option("--alphas", type=FloatList(), default=_alpha_text(DEFAULT_ALPHA_GRID), show_default=True, help="α grid (values >= 1).")
@click.option("--tolerance", type=float, default=DEFAULT_TOLERANCE, show_default=True, help="Exponent treated as zero for the threshold.")
@click.option("--tradeoff", "copies", type=int, default=None, help="Write the n-copy Neyman–Pearson trade-off instead (hypothesis mode).")
@click.option("--mus", type=FloatList(log_range=True), default=DEFAULT_MUS, show_default=True, help="Neyman–Pearson thresholds; a range is in log μ.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--restarts", type=int, default=DEFAULT_RESTARTS, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--bits", is_flag=True, help="Rates and exponents in bits instead of nats.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write the curve here; the summary goes to stdout.")
@click.pass_context
def cmd_exponent(
    ctx: click.Context,
    mode: str,
    rho: Optional[Path],
    sigma: Optional[Path],
    channel: Optional[Path],
    rates: Tuple[float, ...],
    alphas: Tuple[float, ...],
    tolerance: float,
    copies: Optional[int],
    mus: Tuple[float, ...],
    seed: int,
    restarts: int,
    fmt: str,
    bits: bool,
    out: Optional[Path],
) -> None:
    """Strong-converse exponent curve for hypothesis testing or c-q coding."""
    try:
        if mode == "hypothesis" and (rho is None or sigma is None):
            raise InputError("--mode hypothesis needs --rho and --sigma")
        if mode == "coding" and channel is None:
            raise InputError("--mode coding needs --channel")
        if copies is not None and mode != "hypothesis":
            raise InputError("--tradeoff is only available in hypothesis mode")
        run = _run_config(seed, alphas, tolerance, restarts, out, fmt)
        run.require_alphas_at_least_one()
        cfg = run.optimizer().with_(workers=ctx.obj["threads"])
        nats = [r * LN2 for r in rates] if bits else list(rates)
        if mode == "hypothesis":
            r_state, s_state = load_state(rho), load_state(sigma)
            if copies is not None:
                outcomes = nfold_tradeoff(r_state, s_state, copies, mus, workers=cfg.workers)
                _emit(render_tradeoff(outcomes, fmt), out)
                return
            curve = sc_exponent_curve(r_state, s_state, nats, run.alpha_grid)
        else:
            curve = coding_exponent_curve(load_channel(channel), nats, run.alpha_grid, cfg)
        _emit(render_curve(curve, fmt, bits), out)
    except RenyiError as exc:
        _fail(exc)

    threshold = threshold_rate(curve, run.tolerance)
    unit = "bits" if bits else "nats"
    summary = "threshold: none" if threshold is None else f"threshold: {in_unit(threshold, bits)!r} {unit}"
    if out is not None:
        click.echo(summary)
    else:
        note("exponent", summary)
    if not curve.finite:
        raise SystemExit(EXIT_INFINITE)


@main.command("verify")
@click.option("--suite", type=click.Choice(SUITES + ("all",)), default="all", show_default=True)
@click.option("--seeds", type=int, default=10, show_default=True, help="Number of random instances per suite.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="First instance seed.")
@click.option(
    "--fixture",
    "fixtures",
    multiple=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="State file checked pairwise against the others (repeatable).",
)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write the JSON report here.")
def cmd_verify(suite: str, seeds: int, seed: int, fixtures: List[Path], out: Optional[Path]) -> None:
    """Run seeded property suites; exit 4 with a failure report on a violation."""
    try:
        states = [load_state(f) for f in fixtures]
        reports = run_suites(suite, seeds, seed)
        if states:
            reports.append(run_fixture_checks(states))
    except PropertyViolation as exc:
        _emit(render_report({"status": "failed", "failure": exc.report}), out)
        _fail(exc)
    except RenyiError as exc:
        _fail(exc)
    _emit(render_report({"status": "ok", "suites": [r.as_dict() for r in reports]}), out)


if __name__ == "__main__":  # pragma: no cover
    main()
