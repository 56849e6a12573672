"""
Command line front end.

Exit codes: 0 success, 1 invalid input, 2 oracle violations, 3 box budget exceeded.
"""
import logging
import sys
from typing import List, Optional

import click
from pydantic import ValidationError

from core.config import settings
from core.errors import PavingBudgetError, ThickslideError
from models.cli import CliInvocation
from models.style import StyleMap
from utils.pipeline import check_paving, leaf_lie_derivatives, pave_system
from utils.serialize import read_paving, write_paving
from utils.svg import render_svg
from utils.sysfile import load_system

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VIOLATIONS = 2
EXIT_BUDGET = 3

logger = logging.getLogger("thickslide")


def _invocation(**kwargs) -> CliInvocation:
    # unset flags fall back to settings
    return CliInvocation(**{k: v for k, v in kwargs.items() if v is not None})


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log debug output.")
def cli(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command("pave")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False), help="Paving JSON output.")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Optional SVG rendering.")
@click.option("--epsilon", type=float, help="Override the resolution of the system file.")
@click.option("--workers", type=int, help="Worker processes.")
@click.option("--budget", "box_budget", type=int, help="Maximum number of boxes.")
@click.option("--merge-out", is_flag=True, help="Paint OUT boxes as one background rect.")
def pave_command(system_file, out_path, svg_path, epsilon, workers, box_budget, merge_out):
    """Pave the sliding-surface enclosure of SYSTEM_FILE."""
    inv = _invocation(
        subcommand="pave", input_path=system_file, out_path=out_path, svg_path=svg_path,
        epsilon=epsilon, workers=workers, box_budget=box_budget, merge_out=merge_out,
    )
    system = load_system(inv.input_path)
    logger.info("paving %s with %d worker(s)", inv.input_path, inv.workers)
    paving = pave_system(system, inv.epsilon, inv.workers, inv.box_budget)

    inv.out_path.write_text(write_paving(paving))
    if inv.svg_path is not None:
        inv.svg_path.write_text(render_svg(paving, StyleMap(), merge_out=inv.merge_out))

    counts = paving.counts()
    click.echo(f"epsilon: {paving.epsilon}")
    for name, count in counts.items():
        click.echo(f"{name}: {count}")
    click.echo(f"bisections: {paving.meta.bisections}")
    click.echo(f"elapsed: {paving.meta.elapsed:.2f}s")
    click.echo(f"inner approximation empty: {'yes' if paving.inner_is_empty else 'no'}")
    return EXIT_OK


@cli.command("lie")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
def lie_command(system_file):
    """Print the Lie derivatives of every region constraint."""
    inv = _invocation(subcommand="lie", input_path=system_file)
    system = load_system(inv.input_path)
    for row in leaf_lie_derivatives(system):
        click.echo(f"{row['leaf']}: c = {row['constraint']}")
        click.echo(f"  L_a = {row['lie_a']}")
        click.echo(f"  L_b = {row['lie_b']}")
    return EXIT_OK


@cli.command("check")
@click.argument("system_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--paving", "paving_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", type=int, help="Number of sliding points to test.")
@click.option("--param-samples", type=int, help="Extra random parameter vectors inside [p].")
@click.option("--seed", type=int, help="Random seed.")
def check_command(system_file, paving_path, samples, param_samples, seed):
    """Look for sliding points of thin instantiations that land in OUT boxes."""
    inv = _invocation(
        subcommand="check", input_path=system_file, paving_path=paving_path,
        samples=samples, param_samples=param_samples, seed=seed,
    )
    system = load_system(inv.input_path)
    paving = read_paving(inv.paving_path.read_text())
    logger.info("checking %s against %d sliding points", inv.paving_path, inv.samples)
    checked, violations = check_paving(system, paving, inv.samples, inv.param_samples, inv.seed)

    click.echo(f"sliding points checked: {checked}")
    click.echo(f"violations: {len(violations)}")
    if checked == 0:
        click.echo("warning: no sliding point was found", err=True)
    for x in violations[:10]:
        click.echo(f"  OUT box contains sliding point {x}", err=True)
    return EXIT_VIOLATIONS if violations else EXIT_OK


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve_command(host, port):
    """Serve the HTTP API."""
    import uvicorn
    uvicorn.run("main:app", host=host, port=port)
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> int:
    try:
        result = cli.main(args=argv, prog_name="thickslide", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_INVALID
    except click.Abort:
        return EXIT_INVALID
    except PavingBudgetError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_BUDGET
    except (ThickslideError, ValidationError, ValueError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INVALID
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
