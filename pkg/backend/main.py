"""
Command line: `python -m backend.main run FILE [--prec N] [--window LO:HI] [--extend POLICY] [--json] [--seed S]`, plus `fmt FILE` and `serve`
"""
import sys
from typing import Optional

import click

try:
    from backend.config import logger, parse_extend, parse_window
except ValueError as e:
    # malformed TORSOR_* environment settings
    sys.stderr.write(f"InvalidConfig: {e}\n")
    sys.exit(2)

from backend.document import document_to_source, parse_document
from backend.errors import BadParameters, DocumentError
from backend.evaluator import resolve_context
from backend.runner import format_table, run_document


def _window_option(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        return parse_window(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def _extend_option(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        return parse_extend(value)
    except ValueError as e:
        raise click.BadParameter(str(e))


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


@click.group()
def cli():
    """Rank-p torsors: classification, conductors, lifting and filtrations"""


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--prec", type=click.IntRange(min=2), default=None, help="pi-adic precision N")
@click.option("--window", callback=_window_option, default=None, help="Laurent window LO:HI")
@click.option("--extend", callback=_extend_option, default=None, help="off, auto or c=K")
@click.option("--json", "as_json", is_flag=True, help="Newline-delimited JSON instead of a table")
@click.option("--seed", type=int, default=None, help="Seed for selfcheck directives")
def run(file: str, prec, window, extend, as_json: bool, seed):
    """Run every directive of FILE"""
    try:
        document = parse_document(_read(file))
        context = resolve_context(document, prec=prec, window=window, extend=extend, seed=seed)
    except (DocumentError, BadParameters) as e:
        logger.error(f"❌ {file}: {e.message}")
        click.echo(f"{e.kind}: {e.message}", err=True)
        sys.exit(2)
    result = run_document(document, context)
    if as_json:
        click.echo(result.to_ndjson(), nl=False)
    else:
        click.echo(format_table(list(result.records)), nl=False)
    sys.exit(result.exit_code)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def fmt(file: str):
    """Print FILE in canonical form"""
    try:
        document = parse_document(_read(file))
    except DocumentError as e:
        click.echo(f"{e.kind}: {e.message}", err=True)
        sys.exit(2)
    click.echo(document_to_source(document), nl=False)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int):
    """Serve the runner over HTTP"""
    import uvicorn

    logger.info(f"🚀 Serving on {host}:{port}")
    uvicorn.run("server.app:app", host=host, port=port)


if __name__ == "__main__":
    cli()
