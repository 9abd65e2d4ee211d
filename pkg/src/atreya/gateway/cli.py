"""Command line entry points: serve, repl, record."""

from __future__ import annotations

import dataclasses

import click

from ..config import ConfigError, load_config
from ..runtime import build_runtime
from .app import create_app
from .recorder import read_script, run_script
from .repl import repl_loop


def _load(config_path: str | None):
    try:
        return load_config(config_path)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
@click.version_option(package_name="atreya")
def main() -> None:
    """Chat-driven retrieval over the ChEMBL chemical database."""


@main.command()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML configuration file.",
)
@click.option("--host", default=None, help="Bind address override.")
@click.option("--port", type=int, default=None, help="Bind port override.")
def serve(config_path: str | None, host: str | None, port: int | None) -> None:
    """Start the network gateway (HTTP + WebSocket)."""
    import uvicorn

    config = _load(config_path)
    if host is not None:
        config = dataclasses.replace(config, host=host)
    if port is not None:
        config = dataclasses.replace(config, port=port)
    runtime = build_runtime(config)
    app = create_app(config, runtime)
    uvicorn.run(app, host=config.host, port=config.port, log_level=config.log_level.lower())


@main.command()
@click.option(
    "--replay",
    "replay_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Fixture directory; forces replay mode.",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML configuration file.",
)
def repl(replay_dir: str | None, config_path: str | None) -> None:
    """Interactive terminal chat against a local runtime."""
    config = _load(config_path)
    if replay_dir is not None:
        config = dataclasses.replace(config, mode="replay", fixture_dir=replay_dir)
    runtime = build_runtime(config)
    raise SystemExit(repl_loop(runtime, config.downloads_dir))


@main.command()
@click.option(
    "--script",
    "script_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Utterance script, one line per message.",
)
@click.option(
    "--fixtures",
    "fixture_dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Fixture directory to record into.",
)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="YAML configuration file.",
)
def record(script_path: str, fixture_dir: str | None, config_path: str | None) -> None:
    """Run a script against the live service, recording fixtures."""
    config = _load(config_path)
    overrides: dict[str, str] = {"mode": "record"}
    if fixture_dir is not None:
        overrides["fixture_dir"] = fixture_dir
    config = dataclasses.replace(config, **overrides)
    runtime = build_runtime(config)
    raise SystemExit(run_script(runtime, read_script(script_path)))


if __name__ == "__main__":
    main()
