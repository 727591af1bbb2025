"""Allow running as `python -m waveguide_calderon`."""

from waveguide_calderon.cli import cli

cli()
