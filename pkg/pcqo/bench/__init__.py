"""Command-line bench harness."""

from .settings import PcqoSettings, configure_logging
