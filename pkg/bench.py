"""Entry point for running the pcqo bench without installing the package."""

from pcqo.bench.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
