"""CLI subcommands, one module per concern; each exposes ``add_parser`` and ``run``."""
