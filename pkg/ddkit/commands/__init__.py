"""
    Purpose: the commands directory holds one module per ddkit subcommand
    Each module registers its argparse subparser and the handler behind it, much like a
    router collects the endpoints of one resource

    Usage: main.build_parser() calls register(subparsers) on every module; handlers take the
    parsed arguments, write their output and return an exit code or raise CommandError
"""
