"""Subcommands of the junctionlab command line."""
