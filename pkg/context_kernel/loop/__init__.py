"""Run configuration and subcommand dispatch."""
