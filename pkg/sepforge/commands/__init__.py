"""Subcommands of the sepforge command line."""

from sepforge.commands import decompose, listing, oracle, verify

MODULES = (listing, decompose, verify, oracle)
