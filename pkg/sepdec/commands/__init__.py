import argparse

from . import check, decompose, fuzz, generate, verify

COMMANDS = (generate, check, decompose, verify, fuzz)


def register_all(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    for command in COMMANDS:
        command.register(subparsers, common)
