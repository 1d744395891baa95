"""
CLI
---

The command line interface controls. This module defines the entry point for running
``rootedcubes`` from the command line: analyzing family files, running the verification sweeps and
exporting cubical sets as OBJ geometry.

Standard output carries only the JSON or OBJ payload of a command; logging and summaries go to
standard error. The exit code is 0 on success, 1 when a verification sweep finds a
counterexample and 2 for usage or input errors.
"""
import argparse
import configparser
import logging
import re
import sys

from pathlib import Path
from textwrap import dedent
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import rootedcubes

from rootedcubes import report
from rootedcubes.cubecomplex import MAX_EXPORT_SIZE, cubes, to_obj
from rootedcubes.setfamily import DomainError, PreconditionError, read_families, read_family
from rootedcubes.verify import CHECK_NAMES, CHECKS, VerifyConfig, run_check


LOGGER = logging.getLogger(__name__)
FORMAT = "%(asctime)s: %(message)s"
DEBUG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# writes to standard output instead of a file
STDOUT_PATH = "-"


class SettingsFile(NamedTuple):
    """Container for settings file in ini or cfg parsing format."""

    path: Path
    sections: List[str]  # hierarchy of keys to search


# SETTINGS_FILES is the search hierarchy for configuration files
SETTINGS_FILES = [
    SettingsFile(Path("rootedcubes.ini"), ["rootedcubes"]),
    SettingsFile(Path("setup.cfg"), ["rootedcubes", "tool:rootedcubes"]),
]

# keys an INI settings section may set, each the long name of a subcommand option
INI_KEYS = ["samples", "seed", "parallel", "processes", "debug", "no-timing"]


class PositiveIntegerAction(argparse.Action):
    """Custom action for ensuring positive integers in sizes and sample counts."""

    def __call__(self, parser, namespace, values, option_string=None):  # type: ignore
        if values <= 0:
            parser.error("{0} must be a non-zero positive integer.".format(option_string))

        setattr(namespace, self.dest, values)


class ParserActionMap(NamedTuple):
    """Container for parser mappings used in ConfigParsing with CLI args."""

    actions: Dict[str, str]
    action_types: Dict[Any, List[str]]


####################################################################################################
# COMMAND LINE OUTPUTS AND PARSER DEFINITION
####################################################################################################


def cli_parser() -> argparse.ArgumentParser:
    """CLI argument parser with the ``analyze``, ``verify`` and ``export-obj`` subcommands.

    Returns:
        The ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="rootedcubes",
        description="Cubical homology of set families and verification sweeps.",
        formatter_class=argparse.RawTextHelpFormatter,
        epilog=cli_epilog(),
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--debug", action="store_true", help="Turn on DEBUG level logging output.")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    analyze = commands.add_parser(
        "analyze", parents=[common], help="Report predicates, cubes and homology of a family."
    )
    analyze.add_argument(
        "file",
        type=Path,
        metavar="FILE",
        help="Family JSON file, or a batch file with one family JSON object per line.",
    )
    analyze.add_argument(
        "-o",
        "--out",
        type=Path,
        metavar="PATH",
        help="Also write the JSON report to this file. (default: No output written)",
    )

    verify = commands.add_parser(
        "verify", parents=[common], help="Run a named verification sweep."
    )
    verify.add_argument(
        "check",
        choices=CHECK_NAMES,
        metavar="CHECK",
        help=f"Check to run, one of: {', '.join(CHECK_NAMES)}.",
    )
    verify.add_argument(
        "--n",
        type=int,
        action=PositiveIntegerAction,
        required=True,
        metavar="INT",
        help="Ground set size; the largest size for lemma33.",
    )
    verify.add_argument(
        "--samples",
        type=int,
        action=PositiveIntegerAction,
        default=500,
        metavar="INT",
        help="Random samples for the randomized checks. (default: 500)",
    )
    verify.add_argument(
        "--seed",
        type=int,
        default=0,
        metavar="INT",
        help="Random seed for the randomized checks. (default: 0)",
    )
    verify.add_argument(
        "--parallel", action="store_true", help="Run the sweep with multiprocessing."
    )
    verify.add_argument(
        "--processes",
        type=int,
        action=PositiveIntegerAction,
        metavar="INT",
        help="Worker processes for --parallel. (default: os.cpu_count())",
    )
    verify.add_argument(
        "--no-timing",
        action="store_true",
        help="Write elapsed_ms as 0 so repeated runs are byte-identical.",
    )
    verify.add_argument(
        "-o",
        "--out",
        type=Path,
        metavar="PATH",
        help="Also write the JSON report to this file. (default: No output written)",
    )

    export = commands.add_parser(
        "export-obj", parents=[common], help=f"Write X(F) as OBJ geometry, n <= {MAX_EXPORT_SIZE}."
    )
    export.add_argument("file", type=Path, metavar="FILE", help="Family JSON file.")
    export.add_argument(
        "-o",
        "--out",
        type=str,
        required=True,
        metavar="PATH",
        help=f"OBJ output file, '{STDOUT_PATH}' for standard output.",
    )

    return parser


def cli_epilog() -> str:
    """Epilog for the help output."""

    main_epilog = dedent(
        """
    Additional command argument information:
    ========================================

    Family files:
    -------------
     - JSON objects such as {"n": 3, "sets": [[], [1], [2], [1, 3]]}. Elements are 1-based,
       the order of "sets" is irrelevant and duplicate sets are rejected. analyze accepts a batch
       file with one object per line and then prints a JSON array.

    Exit codes:
    -----------
     - 0: success, every verified family passed.
     - 1: a verification sweep found a counterexample.
     - 2: usage or input error e.g., a malformed family file or n beyond a check's cap.

    Settings files:
    ---------------
     - Defaults for samples, seed, parallel, processes, debug and no-timing are read from a
       [rootedcubes] section of rootedcubes.ini, or a [rootedcubes] / [tool:rootedcubes] section
       of setup.cfg. Command line arguments override the file.
    """
    )

    header = "Verification checks"
    check_epilog = [header, "=" * len(header)]
    for name, check in CHECKS.items():
        summary = (check.__doc__ or name).strip().splitlines()[0]
        check_epilog.append(f" - {name}: {summary}")
    check_epilog.append(" - all: every check above, in this order.")

    meta_info = dedent(
        """
    rootedcubes information
    =======================
     - Version: {version}
     - License: {license}
     - URL: {url}
     - {copyright}
    """
    ).format_map(
        {
            "version": rootedcubes.__version__,
            "license": rootedcubes.__license__,
            "url": rootedcubes.__uri__,
            "copyright": rootedcubes.__copyright__,
        }
    )

    return "\n".join([main_epilog] + check_epilog + [meta_info])


####################################################################################################
# INI FILE CONFIGURATION AND OVERRIDES FROM CLI
####################################################################################################


def get_subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    """The subcommand parser for ``command``.

    Raises:
        KeyError: if ``command`` is not a subcommand.
    """
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def get_parser_actions(parser: argparse.ArgumentParser) -> ParserActionMap:
    """Create a parser action map used when creating the command list mixed from the
    CLI and the ini config file.

    ParserActionMap has both actions and types e.g., for the ``verify`` subcommand:

    .. code-block:: python

        # action-types:

        {argparse._HelpAction: ['help'],
         argparse._StoreTrueAction: ['debug', 'parallel', 'no-timing'],
         rootedcubes.cli.PositiveIntegerAction: ['n', 'samples', 'processes'],
         argparse._StoreAction: ['seed', 'out']}

        # actions:

        {'-h': '--help',
         '--debug': '--debug',
         '--n': '--n',
         '-o': '--out',
         ...}

    Positional arguments carry no option strings and are left out.

    Args:
        parser: the argparser

    Returns:
        ParserActionMap: includes actions and action_types
    """
    actions: Dict[str, str] = {}
    action_types: Dict[Any, List[str]] = {}

    for action in parser._actions:
        if not action.option_strings:
            continue

        # option_strings is either [-o, --out] or [--debug] for short-hand options
        actions[action.option_strings[0]] = action.option_strings[-1]

        # values align to the keywords that can be used in the INI config
        action_types.setdefault(type(action), []).append(action.option_strings[-1].lstrip("-"))

    return ParserActionMap(actions=actions, action_types=action_types)


def read_ini_config(
    config_path: Path, sections: Optional[List[str]] = None
) -> configparser.SectionProxy:
    """Read a config_path using ConfigParser

    Args:
        config_path: path to the INI config file
        sections: sections of config file to return, default to ['rootedcubes'] if None

    Returns:
        config section proxy

    Raises:
        KeyError if ``section`` not in ``config_path``.
    """
    sections = sections or ["rootedcubes"]
    config = configparser.ConfigParser()
    # ensures [  rootedcubes  ] is valid like [rootedcubes] in a section key
    config.SECTCRE = re.compile(r"\[ *(?P<header>[^]]+?) *\]")  # type: ignore

    config.read(config_path)

    for section in sections:
        try:
            return config[section]
        except KeyError:
            continue

    raise KeyError(f"No section of {sections} in {config_path}")


def parse_ini_config_with_cli(
    parser: argparse.ArgumentParser, ini_config: configparser.SectionProxy, cli_args: Sequence[str]
) -> List[str]:
    """Combine the INI file settings with the CLI args, using the CLI args as the override.

    Only ``INI_KEYS`` that the subcommand parser defines are taken from the file.

    Args:
        parser: the subcommand argparser
        ini_config: the section of the parsed INI file
        cli_args: the subcommand's cli args, without the command name

    Returns:
        Updated args mixing INI and CLI, with CLI used as the override
    """
    action_maps = get_parser_actions(parser)
    final_args_list = [action_maps.actions.get(i, i) for i in cli_args]
    store_true = action_maps.action_types.get(argparse._StoreTrueAction, [])

    for k in ini_config.keys():
        arg_key = f"--{k}"

        if k not in INI_KEYS or arg_key not in action_maps.actions.values():
            continue

        if arg_key in final_args_list:
            continue

        if k in store_true:
            if ini_config.getboolean(k):
                final_args_list.append(arg_key)

        else:
            final_args_list.extend([arg_key, ini_config[k].strip()])

    return final_args_list


####################################################################################################
# COMMANDS
####################################################################################################


def _emit(payload: str, out: Optional[Path]) -> None:
    sys.stdout.write(payload)
    sys.stdout.flush()
    if out is not None:
        report.write_report(payload, out)


def cmd_analyze(args: argparse.Namespace) -> int:
    """Analyze every family in the file and print the JSON report.

    The exit code is 0 whatever the mathematical verdicts are.
    """
    families = read_families(args.file)
    reports = [report.analyze_family(f) for f in families]

    for analysis in reports:
        LOGGER.info("%s", report.analysis_summary(analysis))

    payload: Any = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
    _emit(report.dump_json(payload), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the named check, print its JSON report and log the colored summary."""
    config = VerifyConfig(
        samples=args.samples,
        seed=args.seed,
        parallel=args.parallel,
        processes=args.processes,
        timing=not args.no_timing,
    )

    reports = run_check(args.check, args.n, config)
    _, display_results = report.summarize_checks(reports)

    LOGGER.info("Verification Summary Report:\n\n%s\n", display_results.summary)
    if display_results.failures:
        LOGGER.info("Counterexamples:\n\n%s\n", display_results.failures)

    dicts = [r.to_dict(timing=config.timing) for r in reports]
    _emit(report.dump_json(dicts if args.check == "all" else dicts[0]), args.out)

    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILURE


def cmd_export_obj(args: argparse.Namespace) -> int:
    """Write the OBJ geometry of ``X(F)``, to standard output when ``--out`` is ``-``."""
    family = read_family(args.file)
    complex_ = cubes(family)
    obj_text = to_obj(complex_)

    LOGGER.info("Exporting cube counts %s for n=%s.", complex_.counts, family.n)

    if args.out == STDOUT_PATH:
        _emit(obj_text, None)
    else:
        report.write_report(obj_text, Path(args.out))

    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "export-obj": cmd_export_obj,
}

####################################################################################################
# MAIN COMMAND LINE ROUTINE
####################################################################################################


def cli_args(args: Sequence[str], search_config_files: bool = True) -> argparse.Namespace:
    """Command line arguments as parsed args.

    If a INI configuration file is set it is used to set additional default arguments for the
    subcommand, but the CLI arguments override any INI file settings.

    Args:
        args: the argument sequence from the command line
        search_config_files: flag for looking through ``SETTINGS_FILES`` for settings

    Returns:
        Parsed args from ArgumentParser
    """
    parser = cli_parser()
    args = list(args)

    if search_config_files and args and args[0] in COMMANDS:
        subparser = get_subparser(parser, args[0])

        for ini_config_file in SETTINGS_FILES:

            if ini_config_file.path.exists():
                try:
                    ini_config = read_ini_config(ini_config_file.path, ini_config_file.sections)
                    ini_cli_args = parse_ini_config_with_cli(subparser, ini_config, args[1:])
                    return parser.parse_args([args[0]] + ini_cli_args)

                except KeyError:
                    # read_ini_config will raise KeyError if the section is not valid
                    continue

    return parser.parse_args(args)


def cli_main() -> None:
    """Entry point to run CLI args and execute main function."""
    args = cli_args(sys.argv[1:])
    sys.exit(main(args))


def main(args: argparse.Namespace) -> int:
    """Main CLI function to dispatch the subcommand and map errors to exit codes.

    Args:
        args: argparse arguments

    Returns:
        The exit code.
    """
    # stdout is reserved for the JSON and OBJ payloads
    logging.basicConfig(
        format=DEBUG_FORMAT if args.debug else FORMAT,
        level=logging.DEBUG if args.debug else logging.INFO,
        stream=sys.stderr,
    )

    try:
        return COMMANDS[args.command](args)

    except (DomainError, PreconditionError, OSError) as e:
        LOGGER.error("%s", report.colorize_output(f"{type(e).__name__}: {e}", "red"))
        return EXIT_USAGE
