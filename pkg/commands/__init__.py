"""
Commands package for the Command Pattern implementation.
One class per command-line verb; each turns a RunConfig into a ReportFile.
"""

from commands.command import Command
from commands.verify_command import VerifyCommand
from commands.warp_command import WarpCommand
from commands.develop_command import DevelopCommand
from commands.refine_command import RefineCommand
from commands.suites import SuiteContext, run_suite, suite_names

COMMANDS = {
    "verify": VerifyCommand,
    "warp": WarpCommand,
    "develop": DevelopCommand,
    "refine": RefineCommand,
}

__all__ = ['Command', 'VerifyCommand', 'WarpCommand', 'DevelopCommand', 'RefineCommand',
           'SuiteContext', 'run_suite', 'suite_names', 'COMMANDS']
