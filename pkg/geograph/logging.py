#!/usr/bin/env python3

"""
Collect logger through verboselogs package
"""

import logging
import verboselogs
import inspect

# Every logger handed out by logging.getLogger is a VerboseLogger from here on
verboselogs.install()

LOGGER_STYLE = "%(asctime)s - %(levelname)-8s - %(module)-25s - %(funcName)-40s : LineNo. %(lineno)-4d - %(message)s"


def get_caller_function():
    """
    Get the module of the function that called get_logger
    Falls back to the package name when the stack is too shallow
    :return:
    """
    # Get the inspect stack trace
    inspect_stack = inspect.stack()

    # Since we're already in a function, we need the third attribute
    # i.e module of interest -> function that called this one -> this function
    if len(inspect_stack) < 3:
        return "geograph"

    frame_info = inspect_stack[2]

    module = inspect.getmodule(frame_info.frame)

    if module is None:
        return "geograph"

    return module.__name__


def set_basic_logger(log_level=logging.INFO):
    """
    Set the basic logger for scripts, everything goes to stderr so stdout stays free for reports
    :return:
    """
    # Get the root logger
    logger = logging.getLogger()

    # Don't stack handlers if main is called more than once (tests)
    for handler in list(logger.handlers):
        if getattr(handler, "_geograph_handler", False):
            logger.removeHandler(handler)

    # Get a stderr handler
    console = logging.StreamHandler()
    console._geograph_handler = True

    # Set level
    console.setLevel(logging.DEBUG)

    # Set format
    formatter = logging.Formatter(LOGGER_STYLE)
    console.setFormatter(formatter)

    logger.addHandler(console)
    logger.setLevel(log_level)

    return logger


def get_logger() -> verboselogs.VerboseLogger:
    """
    Return logger object named after the calling module
    :return:
    """
    module_that_called_this_one = get_caller_function()
    return logging.getLogger(module_that_called_this_one)
