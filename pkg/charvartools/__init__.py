"""
char-variety-tools computes SL(2, C) character varieties of two-bridge
links obtained by 1/n surgery on the Borromean rings, and classifies their
conic bundle components up to "P2 blown up at n points"
"""
from __future__ import absolute_import

from . import cache, euler, exactnum, linkgroup, pipeline, polycore, projmodel, resolve, tables, traceelim, utils
from .cache import IntermediateCache
from .pipeline import SurfaceReport, cmd_pipeline
from .tables import cmd_tables


def get_version_information():
    import os

    version_file = os.path.join(os.path.dirname(__file__), ".version")
    try:
        with open(version_file, "r") as f:
            return f.readline().rstrip()
    except EnvironmentError:
        print("No version information file '.version' found")


__version__ = get_version_information()
