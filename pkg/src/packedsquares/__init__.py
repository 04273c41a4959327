"""Distinct squares and t-th powers in bit-packed strings."""

from .counting import (SquareCounts, analyze, count_distinct_squares, count_np, count_plain_p,
                       count_powers, count_special, report_squares)
from .errors import *  # noqa: F401,F403
from .estimator import DistinctSquareCounter
from .packed_text import PackedText, TauConfig, decode, dumps, encode, loads, read_file, write_file
from .pillar import QueryIndex
from .runs import compute_all_runs
from .structures import ArithmeticProgression, Pyramid, Run, RunCluster, RunsRepr
from .sync import SyncSet, build_sync

__version__ = "0.1.0"
