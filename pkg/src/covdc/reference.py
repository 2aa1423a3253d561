"""The hand-built GF(7) instance with K=4 users, N=8 servers and L=6 subfunctions."""

from __future__ import annotations

from importlib import resources

from .fileio import loads
from .scheme import Scheme

# 0-based server sets W_l of the hand-built assignment
SERVER_SETS = (
    (0, 1, 2, 4, 7),
    (0, 1, 2, 3, 5, 6),
    (0, 1, 2),
    (0, 3, 4, 6),
    (0, 1, 3, 4, 5, 7),
    (2, 3, 4, 5, 6, 7),
)


def worked_example() -> Scheme:
    text = resources.files("covdc").joinpath("data/worked_example.json").read_text()
    return loads(text)
