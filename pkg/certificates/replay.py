from typing import Iterator, Optional, Sequence, Tuple

from certificates.model import SubstitutionRecord
from errors import MMRankError

Node = Tuple[Tuple[int, ...], Optional[SubstitutionRecord]]


class ReplayError(MMRankError):
    """The record stream does not match the search tree."""

    def __init__(self, check: str, message: str):
        super().__init__(message)
        self.check = check


def replay_substitution(component_count: int, records: Sequence[SubstitutionRecord]) -> Iterator[Node]:
    """Walk the substitution tree in search order, pairing proved nodes with their records.

    Yields (sequence, record) for a proved node and (sequence, None) for a node
    the search had to expand, starting with the root. Sequences are
    non-decreasing tuples of component indices.
    """
    position = 0

    def walk(sequence: Tuple[int, ...]) -> Iterator[Node]:
        nonlocal position
        if sequence:
            if position >= len(records):
                raise ReplayError("records-exhausted", f"no record left for node {list(sequence)}")
            record = records[position]
            if record.depth == len(sequence):
                position += 1
                yield sequence, record
                return
            if record.depth < len(sequence):
                raise ReplayError(
                    "unexpected-depth",
                    f"record {position} has depth {record.depth} at node depth {len(sequence)}",
                )
        yield sequence, None
        start = sequence[-1] if sequence else 0
        for component in range(start, component_count):
            yield from walk(sequence + (component,))

    yield from walk(())
    if position != len(records):
        raise ReplayError("records-unconsumed", f"{len(records) - position} records left after replay")
