import json
from typing import IO, Iterator, List, Literal, Optional

from omegabounds.sieve.core import PrefixState

RECORD_SIZE: int = 8 + 16 + 16


def pack_state(state: PrefixState) -> bytes:
    """Little-endian (n: u64, sum_omega: u128, sum_big_omega: u128) record."""
    return (
        state.n.to_bytes(8, "little")
        + state.sum_omega.to_bytes(16, "little")
        + state.sum_big_omega.to_bytes(16, "little")
    )


def unpack_state(record: bytes) -> PrefixState:
    assert len(record) == RECORD_SIZE, f"Record has {len(record)} bytes, expected {RECORD_SIZE}"
    return PrefixState(
        n=int.from_bytes(record[:8], "little"),
        sum_omega=int.from_bytes(record[8:24], "little"),
        sum_big_omega=int.from_bytes(record[24:], "little"),
    )


def state_to_json(state: PrefixState) -> str:
    # exact integers travel as strings
    return json.dumps(
        {"n": str(state.n), "sum_omega": str(state.sum_omega), "sum_big_omega": str(state.sum_big_omega)},
        sort_keys=True,
    )


def state_from_json(line: str) -> PrefixState:
    d = json.loads(line)
    return PrefixState(n=int(d["n"]), sum_omega=int(d["sum_omega"]), sum_big_omega=int(d["sum_big_omega"]))


class PrefixStateWriter:
    """
    A prefix_scan sink that appends every received state to a dump file.

    Use it as a context manager:

        with PrefixStateWriter("sums.bin", fmt="binary") as sink:
            prefix_scan(10**8, sink=sink)
    """

    def __init__(self, path: str, fmt: Literal["binary", "jsonl"] = "binary"):
        self.path = path
        self.fmt = fmt
        self._fh: Optional[IO] = None

    def __enter__(self) -> "PrefixStateWriter":
        if self.fmt == "binary":
            self._fh = open(self.path, "wb")
        else:
            self._fh = open(self.path, "w", encoding="utf-8")
        return self

    def __exit__(self, *exc) -> None:
        self._fh.close()

    def __call__(self, state: PrefixState) -> None:
        if self.fmt == "binary":
            self._fh.write(pack_state(state))
        else:
            self._fh.write(state_to_json(state) + "\n")


def read_states(path: str, fmt: Literal["binary", "jsonl"] = "binary") -> List[PrefixState]:
    return list(iter_states(path, fmt))


def iter_states(path: str, fmt: Literal["binary", "jsonl"] = "binary") -> Iterator[PrefixState]:
    if fmt == "binary":
        with open(path, "rb") as f:
            while record := f.read(RECORD_SIZE):
                yield unpack_state(record)
    else:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    yield state_from_json(line)
