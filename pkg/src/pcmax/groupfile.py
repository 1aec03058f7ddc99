"""Textual interchange format for pc presentations.

Layout (whitespace-separated, one item per line, order fixed):

    pcmax-group 1
    p 5
    n 7
    labels s s_1 s_2 s_3 s_4 s_5 s_6
    power 1 : 0 0 0 0 0 0 0
    ...                                  (one row per generator)
    comm 2 1 : 0 0 1 0 0 0 0
    ...                                  (one row per pair j > i)

Tail rows are full exponent vectors of length n; commutator rows may be
omitted for trivial tails, but the writer always emits all of them.  The
reader enforces the support rules, so a malformed file cannot reach the
arithmetic layer.
"""

from __future__ import annotations

from .errors import PresentationError
from .pcgroup import PcPresentation


def dumps(pres: PcPresentation) -> str:
    return pres.canonical_text()


def dump(pres: PcPresentation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(pres))


def loads(text: str) -> PcPresentation:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0].split() != ["pcmax-group", "1"]:
        raise PresentationError("missing or unsupported group file header")
    fields = {"p": None, "n": None, "labels": None}
    powers = {}
    comms = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "p" and len(parts) == 2:
            fields["p"] = _int(parts[1], "p")
        elif parts[0] == "n" and len(parts) == 2:
            fields["n"] = _int(parts[1], "n")
        elif parts[0] == "labels":
            fields["labels"] = tuple(parts[1:])
        elif parts[0] == "power":
            if len(parts) < 3 or parts[2] != ":":
                raise PresentationError(f"malformed power row: {ln!r}")
            i = _int(parts[1], "generator index")
            powers[i] = [_int(x, "exponent") for x in parts[3:]]
        elif parts[0] == "comm":
            if len(parts) < 4 or parts[3] != ":":
                raise PresentationError(f"malformed comm row: {ln!r}")
            j = _int(parts[1], "generator index")
            i = _int(parts[2], "generator index")
            comms[(j, i)] = [_int(x, "exponent") for x in parts[4:]]
        else:
            raise PresentationError(f"unrecognized line in group file: {ln!r}")
    p, n = fields["p"], fields["n"]
    if p is None or n is None:
        raise PresentationError("group file must declare p and n")
    power_tails = []
    for i in range(1, n + 1):
        if i not in powers:
            raise PresentationError(f"missing power row for generator {i}")
        power_tails.append(powers[i])
    return PcPresentation(p, n, power_tails, comms, labels=fields["labels"])


def load(path) -> PcPresentation:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PresentationError(f"cannot read group file: {exc}") from exc
    return loads(text)


def _int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise PresentationError(f"bad {what} in group file: {token!r}") from exc
