"""Plain-text arrangement files.

    # comments run to the end of a line
    ground 3
    piece a b
    0 0
    1 1
    2 2

A ``piece`` line names the coordinate labels; the integer lines after it are
the tuples of that piece, columns in the order the labels were written.
"""
from __future__ import annotations

from .arrangement import Arrangement, ArrangementPiece
from .ground import GroundSet


class ArrangementParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


def _tokens(raw: str) -> list[tuple[int, str]]:
    """(1-based column, token) pairs, comment stripped."""
    body = raw.split("#", 1)[0]
    out, i = [], 0
    while i < len(body):
        if body[i].isspace():
            i += 1
            continue
        j = i
        while j < len(body) and not body[j].isspace():
            j += 1
        out.append((i + 1, body[i:j]))
        i = j
    return out


def parse_arrangement(text: str) -> Arrangement:
    ground = None
    blocks: list[tuple[int, list[str], list[tuple[int, tuple[int, ...]]]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        col, head = toks[0]
        if head == "ground":
            if ground is not None:
                raise ArrangementParseError("ground declared twice", lineno, col)
            if len(toks) != 2:
                raise ArrangementParseError("expected 'ground N'", lineno, col)
            c, val = toks[1]
            if not val.isdigit() or int(val) < 1:
                raise ArrangementParseError(f"ground size must be a positive integer, got {val!r}", lineno, c)
            ground = GroundSet(int(val))
        elif head == "piece":
            if ground is None:
                raise ArrangementParseError("'piece' before 'ground'", lineno, col)
            labels = [t for _, t in toks[1:]]
            if not labels:
                raise ArrangementParseError("piece needs at least one coordinate label", lineno, col)
            seen = set()
            for c, lab in toks[1:]:
                if lab in seen:
                    raise ArrangementParseError(f"duplicate label {lab!r}", lineno, c)
                if lab.lstrip("-").isdigit():
                    raise ArrangementParseError(f"label {lab!r} looks like a number", lineno, c)
                seen.add(lab)
            blocks.append((lineno, labels, []))
        else:
            if not blocks:
                raise ArrangementParseError(f"unexpected {head!r} outside a piece", lineno, col)
            _, labels, tuples = blocks[-1]
            vals = []
            for c, tok in toks:
                if not tok.isdigit():
                    raise ArrangementParseError(f"expected a nonnegative integer, got {tok!r}", lineno, c)
                if int(tok) >= ground.size:
                    raise ArrangementParseError(f"point {tok} out of range for ground size {ground.size}", lineno, c)
                vals.append(int(tok))
            if len(vals) != len(labels):
                raise ArrangementParseError(f"tuple has {len(vals)} entries, piece has {len(labels)} labels", lineno, col)
            if any(t == tuple(vals) for _, t in tuples):
                raise ArrangementParseError(f"duplicate tuple {tuple(vals)}", lineno, col)
            tuples.append((lineno, tuple(vals)))
    if ground is None:
        raise ArrangementParseError("missing 'ground' line", max(1, len(text.splitlines())))
    pieces = [ArrangementPiece.from_tuples(ground, labels, [t for _, t in tuples]) for _, labels, tuples in blocks]
    return Arrangement(ground, tuple(pieces))


def serialize_arrangement(arr: Arrangement) -> str:
    """Canonical text: labels sorted, tuples in radix order."""
    lines = [f"ground {arr.ground.size}"]
    for p in arr.pieces:
        lines.append("piece " + " ".join(p.arity.labels))
        lines += [" ".join(map(str, t)) for t in p.subset.tuples()]
    return "\n".join(lines) + "\n"


def load_arrangement(path) -> Arrangement:
    with open(path) as fh:
        return parse_arrangement(fh.read())
