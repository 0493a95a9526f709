"""Deterministic reports: the same inputs and flags give the same bytes."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import metadata


def package_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def inputs_digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        data = p.encode()
        h.update(len(data).to_bytes(8, "big"))
        h.update(data)
    return h.hexdigest()


@dataclass
class Report:
    command: str
    digest: str
    results: dict = field(default_factory=dict)
    version: str = field(default_factory=package_version)

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs_sha256": self.digest,
                "version": self.version, "results": self.results}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"command: {self.command}", f"inputs_sha256: {self.digest}", f"version: {self.version}"]
        _text_lines(self.results, 0, lines)
        return "\n".join(lines) + "\n"


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def _text_lines(value, depth: int, out: list[str]):
    pad = "  " * depth
    for key, v in value.items():
        if isinstance(v, dict):
            out.append(f"{pad}{key}:")
            _text_lines(v, depth + 1, out)
        elif isinstance(v, list) and any(isinstance(x, dict) for x in v):
            out.append(f"{pad}{key}:")
            for i, x in enumerate(v):
                if isinstance(x, dict):
                    out.append(f"{pad}  - [{i}]")
                    _text_lines(x, depth + 2, out)
                else:
                    out.append(f"{pad}  - {_scalar(x)}")
        elif isinstance(v, list):
            out.append(f"{pad}{key}: [" + ", ".join(_scalar(x) for x in v) + "]")
        else:
            out.append(f"{pad}{key}: {_scalar(v)}")
