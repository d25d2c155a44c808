"""Self-describing JSON signal-set files.

Floats are written with Python's shortest round-trip repr (at most 17
significant digits), so ``load(save(S))`` reproduces every value exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .field import FieldError, PrimeField, SL2Element
from .signals import Line, SignalSystem, SystemSignal, TorusDescriptor

FORMAT = "oscsig-signal-set"
VERSION = 1


class SignalFileError(ValueError):
    pass


def _group_to_json(g) -> dict:
    if isinstance(g, Line):
        return {"type": "line", "index": g.index}
    return {"type": "torus", "kind": g.kind, "conjugator": list(g.conjugator.entries),
            "generator": list(g.generator.entries), "order": g.order}


def _group_from_json(F: PrimeField, d: dict):
    if d["type"] == "line":
        return Line(int(d["index"]), F.p)
    return TorusDescriptor(d["kind"], SL2Element.make(F, *d["conjugator"]),
                           SL2Element.make(F, *d["generator"]), int(d["order"]))


def to_json(S: SignalSystem) -> dict:
    signals = []
    for s in S.signals:
        entry = {"group": s.group, "character": s.character}
        if s.translate is not None:
            entry["translate"] = list(s.translate)
        if s.eigenvalue is not None:
            entry["eigenvalue"] = [float(s.eigenvalue.real), float(s.eigenvalue.imag)]
        entry["values"] = [[float(z.real), float(z.imag)] for z in s.values]
        signals.append(entry)
    return {
        "format": FORMAT,
        "version": VERSION,
        "p": S.p,
        "kind": S.kind,
        "conventions": S.conventions(),
        "metadata": S.metadata,
        "groups": [_group_to_json(g) for g in S.groups],
        "signals": signals,
    }


def from_json(doc: dict) -> SignalSystem:
    try:
        if doc.get("format") != FORMAT or doc.get("version") != VERSION:
            raise SignalFileError("not an oscsig signal-set file (format/version mismatch)")
        F = PrimeField(int(doc["p"]))
        conv = doc["conventions"]
        if conv.get("generator") != F.generator or conv.get("nonsquare") != F.nonsquare:
            raise SignalFileError("file was produced under different field conventions")
        groups = [_group_from_json(F, g) for g in doc["groups"]]
        signals = []
        for entry in doc["signals"]:
            values = np.array([complex(re, im) for re, im in entry["values"]])
            if values.shape != (F.p,):
                raise SignalFileError(f"signal of length {len(values)} in a p={F.p} file")
            group = int(entry["group"])
            if not 0 <= group < len(groups):
                raise SignalFileError(f"signal refers to unknown group {group}")
            eig = entry.get("eigenvalue")
            tr = entry.get("translate")
            signals.append(SystemSignal(values, group, int(entry["character"]),
                                        complex(*eig) if eig else None,
                                        tuple(tr) if tr else None))
        S = SignalSystem(F, doc["kind"], groups, signals, dict(doc.get("metadata", {})))
    except SignalFileError:
        raise
    except (KeyError, TypeError, ValueError, FieldError) as exc:
        raise SignalFileError(f"corrupt signal-set file: {exc}") from exc
    return S


def save(S: SignalSystem, path: str | Path) -> None:
    text = json.dumps(to_json(S), indent=1)
    Path(path).write_text(text + "\n")


def load(path: str | Path) -> SignalSystem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SignalFileError(f"{path}: not valid JSON ({exc})") from exc
    return from_json(doc)
