"""Experiment configuration shared by the evaluation harness and the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import InvalidParameter
from .graphons import GraphonSpec
from .neighborhoods import DEFAULT_C

METHODS = ("mns", "ns")


def derive_seed(master_seed: int, *path: int) -> int:
    """Child seed for ``path`` under ``master_seed``.

    The hash is numpy's ``SeedSequence([master_seed, *path])`` entropy mixer,
    taking the first 64-bit word of its generated state.
    """
    ss = np.random.SeedSequence([int(master_seed), *(int(p) for p in path)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def parse_graphon(value) -> Optional[GraphonSpec]:
    """Accept a GraphonSpec, its JSON object, ``"1".."4"``, a kind name or ``"constant:c"``."""
    if value is None or isinstance(value, GraphonSpec):
        return value
    if isinstance(value, str) and value.strip().startswith("{"):
        value = json.loads(value)
    if isinstance(value, str) and ":" in value:
        kind, _, arg = value.partition(":")
        if kind.lower() != "constant":
            raise InvalidParameter(f"only constant graphons take an inline argument, got {value!r}")
        try:
            c = float(arg)
        except ValueError:
            raise InvalidParameter(f"bad constant value in {value!r}") from None
        return GraphonSpec("constant", {"c": c})
    return GraphonSpec.from_json(value)


@dataclass
class ExperimentConfig:
    graphon: Optional[GraphonSpec] = None
    input: Optional[str] = None
    truth: Optional[str] = None
    n: int = 100
    K: int = 100
    C: float = DEFAULT_C
    method: str = "mns"
    reps: int = 1
    seed: int = 0
    remove_prob: float = 0.1
    out: str = "out"
    threads: int = 1
    # bench grid; empty lists fall back to the scalar fields above
    grid_n: list = field(default_factory=list)
    grid_K: list = field(default_factory=list)
    graphons: list = field(default_factory=list)
    methods: list = field(default_factory=list)

    def __post_init__(self):
        self.graphon = parse_graphon(self.graphon)
        self.graphons = [parse_graphon(g) for g in self.graphons]

    def validate(self) -> "ExperimentConfig":
        if self.n < 3:
            raise InvalidParameter(f"n must be >= 3, got {self.n}")
        if self.K < 1:
            raise InvalidParameter(f"K must be >= 1, got {self.K}")
        if not self.C > 0:
            raise InvalidParameter(f"C must be positive, got {self.C}")
        for m in [self.method, *self.methods]:
            if m not in METHODS:
                raise InvalidParameter(f"unknown method {m!r}; expected one of {METHODS}")
        if self.reps < 1:
            raise InvalidParameter(f"reps must be >= 1, got {self.reps}")
        if not 0.0 <= self.remove_prob < 1.0:
            raise InvalidParameter(f"remove_prob must lie in [0, 1), got {self.remove_prob}")
        if self.threads < 1:
            raise InvalidParameter(f"threads must be >= 1, got {self.threads}")
        if any(int(v) < 3 for v in self.grid_n) or any(int(v) < 1 for v in self.grid_K):
            raise InvalidParameter("grid sizes must have n >= 3 and K >= 1")
        return self

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "graphon":
                v = v.to_json() if v is not None else None
            elif f.name == "graphons":
                v = [g.to_json() for g in v]
            out[f.name] = v
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise InvalidParameter(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameter(f"cannot read config {path}: {exc}") from exc
        return cls.from_json(obj)

    def replace(self, **changes) -> "ExperimentConfig":
        data = asdict(self)
        data["graphon"] = self.graphon
        data["graphons"] = list(self.graphons)
        data.update(changes)
        return type(self)(**data)
