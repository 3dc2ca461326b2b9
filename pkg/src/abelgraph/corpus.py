"""Deterministic random corpus of stable dual graphs for property testing."""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import SpecError
from .graph import DualGraph, Edge, Vertex, is_stable
from .io import write_graph


@dataclass(frozen=True)
class CorpusSpec:
    genus_min: int = 2
    genus_max: int = 5
    vertex_min: int = 1
    vertex_max: int = 6
    edge_cap: int | None = None
    seed: int = 42
    count: int = 200
    loop_prob: float = 0.15
    max_attempts: int = 10_000

    def validate(self) -> None:
        if self.genus_min < 2:
            raise SpecError("genus range must start at 2 or more")
        if self.genus_max < self.genus_min:
            raise SpecError("empty genus range")
        if self.vertex_min < 1 or self.vertex_max < self.vertex_min:
            raise SpecError("bad vertex-count range")
        if self.count < 0:
            raise SpecError("count must be nonnegative")
        if not 0.0 <= self.loop_prob <= 1.0:
            raise SpecError("loop probability must lie in [0, 1]")
        if self.edge_cap is not None and self.edge_cap < 0:
            raise SpecError("edge cap must be nonnegative")


_RETRIES = 200


def _candidate(rng: random.Random, g: int, n: int, spec: CorpusSpec) -> DualGraph | None:
    cap = spec.edge_cap if spec.edge_cap is not None else n - 1 + g
    extra_max = min(g, cap - (n - 1))
    if extra_max < 0:
        return None
    b1 = rng.randint(0, extra_max)
    ids = [f"C{i + 1}" for i in range(n)]
    pairs = [(ids[rng.randrange(i)], ids[i]) for i in range(1, n)]
    for _ in range(b1):
        if n == 1 or rng.random() < spec.loop_prob:
            v = rng.choice(ids)
            pairs.append((v, v))
        else:
            a, b = rng.sample(ids, 2)
            pairs.append((a, b))
    genera = [0] * n
    for _ in range(g - b1):
        genera[rng.randrange(n)] += 1
    X = DualGraph(
        tuple(Vertex(v, gv) for v, gv in zip(ids, genera)),
        tuple(Edge(f"e{i + 1}", ends) for i, ends in enumerate(pairs)),
    )
    return X if is_stable(X) else None


def generate(spec: CorpusSpec) -> Iterator[DualGraph]:
    """Yield ``spec.count`` stable graphs; identical specs give identical streams."""
    spec.validate()
    rng = random.Random(spec.seed)
    for _ in range(spec.count):
        for _attempt in range(spec.max_attempts):
            g = rng.randint(spec.genus_min, spec.genus_max)
            hi = min(spec.vertex_max, 2 * g - 2)
            if hi < spec.vertex_min:
                continue
            n = rng.randint(spec.vertex_min, hi)
            # retry the layout at fixed (g, n) so rejection does not skew toward small graphs
            X = None
            for _retry in range(_RETRIES):
                X = _candidate(rng, g, n, spec)
                if X is not None:
                    break
            if X is not None:
                yield X
                break
        else:
            raise SpecError("no stable graph found within the attempt budget; widen the ranges")


def write_corpus(spec: CorpusSpec, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, X in enumerate(generate(spec)):
        path = out / f"graph_{i:05d}.json"
        write_graph(X, path)
        paths.append(path)
    return paths
