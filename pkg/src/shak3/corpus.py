"""Named primitive embeddings NS ⊂ Λ and random generators for fuzzing.

Λ-coordinates: U-blocks at (0,1), (2,3), (4,5) with basis (e_i, f_i), and
E8(-1) blocks at 6..13 and 14..21 in simple-root coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import ShaK3Error
from .k3 import K3_RANK, K3Surface, lam
from .lattice import IntLattice
from .linalg import int_det


def e(i: int) -> int:
    return 2 * i


def f(i: int) -> int:
    return 2 * i + 1


E8_A = 6
E8_B = 14


def vec(**coeffs) -> List[int]:
    """vec(e0=1, f0=1, r6=-1) -> Λ-vector; r<k> is Λ-coordinate k."""
    v = [0] * K3_RANK
    for key, c in coeffs.items():
        kind, idx = key[0], int(key[1:])
        if kind == "e":
            idx = e(idx)
        elif kind == "f":
            idx = f(idx)
        v[idx] += c
    return v


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    embedding: Tuple[Tuple[int, ...], ...]
    h: Tuple[int, ...]

    def ns(self) -> IntLattice:
        L = lam()
        gram = [[L.pair(u, v) for v in self.embedding] for u in self.embedding]
        return IntLattice(gram, self.embedding)

    def surface(self) -> K3Surface:
        return K3Surface(self.ns(), self.embedding)


def _entry(name, rows, h):
    return CorpusEntry(name, tuple(tuple(r) for r in rows), tuple(h))


CORPUS: List[CorpusEntry] = [
    _entry("<2>", [vec(e0=1, f0=1)], [1]),
    _entry("<4>", [vec(e0=1, f0=2)], [1]),
    _entry("<6>", [vec(e0=1, f0=3)], [1]),
    _entry("U", [vec(e0=1), vec(f0=1)], [1, 0]),
    _entry("U(2)", [vec(e0=1, e1=1), vec(f0=1, f1=1)], [1, 0]),
    _entry("U+<-2>", [vec(e0=1), vec(f0=1), vec(r6=1)], [1, 0, 0]),
    _entry("<2>+<-2>", [vec(e0=1, f0=1), vec(e1=1, f1=-1)], [1, 0]),
    _entry("[[2,3],[3,0]]", [vec(e0=1, f0=1), vec(f0=3, e1=1)], [0, 1]),
    _entry("U+E8(-1)", [vec(e0=1), vec(f0=1)] + [vec(**{f"r{E8_A + k}": 1}) for k in range(8)], [1] + [0] * 9),
    _entry("U(2)+<-2>", [vec(e0=1, e1=1), vec(f0=1, f1=1), vec(r6=1)], [1, 0, 0]),
    _entry("<2>+<-4>", [vec(e0=1, f0=1), vec(e1=1, f1=-2)], [1, 0]),
    _entry("U+<-2>^2", [vec(e0=1), vec(f0=1), vec(r6=1), vec(r8=1)], [1, 0, 0, 0]),
]


def corpus_entry(name: str) -> CorpusEntry:
    for c in CORPUS:
        if c.name == name:
            return c
    raise KeyError(name)


def random_gram(rng: random.Random, rank: int, max_det: int, bound: int = 6) -> List[List[int]]:
    """Symmetric integer matrix with 0 < |det| <= max_det."""
    while True:
        g = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            for j in range(i, rank):
                g[i][j] = g[j][i] = rng.randint(-bound, bound)
        d = int_det(g)
        if 0 < abs(d) <= max_det:
            return g


def random_embedding(rng: random.Random, rank: Optional[int] = None, tries: int = 200) -> K3Surface:
    """A random primitive nondegenerate NS ⊂ Λ supported on the U^3 part and a few roots."""
    rank = rank or rng.randint(1, 3)
    spots = list(range(6)) + [E8_A, E8_A + 2, E8_B]
    for _ in range(tries):
        rows = []
        for _ in range(rank):
            v = [0] * K3_RANK
            for s in spots:
                v[s] = rng.randint(-2, 2)
            rows.append(v)
        try:
            L = lam()
            gram = [[L.pair(u, v) for v in rows] for u in rows]
            return K3Surface(IntLattice(gram, rows), rows)
        except ShaK3Error:
            continue
    raise RuntimeError("no primitive embedding found")
