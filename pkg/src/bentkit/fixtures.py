"""Random and hand-built fixtures shared by tests, acceptance checks and scripts."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .couple import FilteredComplex
from .linalg import QQ, ExactMatrix, Field, Solver


@dataclass(frozen=True)
class RandomFilteredConfig:
    max_dim: int = 12
    max_length: int = 5
    entry_range: int = 2
    mixing_density: float = 0.4
    seed: int = 0


def random_filtered_complex(rng: random.Random, cfg: RandomFilteredConfig = RandomFilteredConfig(),
                            field: Field = QQ) -> FilteredComplex:
    """D = P N P^{-1} with N a random pairing and P filtration-preserving unitriangular."""
    n = rng.randint(1, cfg.max_dim)
    length = rng.randint(1, cfg.max_length)
    s1 = rng.randint(-2, 2)
    levels = sorted(rng.randint(s1, s1 + length - 1) for _ in range(n))
    # pair basis vectors b -> a with a after b, so levels never drop
    free = list(range(n))
    rng.shuffle(free)
    n_pairs = rng.randint(0, n // 2)
    pairs = []
    used = set()
    for b in free:
        if len(pairs) == n_pairs:
            break
        if b in used:
            continue
        later = [a for a in range(b + 1, n) if a not in used]
        if not later:
            continue
        a = rng.choice(later)
        used.update((a, b))
        pairs.append((b, a))
    zero, one = field.zero, field.one
    nrows = [[zero] * n for _ in range(n)]
    for b, a in pairs:
        nrows[a][b] = one
    prow = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            if rng.random() < cfg.mixing_density:
                prow[i][j] = field(rng.randint(-cfg.entry_range, cfg.entry_range))
    P = ExactMatrix.from_rows(prow, field, cols=n)
    N = ExactMatrix.from_rows(nrows, field, cols=n)
    solver = Solver(P)
    p_inv = ExactMatrix.from_columns([solver.solve(ExactMatrix.identity(n, field).col(j)) for j in range(n)], n, field)
    d = P @ N @ p_inv
    # scramble the basis order so levels are not sorted
    perm = list(range(n))
    rng.shuffle(perm)
    d = d.submatrix(perm, perm)
    lv = [levels[i] for i in perm]
    return FilteredComplex.build(d, lv, s1, s1 + length - 1)


def filtered_fixture_set(count: int = 200, cfg: RandomFilteredConfig = RandomFilteredConfig(),
                         field: Field = QQ) -> list[FilteredComplex]:
    rng = random.Random(cfg.seed)
    return [random_filtered_complex(rng, cfg, field) for _ in range(count)]


@dataclass(frozen=True)
class RandomPairConfig:
    max_dim: int = 6
    entry_range: int = 3
    rank_deficiency: float = 0.5
    seed: int = 0


def random_matrix(rng: random.Random, rows: int, cols: int, cfg: RandomPairConfig = RandomPairConfig(),
                  field: Field = QQ) -> ExactMatrix:
    """Integer matrix; about half the time a product of thinner factors to force rank drops."""
    def raw(r, c):
        return ExactMatrix.from_rows([[rng.randint(-cfg.entry_range, cfg.entry_range) for _ in range(c)]
                                      for _ in range(r)], field, cols=c)
    if rows and cols and rng.random() < cfg.rank_deficiency:
        k = rng.randint(0, min(rows, cols))
        return raw(rows, k) @ raw(k, cols)
    return raw(rows, cols)


def random_composable_pair(rng: random.Random, cfg: RandomPairConfig = RandomPairConfig(),
                           field: Field = QQ) -> tuple[ExactMatrix, ExactMatrix]:
    x, y, z = (rng.randint(0, cfg.max_dim) for _ in range(3))
    return random_matrix(rng, y, x, cfg, field), random_matrix(rng, z, y, cfg, field)
