"""Regenerate the committed datasets under data/ (deterministic)."""

from __future__ import annotations

import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, os.pardir, "data")

# 7-transaction worked example used across the docs and tests
DEMO = """\
A B C D
A B E F
A B C
A C D F
G
D
D G
"""


def dense13() -> str:
    # every 12-subset of a 13-item universe: 8190 closed itemsets at n=1
    labels = ["i%02d" % k for k in range(1, 14)]
    lines = []
    for drop in range(13):
        lines.append(" ".join(labels[i] for i in range(13) if i != drop))
    return "\n".join(lines) + "\n"


def basket(seed: int = 11) -> str:
    """Synthetic market-basket file: a dense 14-item core plus noise."""
    rng = random.Random(seed)
    n_core, n_noise = 14, 4
    labels = ["c%02d" % k for k in range(1, n_core + 1)]
    labels += ["x%d" % k for k in range(1, n_noise + 1)]
    lines = []
    # 42 core baskets, each dropping exactly one core item
    for t in range(42):
        drop = t % n_core
        row = set(range(n_core)) - {drop}
        for j in range(n_core, n_core + n_noise):
            if rng.random() < 0.05:
                row.add(j)
        lines.append(" ".join(labels[i] for i in sorted(row)))
    # 18 small filler baskets
    for t in range(18):
        size = rng.randrange(2, 6)
        row = set(rng.sample(range(n_core + n_noise), size))
        lines.append(" ".join(labels[i] for i in sorted(row)))
    rng.shuffle(lines)
    return "\n".join(lines) + "\n"


def main() -> None:
    os.makedirs(DATA, exist_ok=True)
    for name, text in (
        ("demo.fimi", DEMO),
        ("dense13.fimi", dense13()),
        ("basket.fimi", basket()),
    ):
        path = os.path.join(DATA, name)
        with open(path, "w", encoding="ascii") as handle:
            handle.write(text)
        print("wrote", os.path.relpath(path, os.path.join(HERE, os.pardir)))


if __name__ == "__main__":
    main()
