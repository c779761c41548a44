"""Regenerate oracle_values.json from the reference computations in oracles.py.

Run from the repository root: ``python3 tests/fixtures/freeze_oracles.py``.
Only numpy/scipy are used here, never the package under test.
"""

import json
import math
import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

import oracles  # noqa: E402


def main():
    rng = np.random.default_rng(20240611)
    out = {}

    balls = []
    for _ in range(25):
        k = int(rng.integers(2, 4))
        P = rng.uniform(-5, 5, size=(int(rng.integers(2, 9)), k))
        balls.append({"points": P.tolist(), "radius": oracles.enclosing_ball_bruteforce(P)})
    out["circumradius"] = balls

    mink = []
    for _ in range(25):
        k = int(rng.integers(2, 4))
        m = int(rng.integers(k + 1, k + 5))
        V = rng.standard_normal((m, k))
        if len(mink) < 20:
            # last normal opposes the others, so 0 is interior to conv(V): bounded kernel
            V[-1] = -V[:-1].sum(axis=0) * rng.uniform(0.5, 1.5)
        b = rng.uniform(0.5, 2.0, size=m)
        P = rng.uniform(-5, 5, size=(int(rng.integers(2, 8)), k))
        mink.append({"normals": V.tolist(), "offsets": b.tolist(), "points": P.tolist(),
                     "value": oracles.minkowski_scipy(P, V, b)})
    out["minkowski"] = mink

    zono = []
    for _ in range(15):
        m = int(rng.integers(2, 5))
        ang = rng.uniform(0, math.pi, size=m)
        ang[:2] = [0.0, math.pi / 2]
        U = np.column_stack([np.cos(ang), np.sin(ang)])
        P = rng.uniform(-5, 5, size=(int(rng.integers(2, 7)), 2))
        zono.append({"directions": U.tolist(), "points": P.tolist(), "value": oracles.zonotope_scipy(P, U)})
    out["zonotope"] = zono

    seg = [[0.0, 0.0], [math.pi, 0.0]]
    out["mean_width_p"] = [
        {"points": seg, "p": 2.0, "value": oracles.mean_width_p_oracle(seg, 2.0)},
        {"points": seg, "p": 3.0, "value": oracles.mean_width_p_oracle(seg, 3.0)},
        {"points": [[0, 0], [2, 0], [1, 1.5]], "p": 2.0,
         "value": oracles.mean_width_p_oracle([[0, 0], [2, 0], [1, 1.5]], 2.0)},
    ]
    theta = 2 * math.pi * np.arange(64) / 64
    gon = np.column_stack([np.cos(theta), np.sin(theta)])
    out["mean_width"] = [
        {"points": [[0.0, 0.0], [1.0, 0.0]], "value": oracles.mean_width_oracle([[0, 0], [1, 0]])},
        {"points": gon.tolist(), "value": oracles.polygon_perimeter(gon) / math.pi},
    ]

    (HERE / "oracle_values.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
