"""Writes a perturbed Delaunay triangulation of the unit square in the plain node/element format."""
import sys

import numpy as np
from scipy.spatial import Delaunay


def build(n, jitter, seed):
    rng = np.random.default_rng(seed)
    h = 1.0 / n
    pts = []
    for j in range(n + 1):
        for i in range(n + 1):
            x, y = i * h, j * h
            on_x = i in (0, n)
            on_y = j in (0, n)
            if not on_x:
                x += rng.uniform(-jitter, jitter) * h
            if not on_y:
                y += rng.uniform(-jitter, jitter) * h
            pts.append((x, y))
    pts = np.array(pts)
    return pts, Delaunay(pts).simplices


def boundary_ok(pts, tri):
    # every boundary edge must see its circumcenter on the inner side
    edges = {}
    for t in tri:
        for a, b, c in ((t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])):
            edges.setdefault(tuple(sorted((a, b))), []).append(c)
    for (a, b), opp in edges.items():
        if len(opp) != 1:
            continue
        pa, pb, pc = pts[a], pts[b], pts[opp[0]]
        # angle at the opposite vertex must be acute
        u, v = pa - pc, pb - pc
        if np.dot(u, v) <= 1e-9 * np.linalg.norm(u) * np.linalg.norm(v):
            return False
    return True


def main():
    out = sys.argv[1]
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 8
    for seed in range(100):
        pts, tri = build(n, 0.2, seed)
        if boundary_ok(pts, tri):
            break
    else:
        raise SystemExit("no admissible triangulation found")
    with open(out, "w") as f:
        f.write(f"2 {len(pts)} {len(tri)}\n")
        for i, (x, y) in enumerate(pts):
            f.write(f"{i} {x:.17g} {y:.17g}\n")
        for i, t in enumerate(tri):
            f.write(f"{i} {t[0]} {t[1]} {t[2]}\n")
    print(f"seed {seed}: {len(pts)} points, {len(tri)} triangles")


if __name__ == "__main__":
    main()
