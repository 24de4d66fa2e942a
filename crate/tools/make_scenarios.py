"""Writes the benchmark scenario files in scenarios/."""
import json
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "scenarios"


def pt(x, y):
    return {"x": round(x, 4), "y": round(y, 4)}


def rect(x0, y0, x1, y1):
    return [pt(x0, y0), pt(x1, y0), pt(x1, y1), pt(x0, y1)]


def scenario(name, description, w, h, obstacles, agents, seed=1):
    return {
        "name": name,
        "description": description,
        "workspace": {"bounds": {"min": pt(0, 0), "max": pt(w, h)}, "obstacles": obstacles},
        "r": 1.0,
        "random_agents": agents,
        "params": {"seed": seed},
    }


def blob(cx, cy, radius, rng, k=9, wobble=0.35):
    pts = []
    for j in range(k):
        a = 2 * math.pi * j / k + rng.uniform(-0.2, 0.2)
        rad = radius * (1 + rng.uniform(-wobble, wobble))
        pts.append(pt(cx + rad * math.cos(a), cy + rad * math.sin(a)))
    return {"vertices": pts}


def maple(cx, cy, size, n=360):
    """Leaf outline: five pointed lobes, serrated edges and a short stem notch."""
    pts = []
    for j in range(n):
        t = 2 * math.pi * j / n
        a = t - math.pi / 2  # lobes measured from straight up
        lobes = 0.58 + 0.42 * abs(math.cos(2.5 * a)) ** 2
        teeth = 1 + 0.06 * abs(math.cos(12.5 * a)) ** 4
        # pinch the bottom where the stem attaches
        stem = 1 - 0.35 * math.exp(-((math.sin((t + math.pi / 2) / 2)) ** 2) / 0.01)
        rad = size * lobes * teeth * stem
        pts.append(pt(cx + rad * math.cos(t), cy + rad * math.sin(t)))
    return pts


def main():
    OUT.mkdir(exist_ok=True)
    files = {}
    files["rectangle.json"] = scenario(
        "rectangle", "Empty 80 x 40 rectangle, 50 random agents.", 80, 40, [], 50)
    files["rectangle_dense.json"] = scenario(
        "rectangle_dense", "Empty 80 x 40 rectangle at 25% agent occupancy (255 agents).", 80, 40, [], 255)

    rng = random.Random(7)
    centers = [(14, 12), (30, 30), (48, 11), (62, 29), (26, 8), (70, 8), (10, 31), (46, 30)]
    obstacles = [blob(x, y, rng.uniform(3.0, 4.5), rng) for x, y in centers]
    files["obstacles.json"] = scenario(
        "obstacles", "80 x 40 rectangle with eight irregular obstacles, 100 random agents.", 80, 40, obstacles, 100)

    w = h = 64
    leaf = maple(w / 2, h / 2 + 1, 29.0)
    files["maple.json"] = scenario(
        "maple",
        "Approximate maple-leaf outline (a hand-made tracing, not the original geometry), 100 random agents.",
        w, h, [{"vertices": rect(0, 0, w, h), "holes": [leaf]}], 100)

    blocks = []
    for i in range(3):
        for j in range(3):
            x0, y0 = 12 + 20 * i, 12 + 20 * j
            blocks.append({"vertices": rect(x0, y0, x0 + 6, y0 + 6)})
    files["grid.json"] = scenario(
        "grid", "70 x 70 open grid world of 3 x 3 square blocks, 65 random agents.", 70, 70, blocks, 65)

    for name, s in files.items():
        (OUT / name).write_text(json.dumps(s, indent=2) + "\n")


if __name__ == "__main__":
    main()
