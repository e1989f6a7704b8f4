"""Writes buses.csv and lines.csv for the bundled 200-bus sample feeder.

Six MV feeders leave a substation at the origin, turn east and run in
parallel 600 m apart; short LV laterals hang off random trunk buses. Two
tie lines between neighbouring feeders are open (status `switch`).
"""

import csv
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
rng = random.Random(20240611)

buses = []  # (id, x, y, demand_kw, class, is_root)
lines = []  # (id, from, to, status, resistance)


def bus(x, y, demand, cls, root=0):
    bid = f"B{len(buses):03d}"
    buses.append((bid, round(x, 1), round(y, 1), round(demand, 2), cls, root))
    return bid


def line(a, b, status, ohm_per_km):
    (ax, ay), (bx, by) = pos[a], pos[b]
    length = ((ax - bx) ** 2 + (ay - by) ** 2) ** 0.5
    lines.append((f"L{len(lines):03d}", a, b, status, round(ohm_per_km * length / 1000.0, 5)))


root = bus(0, 0, 0, "MV", 1)
pos = {root: (0.0, 0.0)}
trunks = []
for f in range(6):
    y = (f - 2.5) * 600.0
    prev = root
    trunk = []
    # one riser bus, then eastward trunk buses every ~320 m
    pts = [(150.0, y)] + [(150.0 + 320.0 * (k + 1) + rng.uniform(-30, 30), y + rng.uniform(-25, 25)) for k in range(11)]
    for x, yy in pts:
        b = bus(x, yy, rng.uniform(10, 40), "MV")
        pos[b] = (x, yy)
        line(prev, b, "tree", 0.32)
        trunk.append(b)
        prev = b
    trunks.append(trunk)

while len(buses) < 200:
    f = rng.randrange(6)
    anchor = rng.choice(trunks[f][1:])
    ax, ay = pos[anchor]
    side = rng.choice([-1.0, 1.0])
    length = rng.randint(1, 3)
    prev = anchor
    for k in range(length):
        if len(buses) >= 200:
            break
        x = ax + rng.uniform(-20, 20)
        y = ay + side * 60.0 * (k + 1)
        b = bus(x, y, rng.uniform(4, 30), "LV")
        pos[b] = (x, y)
        line(prev, b, "tree", 0.64)
        prev = b

line(trunks[1][5], trunks[2][5], "switch", 0.32)
line(trunks[3][8], trunks[4][8], "switch", 0.32)

with open(os.path.join(HERE, "buses.csv"), "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["bus_id", "x", "y", "demand_kw", "voltage_class", "is_root"])
    w.writerows(buses)
with open(os.path.join(HERE, "lines.csv"), "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["line_id", "from_bus", "to_bus", "status", "resistance"])
    w.writerows(lines)
