#!/usr/bin/env python3
"""Regenerates minutes_4d_synthetic.csv.

Synthetic minute bars shaped like a hot IPO week: 1535 observations over the
four sessions 2011-05-19 .. 2011-05-24 (the first session starts late), a
long day-one shoulder with a single blow-off bar, a slow fade, and the low
late in the final session. Bar-to-bar noise scales like (level/90)^5, so the
estimated variance rises steeply with price. The open column is affinely
pinned to min 81.24 / max 120.74 after rounding, and exactly one bar sits in
the (115.49, 122.34) band so the two top estimation-grid points stay
unreliable.
"""

import datetime as dt
import random

OUT = "minutes_4d_synthetic.csv"
SESSIONS = [
    (dt.datetime(2011, 5, 19, 9, 55), 365),
    (dt.datetime(2011, 5, 20, 9, 30), 390),
    (dt.datetime(2011, 5, 23, 9, 30), 390),
    (dt.datetime(2011, 5, 24, 9, 30), 390),
]
PEAK_BAR = 135
TROUGH_BAR = 1300


def anchors():
    # (bar index, level) polyline for the open price before noise
    return [
        (0, 86.0), (30, 90.0), (55, 95.0), (75, 101.0), (90, 106.5),
        (100, 110.0), (120, 112.5), (134, 114.6), (135, 115.0), (136, 114.6),
        (155, 112.0), (175, 109.5), (200, 106.0), (230, 101.5), (265, 97.5),
        (310, 94.8), (364, 93.0),
        (420, 94.5), (560, 91.0), (700, 89.5), (754, 89.0),
        (830, 88.0), (980, 85.5), (1100, 84.2), (1144, 84.0),
        (1200, 83.0), (1290, 81.9), (1300, 81.1), (1310, 82.0),
        (1380, 84.5), (1460, 89.0), (1534, 93.2),
    ]


def polyline(n, pts):
    out = []
    k = 0
    for i in range(n):
        while k + 1 < len(pts) - 1 and pts[k + 1][0] < i:
            k += 1
        (x0, y0), (x1, y1) = pts[k], pts[k + 1]
        t = (i - x0) / (x1 - x0)
        out.append(y0 + t * (y1 - y0))
    return out


def main():
    n = sum(c for _, c in SESSIONS)
    assert n == 1535
    rng = random.Random(20110524)
    base = polyline(n, anchors())

    opens = []
    for i, b in enumerate(base):
        w = 0.20 * (b / 90.0) ** 5
        opens.append(b + rng.uniform(-w, w))

    # one blow-off bar above everything, trough below everything
    for i, v in enumerate(opens):
        if i != PEAK_BAR and v > 114.2:
            opens[i] = 114.2 - 0.05 * rng.random()
        if i != TROUGH_BAR and v < 81.55:
            opens[i] = 81.55 + 0.05 * rng.random()
    opens[PEAK_BAR] = 119.5
    opens[TROUGH_BAR] = 81.0

    lo, hi = min(opens), max(opens)
    opens = [81.24 + (v - lo) * (120.74 - 81.24) / (hi - lo) for v in opens]
    opens = [round(v, 2) for v in opens]

    stamps = []
    for start, count in SESSIONS:
        stamps.extend(start + dt.timedelta(minutes=k) for k in range(count))

    with open(OUT, "w") as f:
        f.write("timestamp,open,high,low,close\n")
        for i, (ts, o) in enumerate(zip(stamps, opens)):
            c = opens[i + 1] if i + 1 < n else o
            spread = 0.01 + 0.04 * rng.random()
            h = round(max(o, c) + spread, 2)
            l = round(max(0.01, min(o, c) - spread), 2)
            f.write(f"{ts.isoformat()},{o:.2f},{h:.2f},{l:.2f},{c:.2f}\n")
    print(f"wrote {OUT}: n={n}, min={min(opens)}, max={max(opens)}")


if __name__ == "__main__":
    main()
