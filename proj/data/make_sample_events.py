"""Generates sample_events.csv: two days of synthetic per-vehicle detector
events at one bottleneck, with congestion episodes, short speed dips, a
detector gap and a few invalid, duplicate and implausible rows."""

import csv
import math
import random
from datetime import datetime, timedelta

rng = random.Random(20160914)
start = datetime(2016, 9, 14, 0, 0, 0)
minutes = 2 * 24 * 60


def demand(minute):
    """Passenger-car demand per minute for the time of day."""
    h = (minute % 1440) / 60.0
    base = 7 + 14 * math.exp(-((h - 12.5) / 5.0) ** 2)
    am = 30 * math.exp(-((h - 7.5) / 1.1) ** 2)
    pm = 32 * math.exp(-((h - 16.5) / 1.4) ** 2)
    return base + am + pm


def draw_capacity():
    return rng.weibullvariate(130.0, 9.0)


rows = []
capacity = draw_capacity()
congested_left = 0
recent = []
gap = range(2 * 1440 - 600, 2 * 1440 - 597)
dips = {1440 + 13 * 60 + 7, 10 * 60 + 41}

for m in range(minutes):
    t0 = start + timedelta(minutes=m)
    q = demand(m) * rng.uniform(0.85, 1.15)
    if congested_left > 0:
        q *= 0.8
        congested_left -= 1
        speed_mean = rng.uniform(18, 34) if congested_left > 2 else rng.uniform(85, 95)
        if congested_left == 0:
            capacity = draw_capacity()
    else:
        speed_mean = rng.uniform(92, 108)
        if m in dips:
            speed_mean = 45.0
        if sum(recent[-2:]) + q * 1.08 >= capacity:
            congested_left = rng.randint(18, 45)
            speed_mean = rng.uniform(20, 32)
    if m in gap:
        recent.append(0.0)
        continue
    n = max(0, int(round(rng.gauss(q / 1.08, math.sqrt(max(q, 1.0))))))
    pce = 0.0
    for second in sorted(rng.uniform(0, 60) for _ in range(n)):
        length = rng.uniform(10.5, 18.0) if rng.random() < 0.08 else rng.uniform(3.6, 5.2)
        pce += 2 if length > 9 else 1
        speed = max(3.0, rng.gauss(speed_mean, 6.0 if speed_mean > 60 else 4.0))
        ts = t0 + timedelta(seconds=second)
        rows.append([ts.strftime("%Y-%m-%dT%H:%M:%S.") + f"{ts.microsecond // 1000:03d}",
                     f"{speed:.1f}", f"{length:.1f}", "1"])
    recent.append(pce)

for i in rng.sample(range(len(rows)), 40):
    rows[i][3] = "0"
for i in rng.sample(range(len(rows)), 25):
    rows.append(list(rows[i]))
for i in rng.sample(range(len(rows)), 5):
    rows[i][1] = "312.0"
rows.sort(key=lambda r: r[0])

with open("sample_events.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["timestamp", "speed_kmh", "length_m", "valid"])
    w.writerows(rows)
print(len(rows), "rows")
