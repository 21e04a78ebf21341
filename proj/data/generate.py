#!/usr/bin/env python3
"""Regenerates the bundled example data. Output is deterministic."""

import datetime as dt
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
STATION = "FUTIAN"
DAYS = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"]

# (coefficients for periods 1..7, intercept) per weekday group
MODELS = {
    "Mon-Thu": ([1963.579167, 1014.8125, 676.375, 776.125, 1124.0625, 2476.875, 717.4375], 522.6875),
    "Fri": ([1711.83, 826, 591, 697.75, 949, 2660.25, 905.5], 641.5),
    "Sat": ([609.67, 692.5, 714.5, 825.75, 707.75, 869.25, 482.75], 616),
    "Sun": ([208.92, 528.75, 578.75, 694.5, 747, 821.75, 585.5], 653.75),
}

FIRST = dt.date(2014, 7, 7)
WEEKS = 4
EVENT_DAY = dt.date(2014, 7, 6)
MISSING = (dt.date(2014, 7, 18), 3)
SPIKE = (dt.date(2014, 7, 26), 5)
SURGE = (dt.date(2014, 7, 20), (5, 6, 7), 600)
VIDEO_DAY = dt.date(2014, 7, 14)
HOLDOUT_FIRST = dt.date(2014, 8, 11)


def group_of(day):
    return "Mon-Thu" if day in DAYS[:4] else day


def period_mean(day, period):
    coef, intercept = MODELS[group_of(day)]
    return intercept + (coef[period - 1] if period < 8 else 0.0)


def num(x):
    return f"{x:.6f}".rstrip("0").rstrip(".")


def row(date, period, count, source="afc"):
    day = DAYS[date.weekday()]
    return f"{date.isoformat()},{day},{period},outbound,{STATION},{num(count)},{source}\n"


def training_rows(rng):
    # one symmetric offset pattern per period, indexed by week, so every
    # weekday-period cell mean equals the period mean exactly
    pattern = {}
    for p in range(1, 9):
        a, b = rng.sample(range(5, 26), 2)
        pattern[p] = [a, b, -b, -a]
    rows = []
    for w in range(WEEKS):
        for d in range(7):
            date = FIRST + dt.timedelta(days=7 * w + d)
            for p in range(1, 9):
                if (date, p) == MISSING:
                    continue
                value = period_mean(DAYS[d], p) + pattern[p][w]
                if (date, p) == SPIKE:
                    value = 0.0
                if date == SURGE[0] and p in SURGE[1]:
                    value += SURGE[2]
                rows.append(row(date, p, value))
                if date == VIDEO_DAY:
                    rows.append(row(date, p, value, "video"))
    for p in range(1, 9):
        rows.insert(0, row(EVENT_DAY, 9 - p, period_mean("Sun", 9 - p) * 1.8))
    return rows


def holdout_rows(rng):
    rows = []
    for d in range(7):
        date = HOLDOUT_FIRST + dt.timedelta(days=d)
        for p in range(1, 9):
            rows.append(row(date, p, round(period_mean(DAYS[d], p) * (1 + rng.uniform(-0.1, 0.1)))))
    return rows


def taps(rng):
    out = []
    day = dt.datetime(2014, 7, 7)
    for _ in range(400):
        t = day + dt.timedelta(seconds=rng.randrange(5 * 3600, 24 * 3600))
        direction = rng.choice(["inbound", "outbound"])
        source = rng.choice(["afc", "afc", "afc", "video"])
        out.append((t, direction, source))
    out.sort()
    return [f"{STATION},{t.isoformat()},{d},{s}\n" for t, d, s in out]


def main():
    rng = random.Random(20140707)
    header = "date,day_of_week,period_index,direction,station_id,count,source_id\n"
    (HERE / "counts_jul2014.csv").write_text(header + "".join(training_rows(rng)))
    (HERE / "holdout_aug2014.csv").write_text(header + "".join(holdout_rows(rng)))
    (HERE / "labels.csv").write_text(f"date,day_type\n{EVENT_DAY.isoformat()},special_event\n")
    (HERE / "weights.json").write_text(json.dumps({"afc": 3, "video": 1}, indent=2) + "\n")
    (HERE / "taps_sample.csv").write_text("station_id,timestamp,direction,source_id\n" + "".join(taps(rng)))
    schedule = {
        "_comment": "Illustrative period boundaries, not measured values. Replace with the operator's own.",
        "period_count": 8,
        "boundaries": ["06:00", "07:00", "09:00", "11:00", "14:00", "17:00", "19:00", "21:00", "24:00"],
        "service_days": DAYS,
    }
    (HERE / "schedule.json").write_text(json.dumps(schedule, indent=2) + "\n")


if __name__ == "__main__":
    main()
