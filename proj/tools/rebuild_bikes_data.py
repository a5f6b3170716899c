#!/usr/bin/env python3
"""Rebuild data/bikes.csv (731 daily rows) from the hourly UCI bike-sharing table.

The daily UCI file (day.csv) is not redistributed by any package index we can
reach, but its values are aggregates of the hourly file:

  temp, hum, windspeed   mean of the normalized hourly values, 6 decimals
  weathersit             hourly weather code mean, rounded half up
  cnt                    sum of hourly counts

The hourly table ships inside the `shapiq` wheel (shapiq/datasets/data/bike.csv)
with temp already multiplied by 41 and windspeed by 67. Fetch it with

  pip download --no-deps shapiq -d /tmp/shapiq

and run

  tools/rebuild_bikes_data.py /tmp/shapiq/shapiq-*.whl data/bikes.csv

Output columns follow `fme fetch-bikes`: temperature in degrees Celsius
(t * 47 - 8), relative humidity in [0, 1], wind speed (w * 67). Weekday code k
is labelled with day k + 1 (0 -> Monday, ..., 6 -> Sunday), the labelling of
the bikes data shipped with the reference R package.
Data: Fanaee-T and Gama, UCI Machine Learning Repository, CC BY 4.0.
"""
import csv
import io
import sys
import zipfile
from decimal import ROUND_HALF_UP, Decimal

SEASONS = {"spring": "winter", "summer": "spring", "fall": "summer", "winter": "fall"}
WEATHER_CODE = {"clear": 1, "misty": 2, "rain": 3, "heavy_rain": 4}
WEATHER_LABEL = {1: "clear", 2: "misty", 3: "rain", 4: "rain"}
WEEKDAYS = ["Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"]


def r6(x):
    return Decimal(repr(x)).quantize(Decimal("0.000001"), rounding=ROUND_HALF_UP)


def main(wheel, out_path):
    with zipfile.ZipFile(wheel) as z:
        text = z.read("shapiq/datasets/data/bike.csv").decode()
    hours = list(csv.DictReader(io.StringIO(text)))

    days = []
    for h in hours:
        # A day starts whenever the weekday changes; hours within a day may be missing.
        if not days or days[-1][0]["weekday"] != h["weekday"]:
            days.append([])
        days[-1].append(h)

    rows = []
    for d in days:
        n = len(d)
        # Undo the hourly scaling; hourly values carry at most 4 decimals.
        temp = sum(round(float(h["temp"]) / 41, 4) for h in d) / n
        hum = sum(float(h["humidity"]) for h in d) / n
        wind = sum(round(float(h["windspeed"]) / 67, 4) for h in d) / n
        code = sum(WEATHER_CODE[h["weather"]] for h in d) / n
        weathersit = int(Decimal(repr(code)).quantize(Decimal(1), rounding=ROUND_HALF_UP))
        first = d[0]
        rows.append({
            "season": SEASONS[first["season"]],
            "year": str(int(first["year"]) - 2011),
            "holiday": "yes" if first["holiday"] == "1" else "no",
            "weekday": WEEKDAYS[(int(first["weekday"]) + 1) % 7],
            "workingday": "yes" if first["workingday"] == "1" else "no",
            "weather": WEATHER_LABEL[weathersit],
            "temp": f"{r6(temp) * 47 - 8:f}",
            "humidity": f"{r6(hum):f}",
            "windspeed": f"{r6(wind) * 67:f}",
            "count": str(sum(int(h["count"]) for h in d)),
        })

    with open(out_path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
