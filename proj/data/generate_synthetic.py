#!/usr/bin/env python3
# Copyright 2026 The Faultwire Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates AirQualitySynthetic.csv.

The file mimics the layout of the UCI Air Quality CSV (semicolon separated,
decimal commas, two trailing empty columns, -200 as the missing marker) so the
replay loader can be exercised without the real download. The NOx(GT) column
follows a weekday/weekend diurnal traffic profile with lognormal day-to-day and
hour-to-hour noise. It is NOT real sensor data.
"""

import argparse
import datetime as dt
import math

import numpy as np

HEADER = ("Date;Time;CO(GT);PT08.S1(CO);NMHC(GT);C6H6(GT);PT08.S2(NMHC);"
          "NOx(GT);PT08.S3(NOx);NO2(GT);PT08.S4(NO2);PT08.S5(O3);T;RH;AH;;")


def comma(x, digits):
    return f"{x:.{digits}f}".replace(".", ",")


def diurnal(hour):
    morning = 210.0 * math.exp(-((hour - 8.5) ** 2) / (2 * 1.6 ** 2))
    evening = 240.0 * math.exp(-((hour - 19.0) ** 2) / (2 * 2.0 ** 2))
    midday = 70.0 * math.exp(-((hour - 13.0) ** 2) / (2 * 3.0 ** 2))
    return 35.0 + morning + evening + midday


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="AirQualitySynthetic.csv")
    parser.add_argument("--days", type=int, default=30)
    parser.add_argument("--seed", type=int, default=2004)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    start = dt.datetime(2004, 3, 10, 18, 0, 0)
    hours = args.days * 24
    day_factor = np.exp(rng.normal(0.0, 0.25, size=args.days + 2))
    noise = rng.normal(0.0, 0.18, size=hours)
    smooth = np.zeros(hours)
    for i in range(hours):
        smooth[i] = noise[i] + (0.5 * smooth[i - 1] if i > 0 else 0.0)
    missing = rng.random(hours) < 0.03

    lines = [HEADER]
    for i in range(hours):
        ts = start + dt.timedelta(hours=i)
        weekend = 0.6 if ts.weekday() >= 5 else 1.0
        nox = diurnal(ts.hour + ts.minute / 60.0) * weekend
        nox *= day_factor[(ts - start).days] * math.exp(smooth[i])
        nox = max(2.0, round(nox))
        co = nox / 95.0
        c6h6 = nox / 16.0
        temp = 12.0 + 6.0 * math.sin((ts.hour - 9) / 24.0 * 2 * math.pi)
        rh = 55.0 - 15.0 * math.sin((ts.hour - 9) / 24.0 * 2 * math.pi)
        ah = 0.75 + 0.1 * math.sin(i / 50.0)
        nox_field = "-200" if missing[i] else str(int(nox))
        row = [
            ts.strftime("%d/%m/%Y"), ts.strftime("%H.%M.%S"),
            comma(co, 1), str(int(900 + 3 * nox)), "-200", comma(c6h6, 1),
            str(int(800 + 2 * nox)), nox_field, str(int(1600 - 2 * nox)),
            str(int(40 + nox / 3)), str(int(1500 + nox)), str(int(700 + 2.5 * nox)),
            comma(temp, 1), comma(rh, 1), comma(ah, 4), "", "",
        ]
        lines.append(";".join(row))
    with open(args.out, "w", newline="\r\n") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
