#!/usr/bin/env python3
"""Deterministic synthetic point-label corpus with hand-assigned classes.

Label styles follow the FTC examples: AHU/VAV/SDF prefixed English labels,
floor/room prefixed labels, Japanese labels, and reserve points.

    python3 scripts/make_corpus.py tests/fixtures/corpus
"""

import csv
import random
import sys
from pathlib import Path

SEED = 20240
COUNT = 240

# (template, expected class or "" for no match)
PATTERNS = [
    ("AC_{n}_SA_Temp", "Supply_Air_Temperature_Sensor"),
    ("AC_{n}_RA_Temp", "Return_Air_Temperature_Sensor"),
    ("AC_{n}_OA_Temp", "Outside_Air_Temperature_Sensor"),
    ("AC_{n}_SA_Temp_SP", "Supply_Air_Temperature_Setpoint"),
    ("AC_{n}_SA_Static_Press", "Supply_Air_Static_Pressure_Sensor"),
    ("AC_{n}_Fan_Run_Status", "Run_Status"),
    ("AC_{n}_RA_Humi", "Return_Air_Humidity_Sensor"),
    ("AC_{n}_Smoke_Alm", "Smoke_Alarm"),
    ("AC_{n}_Low_Temp_Alm", "Low_Temperature_Alarm"),
    ("AC_{n}_OA_Damper_Cmd", "Damper_Position_Command"),
    ("AC_{n}_Mode_Status", "Mode_Status"),
    ("AHU_{n}_Indoor_Humi", "Humidity_Sensor"),
    ("AHU_{n}_CHW_Temp", "Chilled_Water_Temperature_Sensor"),
    ("AHU_{n}_HW_Temp_SP", "Hot_Water_Temperature_Setpoint"),
    ("VAV-{n} 給気温度設定値", "Supply_Air_Temperature_Setpoint"),
    ("VAV-{n} 給気温度計測値", "Supply_Air_Temperature_Sensor"),
    ("AC-{n} 還気温度", "Return_Air_Temperature_Sensor"),
    ("AC-{n} 外気湿度", "Outside_Air_Humidity_Sensor"),
    ("AC-{n} 給気静圧", "Supply_Air_Static_Pressure_Sensor"),
    ("AC-{n} 発停状態", "On_Off_Status"),
    ("{f}F_{room}_室内温度", "Temperature_Sensor"),
    ("{f}F_{room}_室内湿度", "Humidity_Sensor"),
    ("{f}F_{room}_照度", "Illuminance_Sensor"),
    ("{f}F_{room}_二酸化炭素", "CO2_Sensor"),
    ("SDF_{n}_Zone_Average_Temp", "Average_Zone_Air_Temperature_Sensor"),
    ("SDF{n}_People number", "Occupancy_Count_Sensor"),
    ("SDF_{n}_WP_Sensor_Illuminance", "Illuminance_Sensor"),
    ("SDF_{n}_WP_Sensor_Primary_Battery_Level", "Battery_Level_Sensor"),
    ("SDF_{n}_CO2", "CO2_Sensor"),
    ("SDF_{n}_Damper_Position_Status", "Damper_Position_Status"),
    ("SDF_{n}_Zone_Temp_SP", "Zone_Air_Temperature_Setpoint"),
    ("{f}F_VAV_{n}_System__AC_{m}_TM_Status", "Status"),
    ("{f}F_VAV_{n}_System__AC_{m}_TM_On_Off", "On_Off_Status"),
    ("{f}F_VAV_{n}_Air_Flow", "Air_Flow_Sensor"),
    ("{f}F_VAV_{n}_Air_Flow_SP", "Air_Flow_Setpoint"),
    ("CAV_{n}_SA_Flow", "Supply_Air_Flow_Sensor"),
    ("FCU_{n}_Fan_Speed", "Fan_Speed_Sensor"),
    ("{f}F_{room}_Conference_Room_Occ", "Occupancy_Sensor"),
    ("{f}F_{room}_Locker_Room_in_library_On_Off_Status", "On_Off_Status"),
    ("{f}F_Lobby", "Lobby"),
    ("{f}F_{room}_Library", "Library"),
    ("VAV_{n}_F_Audience_Area", "Auditorium"),
    ("Meter_{n}_Electric_Power", "Electric_Power_Sensor"),
    ("CHW_Pump_{n}_Run_Status", "Run_Status"),
]

RESERVE = ["Reserve_AV", "Reserve_DO_{n}", "Reserve_{n}", "Reserve_AI_{n}"]
RESERVE_SHARE = 0.04


def generate(rng):
    rows = []
    for i in range(COUNT):
        if rng.random() < RESERVE_SHARE:
            template, expected = rng.choice(RESERVE), ""
        else:
            template, expected = rng.choice(PATTERNS)
        f = rng.randint(1, 10)
        label = template.format(n=rng.randint(1, 999), m=rng.randint(100, 999), f=f, room=f * 100 + rng.randint(1, 40))
        code = f"{f}.{rng.randint(10, 99)}.{i + 1:03d}.{rng.randint(100, 999)}"
        rows.append((code, label, expected))
    return rows


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/corpus")
    out.mkdir(parents=True, exist_ok=True)
    rows = generate(random.Random(SEED))
    with open(out / "pointlist.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", "name", "unit"])
        for code, label, _ in rows:
            w.writerow([code, label, ""])
    with open(out / "labels.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", "expected"])
        for code, _, expected in rows:
            w.writerow([code, expected])
    print(f"{len(rows)} labels -> {out}")


if __name__ == "__main__":
    main()
