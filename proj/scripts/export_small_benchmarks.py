#!/usr/bin/env python3
"""Rebuild the five small tabular benchmarks under data/ as label-column CSVs.

The raw tables come from the `keel-ds` wheel on PyPI, which bundles the UCI
originals. Each table is converted to the ADBench variant of the same name:

  breastw     wisconsin, malignant = anomaly                    683 x 9
  WBC         wisconsin, unique benign rows + 10 malignant        223 x 9
  Pima        pima, tested_positive = anomaly                   768 x 8
  Ionosphere  ionosphere, binary first attribute dropped,
              class "b" = anomaly                               351 x 32
  wine        classes 2 and 3 normal, 10 rows of class 1        129 x 13

The downsampled anomaly subsets (WBC, wine) use random.Random(0).

Usage:
  python3 scripts/export_small_benchmarks.py [--wheel PATH] [--out data]
"""

import argparse
import glob
import os
import random
import subprocess
import tempfile
import zipfile

RAW = "keel_ds/data/balanced/raw/{}.dat"


def read_rows(wheel, name):
    text = zipfile.ZipFile(wheel).read(RAW.format(name)).decode()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([c.strip() for c in line.split(",")])
    return rows


def write_csv(path, names, rows):
    with open(path, "w", newline="\n") as f:
        f.write(",".join(names + ["label"]) + "\n")
        for features, label in rows:
            f.write(",".join(repr(float(v)) for v in features) + f",{label}\n")


def breastw(wheel):
    rows = read_rows(wheel, "wisconsin")
    return [f"x{j}" for j in range(9)], [(r[:-1], int(r[-1] == "4")) for r in rows]


def wbc(wheel):
    rows = read_rows(wheel, "wisconsin")
    seen, benign = set(), []
    for r in rows:
        if r[-1] == "2" and tuple(r[:-1]) not in seen:
            seen.add(tuple(r[:-1]))
            benign.append((r[:-1], 0))
    malignant = [(r[:-1], 1) for r in rows if r[-1] == "4"]
    picked = random.Random(0).sample(malignant, 10)
    return [f"x{j}" for j in range(9)], benign + picked


def pima(wheel):
    rows = read_rows(wheel, "pima")
    names = ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age"]
    return names, [(r[:-1], int(r[-1] == "tested_positive")) for r in rows]


def ionosphere(wheel):
    rows = read_rows(wheel, "ionosphere")
    return [f"x{j}" for j in range(32)], [(r[1:-1], int(r[-1] == "b")) for r in rows]


def wine(wheel):
    rows = read_rows(wheel, "wine")
    normal = [(r[:-1], 0) for r in rows if r[-1] in ("2", "3")]
    class1 = [(r[:-1], 1) for r in rows if r[-1] == "1"]
    picked = random.Random(0).sample(class1, 10)
    return [f"x{j}" for j in range(13)], normal + picked


BUILDERS = {
    "breastw": breastw,
    "WBC": wbc,
    "Pima": pima,
    "Ionosphere": ionosphere,
    "wine": wine,
}


def fetch_wheel(dest):
    subprocess.run(
        ["pip", "download", "--no-deps", "--dest", dest, "keel-ds==0.2.5"],
        check=True,
    )
    return glob.glob(os.path.join(dest, "keel_ds-*.whl"))[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel")
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(tmp)
        for name, build in BUILDERS.items():
            names, rows = build(wheel)
            path = os.path.join(args.out, f"{name}.csv")
            write_csv(path, names, rows)
            n_anom = sum(label for _, label in rows)
            print(f"{path}: {len(rows)} rows, {len(names)} features, {n_anom} anomalies")


if __name__ == "__main__":
    main()
