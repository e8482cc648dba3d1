#!/usr/bin/env python3
"""Rebuild the five benchmark CSVs under data/.

Breast cancer (Wisconsin original), Pima diabetes and Statlog vehicle are
copied from the KEEL mirror of the UCI files shipped in the ``keel-ds`` wheel.
The 10-class UCI yeast table is not shipped directly by KEEL; it is rebuilt
from KEEL's one-vs-rest relabelings of the same 1484 rows (the class counts
match the UCI documentation exactly).  Waveform (40 attributes) is regenerated
with the documented UCI/CART generator: three triangular base waves over 21
points, convex mixing with a uniform weight, unit Gaussian noise, plus 19
pure-noise attributes.

Usage:
    pip download --no-deps keel-ds -d /tmp/keel
    python3 tools/data/prepare_uci.py --keel-wheel /tmp/keel/keel_ds-*.whl --out data
"""

import argparse
import csv
import io
import zipfile
from collections import Counter
from pathlib import Path

import numpy as np

BALANCED = "keel_ds/data/balanced/raw/"
IMBALANCED = "keel_ds/data/imbalanced/raw/"


def read_rows(wheel, member):
    text = wheel.read(member).decode("utf-8")
    rows = []
    for line in io.StringIO(text):
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([cell.strip() for cell in line.split(",")])
    return rows


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def copy_simple(wheel, member, out, header):
    rows = read_rows(wheel, member)
    assert all(len(r) == len(header) for r in rows), member
    write_csv(out, header, rows)
    return len(rows)


def key(row):
    # KEEL files disagree on number formatting ("0.30" vs "0.3").
    return tuple(float(v) for v in row[:-1])


def features(rows):
    return Counter(key(r) for r in rows)


def positives(rows):
    return Counter(key(r) for r in rows if r[-1] == "positive")


def negatives(rows):
    return Counter(key(r) for r in rows if r[-1] != "positive")


def rebuild_yeast(wheel, out):
    def load(name):
        return read_rows(wheel, IMBALANCED + name + ".dat")

    base = load("yeast1")
    pool = features(base)
    classes = {
        "NUC": positives(base),
        "ME3": positives(load("yeast3")),
        "ME2": positives(load("yeast4")),
        "ME1": positives(load("yeast5")),
        "EXC": positives(load("yeast6")),
        "VAC": positives(load("yeast-1-2-8-9_vs_7")),
        "POX": positives(load("yeast-2_vs_8")),
        "CYT": negatives(load("yeast-2_vs_4")),
    }
    classes["ERL"] = (negatives(load("yeast-1-2-8-9_vs_7"))
                      - classes["NUC"] - classes["POX"] - classes["CYT"])
    for name, members in classes.items():
        missing = members - pool
        assert not missing, (name, missing)
        pool = pool - members
    classes["MIT"] = pool

    expected = {"CYT": 463, "NUC": 429, "MIT": 244, "ME3": 163, "ME2": 51,
                "ME1": 44, "EXC": 35, "VAC": 30, "POX": 20, "ERL": 5}
    for name, count in expected.items():
        assert sum(classes[name].values()) == count, name

    # Restore the original row order of the base file.
    remaining = {name: members.copy() for name, members in classes.items()}
    order = ["CYT", "NUC", "MIT", "ME3", "ME2", "ME1", "EXC", "VAC", "POX", "ERL"]
    rows = []
    for r in base:
        k = key(r)
        for name in order:
            if remaining[name][k] > 0:
                remaining[name][k] -= 1
                rows.append(r[:-1] + [name])
                break
        else:
            raise AssertionError(k)
    header = ["mcg", "gvh", "alm", "mit", "erl", "pox", "vac", "nuc", "class"]
    write_csv(out, header, rows)
    return len(rows)


def generate_waveform(out, n=5000, seed=1):
    rng = np.random.default_rng(seed)
    i = np.arange(1, 22)
    h1 = np.maximum(6 - np.abs(i - 11), 0)
    h2 = np.maximum(6 - np.abs(i - 15), 0)
    h3 = np.maximum(6 - np.abs(i - 7), 0)
    pairs = [(h1, h2), (h1, h3), (h2, h3)]
    rows = []
    for _ in range(n):
        label = int(rng.integers(0, 3))
        u = rng.random()
        a, b = pairs[label]
        x = u * a + (1 - u) * b + rng.standard_normal(21)
        noise = rng.standard_normal(19)
        rows.append([f"{v:.2f}" for v in np.concatenate([x, noise])] + [str(label)])
    header = [f"x{k}" for k in range(40)] + ["class"]
    write_csv(out, header, rows)
    return n


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--keel-wheel", required=True)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wheel = zipfile.ZipFile(args.keel_wheel)

    counts = {}
    counts["breast_cancer"] = copy_simple(
        wheel, BALANCED + "wisconsin.dat", out / "breast_cancer.csv",
        ["clump_thickness", "cell_size", "cell_shape", "marginal_adhesion",
         "epithelial_size", "bare_nuclei", "bland_chromatin", "normal_nucleoli",
         "mitoses", "class"])
    counts["diabetes"] = copy_simple(
        wheel, BALANCED + "pima.dat", out / "diabetes.csv",
        ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age", "class"])
    counts["vehicle"] = copy_simple(
        wheel, BALANCED + "vehicle.dat", out / "vehicle.csv",
        ["compactness", "circularity", "distance_circularity", "radius_ratio",
         "pr_axis_aspect_ratio", "max_length_aspect_ratio", "scatter_ratio",
         "elongatedness", "pr_axis_rectangularity", "max_length_rectangularity",
         "scaled_variance_major", "scaled_variance_minor", "scaled_radius_of_gyration",
         "skewness_about_major", "skewness_about_minor", "kurtosis_about_major",
         "kurtosis_about_minor", "hollows_ratio", "class"])
    counts["yeast"] = rebuild_yeast(wheel, out / "yeast.csv")
    counts["waveform"] = generate_waveform(out / "waveform.csv")
    for name, n in counts.items():
        print(f"{name}\t{n}")


if __name__ == "__main__":
    main()
