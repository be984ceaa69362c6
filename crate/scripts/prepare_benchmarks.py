#!/usr/bin/env python3
"""Build the bundled benchmark splits under data/benchmarks/.

Banana comes from the KEEL copy shipped in the `keel-ds` wheel, thyroid from
the three-class KEEL `newthyroid` file in the `common-datasets` wheel
(`pip download --no-deps keel-ds common-datasets`), and iris from
scikit-learn. Split sizes follow the classic benchmark protocol: banana
400/4900, thyroid 140/75, iris 104/45.

    python3 scripts/prepare_benchmarks.py keel_ds-*.whl common_datasets-*.whl
"""
import csv
import json
import os
import sys
import zipfile

import numpy as np

SPLITS = 5
OUT = os.path.join(os.path.dirname(__file__), "..", "data", "benchmarks")


def read_dat(zf, name):
    rows = []
    for line in zf.read(name).decode().splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([c.strip() for c in line.split(",")])
    return rows


def banana(zf):
    rows = read_dat(zf, "keel_ds/data/balanced/raw/banana.dat")
    return [[float(v) for v in r[:-1]] + [str(int(float(r[-1])))] for r in rows]


def thyroid(zf):
    # 215 rows, 5 features; class 1 is normal, 2 and 3 are hyper- and hypothyroid
    rows = read_dat(zf, "common_datasets/data/classification/newthyroid/newthyroid.dat")
    return [[float(v) for v in r[:-1]] + ["normal" if r[-1] == "1" else "abnormal"] for r in rows]


def iris(_zf):
    # scikit-learn's bundled copy; dropping the exact duplicate row leaves 149
    import sklearn

    path = os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data", "iris.csv")
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        names = header[2:]
        seen, out = set(), []
        for r in reader:
            key = tuple(r)
            if key in seen:
                continue
            seen.add(key)
            out.append([float(v) for v in r[:4]] + [names[int(r[4])]])
    return out


def random_split(n, n_train, rng):
    perm = rng.permutation(n)
    return perm[:n_train], perm[n_train:]


def stratified_split(labels, n_test, rng):
    labels = np.asarray(labels)
    frac = n_test / len(labels)
    test = []
    for c in sorted(set(labels)):
        idx = np.flatnonzero(labels == c)
        rng.shuffle(idx)
        test.extend(idx[: int(round(len(idx) * frac))])
    test = np.array(sorted(test))
    train = np.setdiff1d(np.arange(len(labels)), test)
    return rng.permutation(train), rng.permutation(test)


def write_csv(path, rows):
    d = len(rows[0]) - 1
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i + 1}" for i in range(d)] + ["label"])
        for r in rows:
            w.writerow([repr(v) for v in r[:-1]] + [r[-1]])


def main(keel_wheel, common_wheel):
    keel = zipfile.ZipFile(keel_wheel)
    common = zipfile.ZipFile(common_wheel)
    specs = [
        ("banana", banana(keel), lambda rows, rng: random_split(len(rows), 400, rng)),
        ("thyroid", thyroid(common), lambda rows, rng: random_split(len(rows), 140, rng)),
        ("iris", iris(None), lambda rows, rng: stratified_split([r[-1] for r in rows], 45, rng)),
    ]
    manifest = {"datasets": []}
    for name, rows, splitter in specs:
        os.makedirs(os.path.join(OUT, name), exist_ok=True)
        entry = {"name": name, "splits": []}
        if name == "thyroid":
            # raw units differ by two orders of magnitude across features
            entry["scaler"] = "standardize"
        if name == "iris":
            write_csv(os.path.join(OUT, name, "iris.csv"), rows)
        for s in range(SPLITS):
            rng = np.random.default_rng(1000 + s)
            tr, te = splitter(rows, rng)
            train = f"{name}/train_{s + 1:02}.csv"
            test = f"{name}/test_{s + 1:02}.csv"
            write_csv(os.path.join(OUT, train), [rows[i] for i in tr])
            write_csv(os.path.join(OUT, test), [rows[i] for i in te])
            entry["splits"].append({"train": train, "test": test})
        manifest["datasets"].append(entry)
        print(name, len(rows), "rows", len(tr), "train", len(te), "test")
    with open(os.path.join(OUT, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
