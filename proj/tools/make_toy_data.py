#!/usr/bin/env python3
"""Generate the bundled toy datasets under data/toy/.

Molecules are assembled from ring templates, linkers and substituents, so
the scaffold split has many groups. Labels follow substituent rules with a
little label noise. Output is deterministic for a given --seed.
"""

import argparse
import csv
import random
from pathlib import Path

RINGS = [
    "c1cc({a})ccc1{b}",
    "c1cc({a})ncc1{b}",
    "C1CC({a})CCC1{b}",
    "c1cc({a})sc1{b}",
    "c1cc({a})oc1{b}",
    "c1ccc2cc({a})ccc2c1{b}",
    "C1CN({a})CCC1{b}",
    "c1nc({a})ncc1{b}",
    "C1CC({a})CC1{b}",
    "C1CC({a})C(=O)C1{b}",
    "c1ccc2[nH]c({a})cc2c1{b}",
    "C1COCCN1{b}",
    "c1cn({a})cn1",
    "C1CC1{b}",
]

LINKERS = ["", "C", "CC", "C(=O)N", "O", "CO", "N"]

HALOGEN = ["Cl", "F", "Br", "C(F)(F)F"]
POLAR = ["O", "N", "C(=O)O", "C(=O)N", "S(=O)(=O)N"]
NEUTRAL = ["C", "CC", "OC", "C#N", "CC(C)C", "[N+](=O)[O-]"]
SUBSTITUENTS = HALOGEN + POLAR + NEUTRAL


def fill(template, a, b):
    template = template.replace("({a})", f"({a})" if a else "")
    return template.replace("{b}", b)


def molecule(rng):
    used = []

    def sub():
        if rng.random() < 0.3:
            return ""
        s = rng.choice(SUBSTITUENTS)
        used.append(s)
        return s

    ring = rng.choice(RINGS)
    a = sub()
    if rng.random() < 0.45:
        second = rng.choice(RINGS)
        b = rng.choice(LINKERS) + fill(second, sub(), "")
    else:
        b = sub()
    return fill(ring, a, b), used


def generate(rng, count):
    seen = {}
    while len(seen) < count:
        smi, used = molecule(rng)
        if smi and smi not in seen:
            seen[smi] = used
    return list(seen.items())


def noisy(rng, value, flip):
    return 1 - value if rng.random() < flip else value


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def embedding_rows(rng, n, dim):
    return [[f"{rng.gauss(0.0, 1.0):.6f}" for _ in range(dim)] for _ in range(n)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "toy"))
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--size", type=int, default=200)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    activity = generate(rng, args.size)
    rows = []
    for smi, used in activity:
        active = int(any(s in HALOGEN for s in used))
        rows.append([smi, noisy(rng, active, 0.08)])
    write_csv(out / "toy_activity.csv", ["smiles", "active"], rows)

    multitask = generate(rng, args.size)
    rows = []
    for smi, used in multitask:
        halogen = noisy(rng, int(any(s in HALOGEN for s in used)), 0.05)
        polar = noisy(rng, int(any(s in POLAR for s in used)), 0.1)
        rows.append([smi, halogen, "" if rng.random() < 0.15 else polar])
    write_csv(out / "toy_multitask.csv", ["smiles", "halogen", "polar"], rows)

    # Label-free Gaussian vectors standing in for an external embedding model.
    dim = 16
    header = [f"e{i}" for i in range(dim)]
    write_csv(out / "toy_activity.noise16.csv", header, embedding_rows(rng, len(activity), dim))
    write_csv(out / "toy_multitask.noise16.csv", header, embedding_rows(rng, len(multitask), dim))


if __name__ == "__main__":
    main()
