"""Independent LP oracle for the minimum-cost plan of the base_raw.csv instance.

Reads the raw CSV directly (no Rust code involved), solves the transportation
LP with scipy's HiGHS backend, and prints the optimal objective in dollars
with two decimals; the chosen plan goes to stderr. The printed value is
frozen in base_golden.txt, which the solver tests read.

    python3 base_golden.py base_raw.csv > base_golden.txt
"""
import csv
import sys

import numpy as np
from scipy.optimize import linprog


def clean(text):
    return text.replace("$", "").replace(",", "").replace(" ", "")


def load(path):
    lanes, caps, reqs = [], {}, {}
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    current = None
    in_reqs = False
    for row in rows[1:]:
        if not row:
            continue
        if row[0].strip() == "Total Required By Destination":
            in_reqs = True
            continue
        if in_reqs:
            reqs[row[0].strip()] = int(clean(row[1]))
            continue
        if row[0].strip():
            current = row[0].strip()
            caps[current] = int(clean(row[3]))
        cents = round(float(clean(row[2])) * 100)
        lanes.append((current, row[1].strip(), cents))
    return lanes, caps, reqs


def main():
    lanes, caps, reqs = load(sys.argv[1])
    c = np.array([l[2] for l in lanes], dtype=float)
    sups, dests = list(caps), list(reqs)
    a_ub = np.zeros((len(sups), len(lanes)))
    a_eq = np.zeros((len(dests), len(lanes)))
    for k, (s, d, _) in enumerate(lanes):
        a_ub[sups.index(s), k] = 1
        a_eq[dests.index(d), k] = 1
    res = linprog(c, A_ub=a_ub, b_ub=[caps[s] for s in sups],
                  A_eq=a_eq, b_eq=[reqs[d] for d in dests],
                  bounds=(0, None), method="highs")
    if res.status == 2:
        print("infeasible")
        return
    x = np.round(res.x).astype(int)
    assert np.allclose(x, res.x), "LP vertex not integral"
    cents = int(sum(int(q) * l[2] for q, l in zip(x, lanes)))
    for q, (s, d, _) in zip(x, lanes):
        if q:
            print(f"{s},{d},{q}", file=sys.stderr)
    print(f"{cents // 100}.{cents % 100:02d}")


if __name__ == "__main__":
    main()
