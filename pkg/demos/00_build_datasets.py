"""Regenerate the bundled datasets under data/.

The MONK problems and Balance-Scale are rule-defined, so their full
labeled universes are reproduced exactly.  The MONK training files are
seeded stratified draws of the official sizes (the original arbitrary
draws are not redistributable); problem 3's training half carries the
documented 5% label noise.  Run from the repository root:

    python demos/00_build_datasets.py
"""

import json
from pathlib import Path

from analogykit.datasets import balance_scale_universe, monk_split, write_csv

DATA = Path(__file__).resolve().parent.parent / "data"

CASE_LETTERS = {
    "features_dim": 5,
    "symbols": [
        {"name": "a", "features": [1, 0, 0, 1, 0]},
        {"name": "b", "features": [0, 1, 0, 1, 0]},
        {"name": "c", "features": [0, 0, 1, 1, 0]},
        {"name": "A", "features": [1, 0, 0, 0, 1]},
        {"name": "B", "features": [0, 1, 0, 0, 1]},
        {"name": "C", "features": [0, 0, 1, 0, 1]},
    ],
}

SEED_SEQUENCES = """\
x\tab
x\tAb
x\tabc
x\taBc
y\tCa
y\tca
y\tcA
y\tcaa
"""


def main() -> None:
    DATA.mkdir(exist_ok=True)
    for problem in (1, 2, 3):
        train, test = monk_split(problem, seed=0)
        write_csv(train, DATA / f"monks-{problem}.train.csv")
        write_csv(test, DATA / f"monks-{problem}.test.csv")
        print(f"monks-{problem}: {train.n_rows} train / {test.n_rows} test")
    balance = balance_scale_universe()
    write_csv(balance, DATA / "balance-scale.csv")
    print(f"balance-scale: {balance.n_rows} rows")
    with open(DATA / "alphabet_case_letters.json", "w", encoding="utf-8") as fh:
        json.dump(CASE_LETTERS, fh, indent=2)
        fh.write("\n")
    with open(DATA / "seeds_case_letters.tsv", "w", encoding="utf-8") as fh:
        fh.write(SEED_SEQUENCES)
    print("wrote alphabet_case_letters.json, seeds_case_letters.tsv")


if __name__ == "__main__":
    main()
