"""Regenerate tests/golden/*.json from the CLI. Review the diff before committing."""
import pathlib
import sys

from jacobi_gmd.cli import main

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

CASES = {
    "gm_alpha.json": ["gm", "--basis", "alpha"],
    "gm_omega.json": ["gm", "--basis", "omega"],
    "fields.json": ["fields"],
    "bracket.json": ["bracket"],
    "serre.json": ["serre"],
    "tau_locus.json": ["tau-locus"],
    "act.json": ["act"],
    "series_E2_5.json": ["series", "E2", "--order", "5"],
    "series_J1_4.json": ["series", "J1", "--order", "4"],
    "series_wp_3.json": ["series", "wp", "--order", "3"],
    "series_tuple_3.json": ["series", "tuple", "--order", "3"],
}


def regold():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, argv in CASES.items():
        status = main(argv + ["--out", str(GOLDEN / name)])
        if status:
            sys.exit(f"{name}: exit {status}")
        print("wrote", name)


if __name__ == "__main__":
    regold()
