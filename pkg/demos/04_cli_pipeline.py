"""
The command-line pipeline
=========================

Drives the ``herdgrowth`` subcommands end to end inside a temporary
directory: fit, tabulate, project, sample curves, simulate.
"""
import tempfile
from pathlib import Path

from herdgrowth.cli import main

data = Path(__file__).resolve().parent.parent / "data"

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    def run(*args):
        print("$ herdgrowth", " ".join(args))
        code = main(list(args))
        assert code == 0, code

    def show(name, lines=8):
        text = (tmp / name).read_text().splitlines()
        print("\n".join(text[:lines]) + ("\n..." if len(text) > lines else ""), end="\n\n")

    run("fit-all", "--input", str(data / "synthetic_noiseless.csv"), "--reference", "SYN-DE",
        "--t0", "1995", "--out", str(tmp / "fits.json"))
    run("table", "--fits", str(tmp / "fits.json"), "--out", str(tmp / "table.csv"))
    show("table.csv")

    run("project", "--fits", str(data / "fits_cee_vs_germany.json"), "--country", "Romania",
        "--years", "2020,2030,2040,2050", "--out", str(tmp / "romania.csv"))
    show("romania.csv")

    run("curves", "--spec", str(data / "curves_fixed_family.json"), "--grid", "0:60:10", "--out", str(tmp / "family.csv"))
    show("family.csv")

    run("simulate", "--n", "200", "--sigma", "0.05", "--h", "0.5", "--gamma", "0.05", "--a0", "1",
        "--t-max", "30", "--runs", "2", "--seed", "2026", "--out", str(tmp / "events.csv"))
    show("events.csv", 5)
    show("events_tfp.csv", 5)
