"""Print a one-line summary per row of the shipped genus-one table (or any knot CSV)."""
import argparse

from bentkit.cli import analyze_record
from bentkit.formats import read_knot_csv, shipped_text


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="?", help="knot CSV (default: shipped table)")
    ap.add_argument("--field", default="rational")
    args = ap.parse_args()
    text = open(args.csv, encoding="utf-8").read() if args.csv else shipped_text("table1.csv")
    recs, errs = read_knot_csv(text)
    print(f"{'name':10} {'alexander':18} {'dims':10} {'case':5} {'a':>2} {'H(A0)':>5} {'-3':>3} {'+3':>3}  verdict")
    for rec in recs:
        r = analyze_record(rec, args.field)
        g1 = r["genus_one"] or {}
        dims = "-".join(map(str, r["thin_profile"]["dims"])) if r["thin_profile"] else ""
        print(f"{r['name']:10} {r['alexander']['text']:18} {dims:10} {g1.get('case', ''):5} {g1.get('a', ''):>2} "
              f"{g1.get('dim_H_A0', ''):>5} {g1.get('dim_slope_minus3', ''):>3} {g1.get('dim_slope_plus3', ''):>3}  "
              f"{r['su2_verdict']['verdict']}")
    for e in errs:
        print(f"line {e.line} ({e.name}): {e.message}")


if __name__ == "__main__":
    main()
