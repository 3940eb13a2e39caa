"""Random filtered complexes: page dimensions, E_inf against homology, and the lift round trip."""
import argparse
import time
from collections import Counter
from dataclasses import asdict

from bentkit.couple import couple_from_filtered, e_infinity, pages, total_homology_dim
from bentkit.fixtures import RandomFilteredConfig, filtered_fixture_set
from bentkit.lift import roundtrip_check


def main() -> None:
    defaults = RandomFilteredConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=defaults.seed)
    ap.add_argument("--max-dim", type=int, default=defaults.max_dim)
    ap.add_argument("--max-length", type=int, default=defaults.max_length)
    ap.add_argument("--verbose", "-v", action="store_true", help="print the pages of every complex")
    args = ap.parse_args()
    cfg = RandomFilteredConfig(max_dim=args.max_dim, max_length=args.max_length, seed=args.seed)
    print("config:", asdict(cfg))

    t0 = time.perf_counter()
    fixtures = filtered_fixture_set(args.count, cfg)
    agree = roundtrips = 0
    degen = Counter()
    for i, fc in enumerate(fixtures):
        c = couple_from_filtered(fc)
        ps = pages(c)
        # first page from which the dimensions no longer change
        stable = ps[-1].r
        for pg in reversed(ps):
            if pg.dims != ps[-1].dims:
                break
            stable = pg.r
        degen[stable] += 1
        agree += sum(e_infinity(c).values()) == total_homology_dim(fc.d)
        roundtrips += roundtrip_check(c).ok
        if args.verbose:
            print(i, fc.dim, [dict(pg.dims) for pg in ps])
    dt = time.perf_counter() - t0
    print(f"E_inf total = homology: {agree}/{len(fixtures)}")
    print(f"round trip reproduces every page: {roundtrips}/{len(fixtures)}")
    print("degeneration page histogram:", dict(sorted(degen.items())))
    print(f"elapsed {dt:.2f}s")


if __name__ == "__main__":
    main()
