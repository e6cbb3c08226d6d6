"""Time the series verification at increasing q-orders."""
import argparse
import time

from jacobi_gmd import jacobi_series as js


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--orders", type=int, nargs="+", default=[5, 10, 15, 20, 25])
    args = p.parse_args()
    for n in args.orders:
        js.normalized_tuple.cache_clear()
        t = time.perf_counter()
        rep = js.verify_all(n)
        dt = time.perf_counter() - t
        print(f"order {n:>3}  ok={rep['ok']}  {dt:7.2f}s")


if __name__ == "__main__":
    main()
