"""Search all sign choices (eps_tau, eps_z, c_sign) and report which ones solve every residual."""
import argparse
import itertools

from jacobi_gmd import gauss_manin as gm
from jacobi_gmd import jacobi_series as js


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--order", type=int, default=5)
    args = p.parse_args()
    for et, ez, sc in itertools.product((1, -1), repeat=3):
        s = js.Signs(et, ez, sc)
        res = js.ode_residuals(js.normalized_tuple(args.order, s))
        bad = [k for k, r in res.items() if not r.is_zero()]
        mark = "*" if s == js.PINNED_SIGNS else " "
        print(f"{mark} eps_tau={et:+d} eps_z={ez:+d} c_sign={sc:+d}  failing: {', '.join(bad) or 'none'}")
    print(f"curvature sign: {gm.pin_curvature_sign():+d}")


if __name__ == "__main__":
    main()
