"""CDF of lambda_max / m^2 for m = n, m/p = c1, against its large-p limit."""
import argparse
from pathlib import Path

import numpy as np

from roytest.exactcdf import ModelDims, cdf_lambda_max, limiting_scaled_cdf


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c1", type=float, default=0.5)
    ap.add_argument("--ps", type=int, nargs="+", default=[20, 40, 80])
    ap.add_argument("--out", type=Path, default=Path("results/fig4"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    x = np.linspace(0.05, 40, 400)
    for label, power in (("omega_p", 1), ("omega_p2", 2)):
        limit = (limiting_scaled_cdf(args.c1, x, tau=1.0) if power == 1
                 else limiting_scaled_cdf(args.c1, x, phi=1.0))
        cols = {"x": x, "limit": limit}
        for p in args.ps:
            m = round(args.c1 * p)
            cols[f"p{p}"] = cdf_lambda_max(ModelDims(m, m, p), float(p ** power), m * m * x)
            print(f"{label} p={p}: sup gap {np.max(np.abs(cols[f'p{p}'] - limit)):.2e}")
        np.savetxt(args.out / f"{label}.csv", np.column_stack(list(cols.values())),
                   delimiter=",", header=",".join(cols), comments="", fmt="%.17g")


if __name__ == "__main__":
    main()
