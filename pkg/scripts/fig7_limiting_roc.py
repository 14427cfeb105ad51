"""n = m ROC with omega = p approaching 1 - (1 - pf)^{1 + 1/m} as p grows."""
import argparse
from pathlib import Path

import numpy as np

from roytest.roc import ScalingLaw, limiting_roc_fixed_m, pd_exact_alpha0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--ps", type=int, nargs="+", default=[10, 100, 1000])
    ap.add_argument("--out", type=Path, default=Path("results/fig7"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    pf = np.linspace(0, 1, 201)
    law = ScalingLaw(1.0, 1.0)
    cols = {"pf": pf, "limit": np.array([limiting_roc_fixed_m(args.m, law, 1.0, v) for v in pf])}
    for p in args.ps:
        cols[f"p{p}"] = pd_exact_alpha0(args.m, p, law, 1.0, pf)
        print(f"p={p}: sup gap {np.max(np.abs(cols[f'p{p}'] - cols['limit'])):.2e}")
    np.savetxt(args.out / "limiting_roc.csv", np.column_stack(list(cols.values())),
               delimiter=",", header=",".join(cols), comments="", fmt="%.17g")


if __name__ == "__main__":
    main()
