#!/usr/bin/env python3
"""Scan the weighted-sieve constant C over beta and write the curve as CSV.

The maximizer row is marked, and a short summary (maximizer, value, and the
positivity window) goes to stderr so the CSV on stdout stays clean.

    python3 scripts/c_beta_curve.py --r 4 --alpha 0.0833333 --step 0.001
"""

import argparse
import sys

from sievekit import build_sieve_tables, optimize_beta


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--alpha", type=float, default=1.0 / 12.0)
    ap.add_argument("--step", type=float, default=1e-3,
                    help="beta grid step")
    ap.add_argument("--table-step", type=float, default=1e-4)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    args = ap.parse_args()

    table = build_sieve_tables(step=args.table_step)
    beta_star, c_star, curve = optimize_beta(args.r, args.alpha, table,
                                             step=args.step)

    lines = ["beta,C,is_max"]
    for beta, c in curve:
        lines.append(f"{beta:.6f},{c:.17g},{int(beta == beta_star)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    positive = [beta for beta, c in curve if c > 0.0]
    window = f"[{positive[0]:.3f}, {positive[-1]:.3f}]" if positive else "none"
    print(f"maximizer beta = {beta_star:.6f}, C = {c_star:.9f}, "
          f"positivity window {window} over {len(curve)} grid points",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
