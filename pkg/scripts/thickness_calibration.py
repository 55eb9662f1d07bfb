"""Fit the gold-film thickness to target SPR-dip and IF-peak angles.

Scans thickness, reports dip, peak angles and max |Y| (l=3) per value, then
refines the least-squares thickness with a bounded scalar minimizer.
"""

import argparse
from dataclasses import replace

import numpy as np
from scipy import optimize

from su11if.ifshift import BeamSpec, find_if_peaks
from su11if.optics import spr_angle
from su11if.scenario import load_scenario

BRACKET = (np.radians(43.0), np.radians(44.5))


def features(stack):
    beam = BeamSpec.for_stack(stack, 3, 1e-3)
    p = find_if_peaks(beam, stack, BRACKET)
    lo, hi = sorted(np.degrees([p.theta_neg_peak, p.theta_pos_peak]))
    return np.degrees(spr_angle(stack, BRACKET)), lo, hi, max(abs(p.Y_neg), abs(p.Y_pos)) * 1e6


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", default="paper-default")
    parser.add_argument("--targets", type=float, nargs=3, default=(43.63, 43.6208, 43.6407),
                        metavar=("DIP", "PEAK_LO", "PEAK_HI"), help="degrees")
    parser.add_argument("--range", type=float, nargs=2, default=(44.0, 50.0), metavar=("LO", "HI"),
                        help="thickness range, nm")
    args = parser.parse_args()

    base = load_scenario(args.scenario).stack_obj()
    targets = np.array(args.targets)

    def stack_at(d_nm):
        return replace(base, thickness_gold=d_nm * 1e-9)

    print(f"{'d[nm]':>7} {'dip[deg]':>10} {'peak_lo':>10} {'peak_hi':>10} {'max|Y|[um]':>11}")
    for d in np.arange(args.range[0], args.range[1] + 1e-9, 0.5):
        dip, lo, hi, y = features(stack_at(d))
        print(f"{d:7.2f} {dip:10.5f} {lo:10.5f} {hi:10.5f} {y:11.2f}")

    def cost(d_nm):
        return float(np.sum((np.array(features(stack_at(d_nm))[:3]) - targets) ** 2))

    fit = optimize.minimize_scalar(cost, bounds=tuple(args.range), method="bounded",
                                   options={"xatol": 1e-4})
    dip, lo, hi, y = features(stack_at(fit.x))
    print(f"\nbest fit d = {fit.x:.3f} nm: dip {dip:.5f}, peaks {lo:.5f}/{hi:.5f} deg, "
          f"max|Y| l=3 {y:.2f} um, rms angle residual {np.sqrt(fit.fun / 3):.2e} deg")


if __name__ == "__main__":
    main()
