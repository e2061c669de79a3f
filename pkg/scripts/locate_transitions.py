#!/usr/bin/env python3
"""Locate regime boundaries by root finding.

For each interaction strength, finds the asymmetry z* where the device turns
from solar cell into photoconductor, and the bias where net photon absorption
turns into emission.
"""
import argparse

from scipy.optimize import brentq

from photodevice.model import DeviceParams
from photodevice.sweep import BIAS_U, FIG3_U
from photodevice.thermo import thermo_report


def z_star(U, nu=100.0, V=1.0):
    base = DeviceParams(U=U, nu=nu, V=V)
    f = lambda z: thermo_report(base.with_(z=z)).J
    lo, hi = f(0.0), f(1.0)
    return brentq(f, 0.0, 1.0, xtol=1e-10) if lo > 0 > hi else None


def emission_onset(U, z=0.1, nu=50.0, lo=3.0, hi=4.0):
    base = DeviceParams(U=U, z=z, nu=nu)
    f = lambda V: thermo_report(base.with_(V=V)).JQ_gamma
    return brentq(f, lo, hi, xtol=1e-10) if f(lo) * f(hi) < 0 else None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.parse_args()
    print("U     z* (J = 0, nu=100, V=1)")
    for U in FIG3_U:
        print(f"{U:<5} {z_star(U)}")
    print("U     V where JQ_gamma = 0 (z=0.1, nu=50)")
    for U in BIAS_U:
        print(f"{U:<5} {emission_onset(U)}")


if __name__ == "__main__":
    main()
