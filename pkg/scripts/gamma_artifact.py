"""Show how averaging Gamma over runs manufactures a falling curve.

Every run is an exact power law, so its own Gamma is flat. Higher-Re runs
have smaller exponents and extend further out, so the bin-wise ensemble
mean drifts downward with y+ even though no single run does.

    python3 scripts/gamma_artifact.py
"""

import numpy as np

from blscaling import FitWindow, constancy_check, gamma_ensemble_average, gamma_series, predict_scaling_law
from blscaling.core import VelocityProfile
from blscaling.synth import nominal_re_theta


def main():
    ln_res = np.linspace(9.0, 13.0, 8)
    profiles = []
    for i, lr in enumerate(ln_res):
        y = np.geomspace(30.0, 10 ** (2.3 + 0.25 * i), 80)
        profiles.append(VelocityProfile(f"r{i}", nominal_re_theta(lr), y, predict_scaling_law(y, lr)))

    print("run   ln Re   y+ max    Gamma mean  Gamma std")
    for p, lr in zip(profiles, ln_res):
        v = constancy_check(gamma_series(p), FitWindow(p.y_plus[0], p.y_plus[-1]))
        print(f"{p.run_id:4} {lr:6.2f} {p.y_plus[-1]:9.0f}  {v.mean:10.5f}  {v.stddev:.1e}")

    ens = gamma_ensemble_average(profiles)
    print("\nlg y+    runs  ensemble Gamma")
    for c, n, g in zip(ens.bin_centers, ens.run_count_per_bin, ens.mean_gamma):
        if n:
            print(f"{np.log10(c):5.2f}  {n:5d}  {g:.5f}")


if __name__ == "__main__":
    main()
