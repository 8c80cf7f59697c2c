"""Single-mode relaxation: the simulated decay matches the linear rate.

A tiny a_2 perturbation of the circle decays like e^{-rate t} with
rate = (A + b~)/4: one quarter for the linear law, one for the cubic law
(where the stretch-stiffening doubles both coefficients).  The fitted
rate from the nonlinear simulation reproduces this to a fraction of a
percent because the residual is quadratic in the data.
"""

import numpy as np

from peskin2d import cubic, hookean, make_single_mode
from peskin2d.integrator import RunConfig, run

print(__doc__)

for law, dt, want in ((hookean(), 0.05, 0.25), (cubic(), 0.02, 1.0)):
    curve = make_single_mode(8, 2, 1e-4)
    cfg = RunConfig(law=law, initial=curve, K=8, M=32, dt=dt, t_end=8.0,
                    snapshot_every=0.5)
    traj = run(cfg)
    t = traj.times
    a2 = np.array([row["abs_a2"] for row in traj.table])
    fitted = -np.polyfit(t, np.log(a2), 1)[0]
    print(f"{law.label}: fitted rate {fitted:.6f}, linear prediction {want}"
          f" (relative error {abs(fitted - want) / want:.2e})")
    for i in range(0, len(t), 4):
        bar = "#" * max(1, int(50 * a2[i] / a2[0]))
        print(f"  t={t[i]:5.2f} |a2|={a2[i]:.3e} {bar}")
