"""Adaptive trade-off against constant trade-offs on the noisy rectangles.

    python scripts/adaptivity_sweep.py --size 128 --seed 0
"""

import argparse

from seglab import phantoms, solver
from seglab.metrics import evaluate

CONSTANTS = (0.1, 0.3, 0.5, 0.7, 0.9)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=128)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tau", type=float, default=0.5)
    ap.add_argument("--intensity-scale", type=float, default=1.0)
    ap.add_argument("--lambda-cost", choices=("rho", "pointwise"), default="rho")
    args = ap.parse_args()

    ph = phantoms.noisy_rectangles_phantom(args.size, seed=args.seed)
    print("mode,accuracy,f_measure,iterations")
    for g in (None,) + CONSTANTS:
        params = solver.SolverParams(n_labels=4, seed=args.seed, tau=args.tau, global_lambda=g,
                                     intensity_scale=args.intensity_scale,
                                     lambda_cost=args.lambda_cost)
        res = solver.run(ph.image, params)
        rep = evaluate(res.labels, ph.ground_truth)
        name = "adaptive" if g is None else f"constant {g}"
        print(f"{name},{rep.pixel_accuracy:.4f},{rep.f_measure:.4f},{res.iterations}")


if __name__ == "__main__":
    main()
