"""Smoke test for the qestim_py extension module.

Build and run with python/run_smoke.sh, or put the compiled module on the
path yourself:

    cargo build --release -p qestim-python
    cp target/release/libqestim_py.so python/qestim_py.so
    python3 python/smoke_test.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import qestim_py as q


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    # moment primitives on Pauli operators
    ground = q.DensityOperator.pure([1, 0])
    sz = q.HermitianOperator.pauli_z()
    sx = q.HermitianOperator.pauli_x()
    close(q.expectation(ground, sz), 1.0)
    close(q.variance(ground, sx), 1.0)
    close(q.commutator_bound(ground, sx, q.HermitianOperator.pauli_y()), 1.0)
    print("ok: moment primitives")

    # estimating sz from an x-basis measurement of |0>
    s = 1 / math.sqrt(2)
    pom_x = q.ProbOperatorMeasure.projective([[s, s], [s, -s]])
    close(sum(q.outcome_probabilities(ground, pom_x)), 1.0)
    f_pm = q.OutcomeEstimator([1.0, -1.0])
    close(q.noise_sq(ground, pom_x, sz, f_pm), 2.0)
    f_opt = q.optimal_estimator(ground, pom_x, sz)
    close(f_opt.values()[0], 1.0)
    close(f_opt.values()[1], 1.0)
    close(q.noise_sq(ground, pom_x, sz, f_opt), 0.0)
    report = q.analyze_estimator(ground, pom_x, sz, f_opt)
    assert report.is_optimal
    close(report.estimator_variance + report.noise_sq, report.observable_variance, 1e-12)
    print("ok: optimal estimation engine")

    # unbiased joint estimates at the positivity limit
    gamma = 1 / math.sqrt(2)
    pom4 = q.ProbOperatorMeasure.four_outcome(gamma)
    assert len(pom4) == 4
    f = q.OutcomeEstimator([1 / gamma, 1 / gamma, -1 / gamma, -1 / gamma])
    close(q.unbiasedness_defect(pom4, f, sx), 0.0, 1e-12)
    joint = q.scenario_unbiased_joint(gamma, "0")
    assert joint["pass"], joint["checks"]
    close(joint["results"]["product_lhs"], 1.0, 1e-9)
    close(joint["results"]["product_rhs"], 1.0, 1e-9)
    print("ok: unbiased joint measurement")

    # qubit scenario dict
    qubit = q.scenario_qubit(state="+y", observable="sz", basis="x")
    assert qubit["pass"]
    close(qubit["results"]["noise_opt_sq"], 1.0, 1e-9)
    print("ok: qubit scenario")

    # 1-D grid: Fisher length of a Gaussian is sigma, and the exact relation
    n, extent, sigma = 1024, 12.0, 1.0
    dx = 2 * extent / n
    amps = [complex(math.exp(-((-extent + j * dx) ** 2) / (4 * sigma**2)), 0.0) for j in range(n)]
    close(q.fisher_length(amps, -extent, dx), sigma, 1e-6)
    relation = q.exact_uncertainty(amps, -extent, dx)
    close(relation["product"], 0.5, 1e-6)
    print("ok: grid momentum estimate")

    # heterodyne detection: the optimal joint estimate is 4x better
    hetero = q.scenario_heterodyne(beta=1.0 + 0.5j, fock_dim=24, grid_n=48, grid_radius=None)
    assert hetero["pass"], hetero["checks"]
    close(hetero["results"]["product_std"], 0.5, 1e-3)
    close(hetero["results"]["product_opt"], 0.125, 1e-3)
    print("ok: heterodyne scenario")

    # approximate EPR: noise ratio matches the closed form
    epr = q.scenario_epr(sigma=0.5, tau=0.5, b=1.0)
    assert epr["pass"], epr["checks"]
    close(epr["results"]["ratio"], (1 + 0.0625) ** -0.5, 1e-6)
    print("ok: epr scenario")

    # randomized verification
    for kind in ("joint", "geometric", "bound"):
        outcome = q.run_sweep(kind, trials=300, dim=3, seed=12)
        assert outcome["pass"], outcome
    print("ok: randomized sweeps")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
