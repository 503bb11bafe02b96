"""Smoke tests for the bayesxg python module (run with plain python)."""

import math
import os
import tempfile

import bayesxg


def test_geometry():
    assert abs(bayesxg.distance_to_goal(108.0, 40.0) - 12.0) < 1e-12
    expected = math.degrees(math.acos(0.8))
    assert abs(bayesxg.shot_angle(108.0, 40.0) - expected) < 1e-9
    assert bayesxg.point_in_shot_triangle(118.0, 40.0, 108.0, 40.0)
    assert not bayesxg.point_in_shot_triangle(100.0, 40.0, 108.0, 40.0)


def test_dists():
    n = bayesxg.Normal(0.0, 1.0)
    sn = bayesxg.SkewNormal(0.0, 1.0, 0.0)
    for x in (-2.0, 0.0, 1.5):
        assert abs(bayesxg.log_pdf(n, x) - bayesxg.log_pdf(sn, x)) < 1e-12
    draws = bayesxg.sample(bayesxg.Uniform(0.0, 1.0), seed=1, n=20000)
    assert abs(sum(draws) / len(draws) - 0.5) < 0.02
    assert bayesxg.log_pdf(bayesxg.HalfNormal(5.0), -1.0) == float("-inf")


def test_logistic_fit():
    import array

    n = 200
    # Single predictor alternating between -1 and 1; outcomes lean positive
    # when the predictor is positive.
    X = [[-1.0 if i % 2 else 1.0] for i in range(n)]
    y = [1.0 if (i % 2 == 0 and i % 3 != 0) or (i % 2 == 1 and i % 5 == 0) else 0.0
         for i in range(n)]
    fit = bayesxg.fit_logistic(X, y)
    assert fit["converged"]
    pred = bayesxg.predict_logistic(fit["intercept"], fit["betas"], X)
    assert all(0.0 < p < 1.0 for p in pred)
    assert abs(bayesxg.brier(pred, y) - bayesxg.brier(pred, y)) == 0.0


def test_hmc_two_dim_normal():
    def logp_grad(z):
        return -0.5 * float(z @ z), -z

    result = bayesxg.run_hmc(2, logp_grad, chains=2, draws=500, warmup=150,
                             seed=3)
    assert 0.85 <= result["mean_accept"] <= 1.0
    assert result["divergences"] == 0
    chains = result["chains"]
    flat = [row[0] for chain in chains for row in chain]
    mean = sum(flat) / len(flat)
    assert abs(mean) < 0.15
    assert all(r < 1.1 for r in result["rhat"])


def test_metrics():
    pred = [0.2, 0.7, 0.4]
    ref = [0.1, 0.8, 0.4]
    m = bayesxg.regression_metrics(pred, ref)
    assert m["mae"] > 0.0
    assert abs(bayesxg.msd(pred, pred)) == 0.0


def test_synthetic_csv():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "shots.csv")
        rate = bayesxg.write_synthetic_shots(path, n=500, seed=7)
        assert 0.0 < rate < 1.0
        with open(path) as f:
            header = f.readline()
        assert header.startswith("competition_id,season_id,match_id")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"{test.__name__}: ok")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
