import numpy as np
import pytest

from mqsym.generators import equipollent_product, random_local_unitary
from mqsym.verifier import (
    SUITES,
    CheckVerdict,
    check_commutation,
    check_corollary2,
    check_lemma1,
    check_lemma3,
    check_prop1,
    check_prop2,
    check_prop3,
    check_theorem1,
    complete_unitary,
    run_suite,
)


def test_all_suites_pass_at_modest_scale():
    configurations = {
        "lemma1": (25, 4, 2),
        "theorem1": (15, 3, 3),
        "theorem1_i": (15, 3, 3),
        "theorem1_ii": (25, 4, 2),
        "prop1": (25, 4, 2),
        "prop2": (40, 4, 2),
        "prop3": (25, 4, 2),
        "corollary2": (15, 4, 2),
        "lemma3": (25, 4, 2),
        "commutation": (15, 4, 2),
    }
    assert set(configurations) == set(SUITES)
    for suite, (trials, sites, dim) in configurations.items():
        verdict = run_suite(suite, trials, sites, dim, seed=2024)
        assert verdict.passed, f"{suite}: {verdict.counterexamples[:1]}"
        assert verdict.trials >= trials  # some suites assert more than once per trial


def test_zero_trials_is_a_vacuous_pass():
    verdict = check_lemma1(0, 4, 2, seed=1)
    assert verdict.passed
    assert verdict.trials == 0 and verdict.failures == 0


def test_verdicts_are_deterministic():
    a = check_theorem1(10, 4, 2, seed=7, part="ii").to_dict()
    b = check_theorem1(10, 4, 2, seed=7, part="ii").to_dict()
    assert a == b
    c = check_prop2(10, 4, 2, seed=7).to_dict()
    d = check_prop2(10, 4, 2, seed=8).to_dict()
    assert c["metrics"]["min_symmetrized_norm"] != d["metrics"]["min_symmetrized_norm"]


def test_verdict_serialization_shape():
    verdict = check_prop2(5, 3, 2, seed=3)
    payload = verdict.to_dict()
    assert set(payload) == {
        "claim",
        "trials",
        "skipped",
        "failures",
        "passed",
        "max_residual",
        "metrics",
        "counterexamples",
    }
    assert payload["claim"] == "prop2"
    assert payload["passed"] is True
    assert "min_symmetrized_norm" in payload["metrics"]


def test_negative_control_broken_purity_threshold_fails():
    # corrupting the purity gate to 0.5 must be detected by theorem1(ii)
    verdict = check_theorem1(20, 4, 2, seed=11, part="ii", tol=0.5)
    assert not verdict.passed
    assert verdict.failures > 0
    assert verdict.counterexamples
    example = verdict.counterexamples[0]
    assert "trial_seed" in example and "state" in example
    assert example["state"]["format"] == "mqstate-v1"


def test_theorem1_part_i_requires_enough_levels():
    with pytest.raises(ValueError):
        check_theorem1(5, 4, 2, seed=1, part="i")
    both = check_theorem1(5, 4, 2, seed=1, part="both")
    assert both.passed
    assert both.metrics.get("part_i_skipped_low_dim") == 1.0


def test_prop2_metrics_across_trials():
    verdict = check_prop2(50, 4, 2, seed=21)
    assert verdict.passed
    assert verdict.metrics["min_symmetrized_norm"] > 1e-12
    assert verdict.metrics["max_decomposition_error"] < 1e-12


def test_prop3_skips_symmetric_products():
    # 1-site-repeated products are symmetric and must be premise-filtered,
    # not counted as assertions
    verdict = check_prop3(30, 4, 2, seed=23)
    assert verdict.passed
    assert verdict.trials + verdict.skipped == 30


def test_lemma3_runs_both_construction_modes():
    verdict = check_lemma3(20, 4, 2, seed=29)
    assert verdict.passed
    assert verdict.metrics["max_meet_deviation"] < 1e-10


def test_commutation_residuals_are_tiny():
    verdict = check_commutation(20, 4, 2, seed=31)
    assert verdict.passed
    assert verdict.max_residual < 1e-10


def test_complete_unitary_first_column():
    rng = np.random.default_rng(5)
    for dim in (2, 3, 4):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        u = complete_unitary(v)
        np.testing.assert_allclose(u[:, 0], v, atol=1e-12)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)
    # basis-vector corner case: the remaining columns must stay independent
    e1 = np.zeros(3, dtype=complex)
    e1[1] = 1.0
    u = complete_unitary(e1)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-12)


def test_corollary2_reverse_reconstruction_metric():
    verdict = check_corollary2(10, 4, 3, seed=37)
    assert verdict.passed
    assert verdict.metrics["max_reverse_residual"] < 1e-8


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("lemma9", 1, 3, 2, seed=0)


def test_counterexample_storage_is_capped():
    verdict = check_theorem1(40, 4, 2, seed=13, part="ii", tol=0.5)
    assert verdict.failures >= len(verdict.counterexamples)
    assert len(verdict.counterexamples) <= 10


def test_corollary2_forward_on_known_unitary():
    # identity unitary: |0...0> is symmetric and fully separable
    verdict = CheckVerdict("probe")
    psi = equipollent_product(4, 2, np.eye(2))
    from mqsym.factorization import finest_factorization
    from mqsym.permutations import SYMMETRIC, classify_exchange

    assert classify_exchange(psi).exchange_class == SYMMETRIC
    assert finest_factorization(psi).M == 4
    assert verdict.passed  # untouched verdict stays green
