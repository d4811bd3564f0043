import math

import pytest

import omega_sieve as om


def test_prime_table():
    t = om.PrimeTable(1_000_001)
    assert len(t) == 78498
    assert t.count(100) == 25
    assert t.select(110) == 601
    assert 97 in t and 91 not in t
    assert t.next_prime(89) == 97
    assert t.primes_in(90, 110) == [97, 101, 103, 107, 109]
    with pytest.raises(IndexError):
        t.count(2_000_000)
    with pytest.raises(ValueError):
        om.PrimeTable(2)


def test_arithmetic():
    assert om.big_omega(1024) == 10
    assert om.tau_k_squarefree(30, 8) == 512
    assert om.g_value(15) == (4, 15)
    assert om.is_prime(10_000_000_147)
    with pytest.raises(ValueError):
        om.tau_k_squarefree(12, 2)


def test_constants():
    k = om.verify_k()
    assert abs(k["case4"]["value"] - 3) <= 1e-9
    assert k["case2"]["value"] <= 1.86
    f = om.main_sieve_factor(18.4, 2 + math.log(3))
    assert 0.03 < f < 0.05
    assert 0.45 <= om.optimize_alpha(18.4) <= 0.465
    assert om.remainder_constant(0.457, 18.4) <= 0.591
    assert om.remainder_exact_small(5, 100.0) == 81
    assert math.exp(om.rankin_remainder_log(5, 18.4 * math.log(5), 0.2)) >= 81
    assert om.v_product(7) == pytest.approx(0.1, rel=1e-14)
    with pytest.raises(ValueError):
        om.main_sieve_factor(5, 2 + math.log(3))


def test_case2_and_case3():
    certs, summary = om.run_case2(1e5)
    assert summary["summary"]["failures"] == 0
    assert certs[0]["q_lo"] == 2
    assert all(c["verdict"] == "positive" for c in certs)
    assert om.check_case3(200)["holds"]
    assert not om.check_case3(150)["holds"]


def test_decomposition():
    assert om.sifted_count_exact(10, 5) == 1
    assert abs(om.r_d_residual(10, 5)["r"]) == pytest.approx(2.6)
    w = om.min_omega_decomposition(100)
    assert (w["a"], w["b"], w["omega_ab"]) == (3, 97, 2)
    assert om.primegap_witness(100)["a"] == 97
    scan = om.scan_range(2, 100)
    assert scan["max_min_omega"] == 3 and scan["failures"] == []
    assert om.max_prime_gap(100)["gap"] == 8


def test_cli_entry_point():
    code, out, _ = om.run_cli(["case3", "--log10N", "150"])
    assert code == 2
    code, out, _ = om.run_cli(["verify-k"])
    assert code == 0 and "K = 3" in out
    code, _, err = om.run_cli(["nope"])
    assert code == 1 and err
