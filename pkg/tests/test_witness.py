import pytest

from outerspine.words import (CyclicWord, basis_word, word,
                              is_automorphism)
from outerspine.marked import MarkedGraph, equivalent
from outerspine.covers import FreeFactorSystem, realizes
from outerspine.counting import count_i
from outerspine.witness import (theta, theta_inverse, u_k, occurrence_count,
                                pair_counts,
                                WitnessParams, phi_k, verify_factorization,
                                tokens_to_endo, case2_build, distortion_report,
                                report_csv, ratio_within_of_golden, WitnessError)


def test_theta_shape():
    th, toks = theta(3, 2)
    assert th.images[0] == word([1, 2], 3)
    assert th.images[1] == basis_word(1, 3)
    assert th.images[2] == basis_word(3, 3)
    assert len(toks) == 2
    inv = theta_inverse(3, 2)
    assert inv.images[0] == basis_word(2, 3)
    assert inv.images[1] == word([-2, 1], 3)
    assert th.endo.compose(inv.endo).is_identity()


def test_theta_general_m():
    for n, m in [(4, 2), (4, 3), (5, 4), (5, 2)]:
        th, toks = theta(n, m)
        assert is_automorphism(th.endo) is not None
        assert tokens_to_endo(toks, n) == th.endo
        inv = theta_inverse(n, m)
        assert th.endo.compose(inv.endo).is_identity()
        for i in range(m + 1, n + 1):
            assert th.images[i - 1] == basis_word(i, n)
            assert inv.images[i - 1] == basis_word(i, n)


def test_u_k_values():
    assert u_k(3, 2, 0) == basis_word(1, 3)
    assert u_k(3, 2, 1) == word([1, 2], 3)
    assert u_k(3, 2, 2).letters == (1, 2, 1)
    assert u_k(3, 2, 3).letters == (1, 2, 1, 1, 2)


def test_train_track_positivity():
    for n in range(3, 6):
        for m in range(2, n):
            w = u_k(n, m, 12)  # raises on any cancellation
            assert all(a > 0 for a in w.letters)


def test_occurrence_counts_fibonacci():
    counts = [occurrence_count(2, 2, k) for k in range(1, 7)]
    assert counts == [1, 1, 2, 3, 5, 8]
    assert occurrence_count(2, 2, 0) == 0
    # matrix equals direct letter count up to k = 12
    for k in range(13):
        w = u_k(3, 2, k)
        for j in (1, 2):
            direct = sum(1 for a in w.letters if abs(a) == j)
            assert occurrence_count(2, j, k) == direct


def test_pair_counts_oracle():
    for k in range(9):
        w = u_k(4, 3, k)
        letters, pairs = pair_counts(4, 3, k)
        for j in range(1, 4):
            assert letters[j] == sum(1 for a in w.letters if a == j)
        direct = {}
        for a, b in zip(w.letters, w.letters[1:]):
            direct[(a, b)] = direct.get((a, b), 0) + 1
        assert pairs == direct


def test_phi_k_case1():
    params = WitnessParams(3, "connected", r=1)
    auto0, toks0, up0 = phi_k(params, 0)
    assert auto0.images[2] == word([3, 1], 3)
    assert up0 == 1
    auto1, toks1, up1 = phi_k(params, 1)
    assert auto1.images[2] == word([3, 1, 2], 3)
    assert up1 == 2 * 2 + 1
    assert tokens_to_endo(toks1, 3) == auto1.endo
    for k in range(5):
        assert verify_factorization(params, k)


def test_phi_k_stabilizes_systems():
    params = WitnessParams(3, "connected", r=1)
    G0 = MarkedGraph.rose_identity(3)
    FA = FreeFactorSystem.of([[basis_word(1, 3)]], 3)
    FB = FreeFactorSystem.of([[basis_word(1, 3), basis_word(2, 3)]], 3)
    for k in range(6):
        auto, _, _ = phi_k(params, k)
        acted = G0.act(auto)
        assert realizes(acted, FA) is not None
        assert realizes(acted, FB) is not None


def test_params_validation():
    with pytest.raises(WitnessError):
        WitnessParams(3, "connected", r=2)
    with pytest.raises(WitnessError):
        WitnessParams(4, "two_component", ranks=(2, 2))  # coindex 1
    WitnessParams(3, "two_component", ranks=(1, 1))      # coindex 2
    with pytest.raises(WitnessError):
        # coindex 2 but the extra rank-2 component needs a rank-1 spare rose
        WitnessParams(4, "multi_component", ranks=(1, 1, 2))
    WitnessParams(4, "multi_component", ranks=(1, 1, 1))
    WitnessParams(5, "multi_component", ranks=(1, 1, 1))


def test_case2_build_shape():
    params = WitnessParams(3, "two_component", ranks=(1, 1))
    cx = case2_build(params)
    assert cx.Gp.rank == 3
    assert cx.G.rank == 3
    assert equivalent(cx.G, cx.Gp.collapse_marked([cx.eta0])[0]) is not None
    # u'_0: u_0 = e_1 in H_0, so both insertions fire
    assert cx.u_prime_path(0) == (-cx.eta0, 1, cx.eta0)
    # class of gamma' equals b_1 a_{l1} a_{l0} a_{l1}^-1 in the basis
    expected = CyclicWord.of(word([3, 2, 1, -2], 3))
    assert cx.c0 == expected


def test_case2_baseline_is_two():
    params = WitnessParams(3, "two_component", ranks=(1, 1))
    cx = case2_build(params)
    ctx = cx.counting_context()
    assert count_i(ctx, cx.c0, G=cx.Gp).value == 2


def test_case2_no_cancellation_and_growth():
    params = WitnessParams(3, "two_component", ranks=(1, 1))
    cx = case2_build(params)
    prev = None
    for k in range(8):
        path = cx.phi_image_of_gamma(k)  # raises on cancellation
        up = cx.u_prime_path(k)
        crossings = sum(1 for d in up if abs(d) == cx.eta0)
        # oracle: transitions in u_k via the pair-count recursion
        letters, pairs = pair_counts(3, 2, k)
        p = params.ranks[0]
        trans = sum(cnt for (a, b), cnt in pairs.items()
                    if (abs(a) <= p) != (abs(b) <= p))
        uk = u_k(3, 2, k).letters
        boundary = (1 if abs(uk[0]) <= p else 0) + (1 if abs(uk[-1]) <= p else 0)
        assert crossings == trans + boundary
        if prev is not None and k >= 3:
            assert crossings >= prev
        prev = crossings


def test_case2_phi_k_matches_gamma_image():
    params = WitnessParams(3, "two_component", ranks=(1, 1))
    cx = case2_build(params)
    for k in range(5):
        auto, _, _ = phi_k(params, k)
        ck = auto.apply_cyclic(cx.c0)
        via_path = CyclicWord.of(cx.Gp.path_to_word(cx.phi_image_of_gamma(k),
                                                    at_vertex=2))
        assert ck == via_path


def test_distortion_report_case1():
    params = WitnessParams(3, "connected", r=1)
    rows = distortion_report(params, 10)
    assert [r.i_k for r in rows] == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert [r.upper_nielsen for r in rows] == [4 * k + 1 for k in range(11)]
    # exponential-vs-linear: the count/bound ratio strictly grows from k = 4
    from fractions import Fraction
    ratios = [Fraction(r.i_k, r.upper_nielsen) for r in rows]
    assert all(ratios[k + 1] > ratios[k] for k in range(4, 10))
    csv = report_csv(rows)
    assert csv.splitlines()[0] == "k,upper_nielsen,i_k,spine_lb"
    assert csv.splitlines()[1] == "0,1,0,0"


def test_distortion_report_case2():
    params = WitnessParams(3, "two_component", ranks=(1, 1))
    rows = distortion_report(params, 6)
    # k = 0 row counts phi_0(c_0): u'_0 crosses eta0 twice, sigma' twice more
    assert rows[0].i_k == 6
    assert rows[-1].i_k > rows[2].i_k


def test_golden_ratio_test():
    assert ratio_within_of_golden(1618, 1000)
    assert not ratio_within_of_golden(3, 2)
    fib = [0, 1]
    for _ in range(30):
        fib.append(fib[-1] + fib[-2])
    assert ratio_within_of_golden(fib[22], fib[21])
