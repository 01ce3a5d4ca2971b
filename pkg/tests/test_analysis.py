"""Exponent estimation, lemma checks, and the explicit bound formulas."""

import math
from fractions import Fraction

import pytest

from minpoints import (
    BadLambda,
    DegenerateDelta,
    DomainError,
    Enclosure,
    InsufficientData,
    MeasureParams,
    MinimalPoint,
    ThetaTooSmall,
    ZeroPolynomial,
    build_report,
    choose_delta,
    default_tail_from,
    estimate_lambda,
    evertse_count_log2,
    evertse_count_log2_deg,
    index_set_I,
    measure_w,
    measure_w_ab,
    naive_height_and_degree,
    parabola_form,
    verify_lemma_W,
    verify_lemma_X,
    verify_lemma_f,
    verify_lemma_main,
)

from oracles import (
    evertse_log2_deg_oracle,
    evertse_log2_oracle,
    lambda_hat_oracle,
    measure_w_ab_oracle,
    measure_w_oracle,
)

F = Fraction


def mk_point(index, vec, delta):
    return MinimalPoint(index=index, vec=vec, X=vec[0], delta=Enclosure(delta, delta, 0))


# ---------------------------------------------------------------------------
# exponent estimation


def test_lambda_entries_match_oracle(fib12_points_1e6, fib12_oracle_1e4):
    est = estimate_lambda(fib12_points_1e6, tail_from=1)
    assert [e.i for e in est.per_index] == [1, 2, 3, 4, 5, 6]
    # the certified enclosure must contain the independent dps=60 value
    for entry, (_, _, _, d) in zip(est.per_index, fib12_oracle_1e4):
        x_next = fib12_points_1e6[entry.i].X
        ref = lambda_hat_oracle(d, x_next)
        assert entry.lo - 1e-6 <= ref <= entry.hi + 1e-6
        assert entry.hi - entry.lo < 1e-4


def test_lambda_tail_minimum(fib12_points_1e6):
    tail_from = default_tail_from(fib12_points_1e6)
    assert tail_from == 5
    est = estimate_lambda(fib12_points_1e6, tail_from=tail_from)
    assert abs(est.tail_min - 0.605820) < 1e-5
    assert est.tail_argmin == 5
    assert min(e.lo for e in est.per_index if e.i >= 5) == est.tail_min


def test_lambda_enclosure_interval_order(per2_points_1e4):
    est = estimate_lambda(per2_points_1e4, tail_from=1)
    for e in est.per_index:
        assert e.lo <= e.hi
        assert e.lo > 0
    tail = default_tail_from(per2_points_1e4)
    assert per2_points_1e4[tail].X >= 1000


def test_per2_tail_values(per2_points_1e4):
    est = estimate_lambda(per2_points_1e4, tail_from=default_tail_from(per2_points_1e4))
    values = sorted({round(e.approx, 4) for e in est.per_index if e.i >= est.tail_from})
    assert values == [0.9312, 0.9382]
    assert est.tail_min > 0.9


def test_estimate_lambda_errors(fib12_points_1e4):
    with pytest.raises(InsufficientData):
        estimate_lambda(fib12_points_1e4[:1], tail_from=1)
    with pytest.raises(DomainError):
        estimate_lambda(fib12_points_1e4, tail_from=len(fib12_points_1e4))
    with pytest.raises(DomainError):
        estimate_lambda(fib12_points_1e4, tail_from=0)
    degenerate = [
        mk_point(1, (1, 0, 0), F(1, 2)),
        mk_point(2, (4, 2, 1), F(0)),
        mk_point(3, (5, 2, 1), F(-1, 100)),
    ]
    bad = [
        degenerate[0],
        MinimalPoint(index=2, vec=(4, 2, 1), X=4, delta=Enclosure(F(0), F(1, 100), 0)),
        MinimalPoint(index=3, vec=(9, 2, 1), X=9, delta=Enclosure(F(-1, 10**6), F(0), 0)),
    ]
    with pytest.raises(DegenerateDelta):
        estimate_lambda(bad, tail_from=1)


def test_two_point_sequence():
    seq = [mk_point(1, (1, 1, 2), F(1, 3)), mk_point(2, (2, 3, 4), F(1, 5))]
    est = estimate_lambda(seq, tail_from=1)
    assert len(est.per_index) == 1
    want = math.log(3) / math.log(2)
    entry = est.per_index[0]
    assert entry.lo - 1e-12 <= want <= entry.hi + 1e-12
    assert entry.hi - entry.lo <= F(1, 10**7)


# ---------------------------------------------------------------------------
# lemma W


def test_lemma_W_holds(fib12_points_1e6):
    rep = verify_lemma_W(fib12_points_1e6)
    assert rep.verdict == "holds-on-horizon"
    assert rep.checked_range == (1, 7)
    assert all(m["wedge_content"] == 1 for m in rep.margins)
    assert rep.stats["pairs_checked"] == 6


def test_lemma_W_violated_dependent():
    seq = [mk_point(1, (1, 1, 1), F(1, 2)), mk_point(2, (2, 2, 2), F(1, 3))]
    rep = verify_lemma_W(seq)
    assert rep.verdict == "violated"
    assert rep.witness == 1


def test_lemma_W_violated_content():
    # wedge((1,0,0),(3,2,4)) = (0,-4,2), content 2: plane basis fails
    seq = [mk_point(1, (1, 0, 0), F(1, 2)), mk_point(3, (3, 2, 4), F(1, 3))]
    rep = verify_lemma_W(seq)
    assert rep.verdict == "violated"
    assert rep.witness == 1
    assert "content 2" in rep.detail
    with pytest.raises(InsufficientData):
        verify_lemma_W(seq[:1])


# ---------------------------------------------------------------------------
# lemma X


def test_lemma_X_holds(fib12_points_1e6):
    I = index_set_I(fib12_points_1e6)
    rep = verify_lemma_X(fib12_points_1e6, I)
    assert rep.verdict == "holds-on-horizon"
    assert rep.stats["I"] == [3, 4, 5]
    assert all(m["slack"] >= 0 for m in rep.margins)


def test_lemma_X_violated_equal_subspaces():
    # consecutive I-indices sharing the plane z = 0
    seq = [
        mk_point(3, (1, 1, 0), F(1, 2)),
        mk_point(4, (2, 3, 0), F(1, 3)),
        mk_point(5, (5, 7, 0), F(1, 8)),
    ]
    rep = verify_lemma_X(seq, [3, 4])
    assert rep.verdict == "violated"
    assert rep.witness == 4
    with pytest.raises(InsufficientData):
        verify_lemma_X(seq, [3])


def test_lemma_X_height_inequality_exact(fib12_points_1e6):
    # slack is exact integer arithmetic: recompute one margin by hand
    from minpoints import subspace_of

    I = index_set_I(fib12_points_1e6)
    rep = verify_lemma_X(fib12_points_1e6, I)
    i, j = I[0], I[1]
    wi = subspace_of(fib12_points_1e6[i - 1].vec, fib12_points_1e6[i].vec)
    wj = subspace_of(fib12_points_1e6[j - 1].vec, fib12_points_1e6[j].vec)
    want = wi.height_sq * wj.height_sq - fib12_points_1e6[j - 1].X ** 2
    assert rep.margins[0]["slack"] == want


# ---------------------------------------------------------------------------
# lemma f


def test_lemma_f_parabola_never_vanishes(fib12_points_1e6):
    rep = verify_lemma_f(fib12_points_1e6, parabola_form(), F(3, 5))
    assert rep.verdict == "holds-on-horizon"
    assert rep.stats["vanish_indices"] == []
    assert rep.stats["nonvanish_cutoff"] == 1
    phis = [F(m["phi"]) for m in rep.margins]
    assert all(v != 0 for v in phis)


def test_lemma_f_vanishing_interior():
    # (1,1,1) lies on the parabola x0*x2 = x1^2; later points do not
    seq = [
        mk_point(1, (1, 1, 1), F(1, 2)),
        mk_point(2, (2, 3, 4), F(1, 3)),
        mk_point(3, (3, 4, 6), F(1, 8)),
    ]
    rep = verify_lemma_f(seq, parabola_form(), F(3, 5))
    assert rep.verdict == "holds-on-horizon"
    assert rep.stats["vanish_indices"] == [1]
    assert rep.stats["nonvanish_cutoff"] == 2


def test_lemma_f_vanishing_at_end_inconclusive():
    seq = [
        mk_point(1, (1, 1, 2), F(1, 2)),
        mk_point(2, (2, 2, 2), F(1, 3)),
    ]
    rep = verify_lemma_f(seq, parabola_form(), F(3, 5))
    assert rep.verdict == "inconclusive"
    assert rep.stats["vanish_indices"] == [2]


def test_lemma_f_ratio_monotone_in_lambda(fib12_points_1e4):
    # same denominator q = 20 keeps X_{i+1}^p / X_i^q comparable across lambdas
    r_small = F(verify_lemma_f(fib12_points_1e4, parabola_form(), F(11, 20)).stats["max_ratio"])
    r_large = F(verify_lemma_f(fib12_points_1e4, parabola_form(), F(13, 20)).stats["max_ratio"])
    assert r_large > r_small
    with pytest.raises(BadLambda):
        verify_lemma_f(fib12_points_1e4, parabola_form(), F(-1, 2))


# ---------------------------------------------------------------------------
# lemma main


def test_lemma_main_finds_i1(fib12_points_1e6):
    I = index_set_I(fib12_points_1e6)
    rep = verify_lemma_main(fib12_points_1e6, I, F(3, 5), F(41, 20))
    assert rep.verdict == "holds-on-horizon"
    assert rep.stats["i1"] == 4
    # the first pair (3,4) fails the power inequality, the next holds
    assert rep.margins[0]["pass"] is False
    assert rep.margins[1]["pass"] is True


def test_lemma_main_theta_floor():
    pts = [mk_point(i, (i, i + 1, i + 2), F(1, 2 * i)) for i in (1, 2)]
    with pytest.raises(ThetaTooSmall):
        verify_lemma_main(pts, [1, 2], F(3, 5), F(1, 2))
    with pytest.raises(BadLambda):
        verify_lemma_main(pts, [1, 2], F(1, 2), F(41, 20))
    with pytest.raises(BadLambda):
        verify_lemma_main(pts, [1, 2], F(1), F(41, 20))


def test_lemma_main_small_I_inconclusive(fib12_points_1e4):
    I = index_set_I(fib12_points_1e4)
    assert I == [3, 4]
    rep = verify_lemma_main(fib12_points_1e4, I, F(3, 5), F(41, 20))
    assert rep.verdict == "inconclusive"
    rep1 = verify_lemma_main(fib12_points_1e4, [3], F(3, 5), F(41, 20))
    assert rep1.verdict == "inconclusive"
    assert "two I-indices" in rep1.detail


# ---------------------------------------------------------------------------
# subspace count bound


def test_evertse_matches_oracle():
    got = evertse_count_log2(3, F(1, 10), 6)
    assert abs(got - 611.63811063452744) < 1e-9
    assert abs(got - evertse_log2_oracle(3, F(1, 10), 6)) < 1e-9


@pytest.mark.parametrize("d", [3, 10, 100, 10**6])
def test_evertse_dual_route_agreement(d):
    # the degree form is the n=3, D=2d specialization: 4D = 8d
    delta = F(1, 7)
    general = evertse_count_log2(3, delta, 2 * d)
    special = evertse_count_log2_deg(delta, d)
    assert abs(general - special) < 1e-9
    assert abs(special - evertse_log2_deg_oracle(delta, d)) < 1e-9


def test_evertse_domains():
    assert evertse_count_log2(2, F(1), 1) > 0  # delta = 1 is allowed
    with pytest.raises(DomainError):
        evertse_count_log2(1, F(1, 10), 6)
    with pytest.raises(DomainError):
        evertse_count_log2(3, F(0), 6)
    with pytest.raises(DomainError):
        evertse_count_log2(3, F(11, 10), 6)
    with pytest.raises(DomainError):
        evertse_count_log2(3, F(1, 10), 0)
    with pytest.raises(DomainError):
        evertse_count_log2_deg(F(1, 10), 0)


def test_choose_delta():
    assert choose_delta(F(3, 5)) == F(1, 35)
    assert choose_delta(F(309, 500)) == F(59, 1750)
    assert choose_delta(F(1)) == F(1, 7)
    with pytest.raises(BadLambda):
        choose_delta(F(1, 2))
    with pytest.raises(BadLambda):
        choose_delta(F(11, 10))


# ---------------------------------------------------------------------------
# transcendence measure


def test_measure_w_matches_oracle():
    w, log_bound = measure_w(MeasureParams(c=F(1), d=3, H=2))
    assert abs(w - 1.1088485107160357) < 1e-12
    assert abs(log_bound - (-0.7685952188709145)) < 1e-12
    ow, obound = measure_w_oracle(F(1), 3, 2)
    assert abs(w - ow) < 1e-12
    assert abs(log_bound - obound) < 1e-12


@pytest.mark.parametrize("c,d,h", [(F(1), 4, 10), (F(2), 50, 3), (F(1, 3), 1000, 10**6)])
def test_measure_w_oracle_sweep(c, d, h):
    w, log_bound = measure_w(MeasureParams(c=c, d=d, H=h))
    ow, obound = measure_w_oracle(c, d, h)
    assert abs(w - ow) < 1e-9 * max(1.0, abs(ow))
    assert abs(log_bound - obound) < 1e-9 * max(1.0, abs(obound))
    assert w > 1
    assert log_bound < 0


def test_measure_w_monotone_in_degree():
    last = 0.0
    for d in range(3, 60):
        w, _ = measure_w(MeasureParams(c=F(1), d=d, H=2))
        assert w > last
        last = w


def test_measure_ab_exceeds_w():
    for d in (16, 100, 10**4):
        w, _ = measure_w(MeasureParams(c=F(1), d=d, H=2))
        ab = measure_w_ab(F(1), d)
        assert abs(ab - measure_w_ab_oracle(F(1), d)) < 1e-9 * ab
        assert ab > w


def test_measure_domains():
    with pytest.raises(DomainError):
        MeasureParams(c=F(0), d=3, H=2)
    with pytest.raises(DomainError):
        MeasureParams(c=F(1), d=2, H=2)
    with pytest.raises(DomainError):
        MeasureParams(c=F(1), d=3, H=1)


def test_naive_height_and_degree():
    assert naive_height_and_degree((-2, 0, 1)) == (2, 2)
    assert naive_height_and_degree((1, -7, 0, 3)) == (7, 3)
    assert naive_height_and_degree((0, 1)) == (1, 1)
    assert naive_height_and_degree((5, 3, 0, 0)) == (5, 1)  # trailing zeros dropped
    with pytest.raises(ZeroPolynomial):
        naive_height_and_degree((0, 0, 0))
    with pytest.raises(ZeroPolynomial):
        naive_height_and_degree(())


# ---------------------------------------------------------------------------
# report assembly


def test_build_report_shape(fib12_points_1e4):
    est = estimate_lambda(fib12_points_1e4, tail_from=3)
    lemmas = {
        "W": verify_lemma_W(fib12_points_1e4),
        "f": verify_lemma_f(fib12_points_1e4, parabola_form(), F(3, 5)),
    }
    doc = build_report(
        {"xi_spec": "word:fib(1,2)", "x_max": 10000},
        exponent=est,
        lemmas=lemmas,
        bounds={"evertse_log2": 611.6},
    )
    assert list(doc) == ["run", "exponent", "lemmas", "bounds"]
    assert list(doc["lemmas"]) == ["W", "f"]
    assert doc["exponent"]["tail_from"] == 3
    assert doc["lemmas"]["W"]["verdict"] == "holds-on-horizon"
    assert doc["bounds"]["evertse_log2"] == 611.6


def test_build_report_single_section():
    doc = build_report({"xi_spec": "cf:[0;2]"}, bounds={"w": 1.1})
    assert list(doc) == ["run", "bounds"]
    with pytest.raises(DomainError):
        build_report({"xi_spec": "cf:[0;2]"})


def test_report_lemma_fields(fib12_points_1e6):
    I = index_set_I(fib12_points_1e6)
    rep = verify_lemma_X(fib12_points_1e6, I)
    doc = build_report({"n": 1}, lemmas={"X": rep})
    entry = doc["lemmas"]["X"]
    assert entry["verdict"] == "holds-on-horizon"
    assert entry["checked_range"] == [3, 5]
    assert "witness" not in entry
    violated = verify_lemma_W(
        [mk_point(1, (1, 1, 1), F(1, 2)), mk_point(2, (2, 2, 2), F(1, 3))]
    )
    entry = build_report({"n": 1}, lemmas={"W": violated})["lemmas"]["W"]
    assert entry["witness"] == 1
