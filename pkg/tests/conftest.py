import time

import pytest

from minpoints import minimal_point_sequence, parse_real_spec

import oracles


@pytest.fixture(scope="session")
def fib12_pair():
    xi = parse_real_spec("word:fib(1,2)")
    eta = parse_real_spec("sq:xi", xi=xi)
    return xi, eta


@pytest.fixture(scope="session")
def fib12_run_1e4(fib12_pair):
    """(points, elapsed seconds) for the single-threaded 10^4 sweep."""
    xi, eta = fib12_pair
    t0 = time.perf_counter()
    points = minimal_point_sequence(xi, eta, 10**4)
    return points, time.perf_counter() - t0


@pytest.fixture(scope="session")
def fib12_points_1e4(fib12_run_1e4):
    return fib12_run_1e4[0]


@pytest.fixture(scope="session")
def fib12_run_1e6(fib12_pair):
    xi, eta = fib12_pair
    t0 = time.perf_counter()
    points = minimal_point_sequence(xi, eta, 10**6)
    return points, time.perf_counter() - t0


@pytest.fixture(scope="session")
def fib12_points_1e6(fib12_run_1e6):
    return fib12_run_1e6[0]


@pytest.fixture(scope="session")
def fib12_oracle_1e4():
    """200-digit fixed-point brute-force sweep, fully independent."""
    terms = oracles.fib_word_oracle(1, 2, 400)
    xi_fp, eta_fp = oracles.fixed_point_pair(terms)
    return oracles.oracle_sweep(xi_fp, eta_fp, 10**4)


@pytest.fixture(scope="session")
def per2_points_1e4():
    xi = parse_real_spec("word:per(2)")
    eta = parse_real_spec("sq:xi", xi=xi)
    return minimal_point_sequence(xi, eta, 10**4)
