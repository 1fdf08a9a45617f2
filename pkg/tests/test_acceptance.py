"""Acceptance criteria 1-10, each at its stated tolerance (exact) and time budget.

Every test records one PASS/FAIL line; the lines are repeated in a terminal
summary section at the end of the pytest run.
"""

import time

import numpy as np
import pytest
from oracles import apply_operator, monomials, product_by_action, psi_closed_form

from wittcenter.center import (
    center_kernel,
    center_ring,
    coordinate_brackets,
    phi_image_submodule,
)
from wittcenter.poisson2 import naive_map_witness, phi_even_submodule
from wittcenter.ring import ZZ
from wittcenter.sampling import random_center_poly, random_int_witt, random_weyl, trial_rngs
from wittcenter.suites import run_suite
from wittcenter.weyl import WeylElement, is_central, weyl_mul
from wittcenter.witt import check_addition_identity, ghost, psi, psi_recursion


def failures(*reports):
    return sum(len(r["failures"]) for r in reports)


def summary(*reports):
    return ", ".join(f"{r['suite']} p={r['p']} m={r['m']}: {r['checks']} checks" for r in reports)


def test_criterion_01_psi_integrality_and_recursion(record_criterion):
    t0 = time.perf_counter()
    cases = [(2, 4), (3, 4), (5, 3)]
    ok = True
    for p, imax in cases:
        for i in range(1, imax + 1):
            poly = psi(i, p).poly
            ok &= poly.ring.base == ZZ and all(isinstance(c, int) for c in poly.terms.values())
            ok &= {tuple(e): c for e, c in poly.terms.items()} == psi_closed_form(i, p)
        for i in range(2, imax):
            ok &= psi_recursion(i, p) == psi(i + 1, p).poly
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5
    record_criterion(1, ok, f"psi integral + recursion exact for p=2,3 (i<=4), p=5 (i<=3); {elapsed:.2f}s < 5s")
    assert ok


def test_criterion_02_witt_ring_via_ghost(record_criterion):
    t0 = time.perf_counter()
    bad = 0
    rngs = trial_rngs(2024, 200)
    for t, rng in enumerate(rngs):
        p = (2, 3, 5)[t % 3]
        length = 1 + t % 4
        u, v = random_int_witt(rng, p, length), random_int_witt(rng, p, length)
        gu, gv = ghost(u), ghost(v)
        bad += ghost(u + v) != [a + b for a, b in zip(gu, gv)]
        bad += ghost(u * v) != [a * b for a, b in zip(gu, gv)]
    pairs = 0
    for t, rng in enumerate(trial_rngs(77, 100)):
        p, length, d = (2, 3)[t % 2], 2 + t % 2, 1 + (t // 2) % 2
        z1, z2 = random_center_poly(rng, p, d, 3), random_center_poly(rng, p, d, 3)
        bad += not check_addition_identity(z1, z2, length, p)
        pairs += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    record_criterion(
        2, ok, f"200 integer Witt pairs commute with ghost, {pairs} polynomial pairs satisfy the addition identity; "
        f"{bad} mismatches; {elapsed:.2f}s < 10s"
    )
    assert ok


def _plain(u):
    return {k: int(c.value) for k, c in u.terms.items()}


def test_criterion_03_weyl_kernel_oracle(record_criterion):
    t0 = time.perf_counter()
    bad = 0
    for t, rng in enumerate(trial_rngs(3, 500)):
        p, d = (2, 3)[t % 2], 1 + (t // 2) % 2
        level = int(rng.integers(0, 3))
        M = p ** (level + 1)
        u, v = random_weyl(rng, p, level, d, 4), random_weyl(rng, p, level, d, 4)
        uv = weyl_mul(u, v)
        pu, pv, puv = _plain(u), _plain(v), _plain(uv)
        for n in monomials(d, 10):
            f = {n: 1}
            if apply_operator(puv, f, d, M) != apply_operator(pu, apply_operator(pv, f, d, M), d, M):
                bad += 1
                break
        # the action mod p^k is not faithful, so also compare with the exact product over Z
        bad += uv != WeylElement.from_terms(p, level, d, product_by_action(pu, pv, d))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 10
    record_criterion(3, ok, f"500 random pairs (p=2,3, d<=2, deg<=4) match the action oracle; {bad} mismatches; {elapsed:.2f}s < 10s")
    assert ok


def test_criterion_04_phi_odd_homomorphism(record_criterion):
    t0 = time.perf_counter()
    reports = [run_suite("phi-odd-hom", p=3, m=m, trials=100, seed=4) for m in (1, 2)]
    elapsed = time.perf_counter() - t0
    ok = failures(*reports) == 0 and elapsed < 60
    record_criterion(4, ok, f"{summary(*reports)}; {failures(*reports)} failures; {elapsed:.2f}s < 60s")
    assert ok


def test_criterion_05_center_isomorphism(record_criterion):
    t0 = time.perf_counter()
    cases = [(3, 1, 1, 9), (3, 2, 1, 27), (3, 1, 2, 9)]
    results = [center_kernel(*c) == phi_image_submodule(*c) for c in cases]
    elapsed = time.perf_counter() - t0
    ok = all(results) and elapsed < 120
    record_criterion(
        5, ok, f"center_kernel == phi image (Howell forms) for (p,m,d,D) in {cases}: {results}; {elapsed:.2f}s < 120s"
    )
    assert ok


def test_criterion_06_bracket_sign(record_criterion):
    t0 = time.perf_counter()
    ok = True
    for p in (2, 3, 5):
        for d in (1, 2):
            ring = center_ring(p, d)
            B = coordinate_brackets(p, d)
            for i in range(2 * d):
                for j in range(2 * d):
                    want = -1 if (i >= d and j == i - d) else 1 if (j >= d and i == j - d) else 0
                    ok &= B[i][j] == ring.from_int(want)
    reports = [run_suite("bracket-sign", p=p, d=2, seed=7) for p in (2, 3, 5)]
    elapsed = time.perf_counter() - t0
    ok &= failures(*reports) == 0 and elapsed < 5
    record_criterion(6, ok, f"{{Xi_i, X_j}} = -delta_ij, other brackets 0, p=2,3,5, d<=2; {elapsed:.2f}s < 5s")
    assert ok


def test_criterion_07_restricted_identities(record_criterion):
    t0 = time.perf_counter()
    reports = [run_suite("restricted-identities", p=2, trials=200, seed=7)]
    elapsed = time.perf_counter() - t0
    ok = failures(*reports) == 0 and elapsed < 30
    record_criterion(7, ok, f"{summary(*reports)}; {failures(*reports)} failures; {elapsed:.2f}s < 30s")
    assert ok


def test_criterion_08_phi_even(record_criterion):
    t0 = time.perf_counter()
    reports = [run_suite("phi-even-hom", p=2, m=m, trials=100, seed=8) for m in (1, 2)]
    w = naive_map_witness()
    naive_map_ok = (
        w["naive_sum_of_images"] != w["naive_image_of_sum"]
        and w["naive_product_of_images"] != w["naive_image_of_product"]
        and w["corrected_product"] == WeylElement.from_terms(2, 1, 1, {(4, 4): 1})
        and is_central(w["corrected_product"])
    )
    modules = [phi_even_submodule(m, 1, 2 ** (m + 1)) == center_kernel(2, m, 1, 2 ** (m + 1)) for m in (1, 2)]
    naive_square_central = is_central(w["naive_square"])
    elapsed = time.perf_counter() - t0
    core = failures(*reports) == 0 and naive_map_ok and all(modules) and elapsed < 60
    record_criterion(
        8,
        core and not naive_square_central,
        f"{summary(*reports)}; {failures(*reports)} failures; naive map not additive/multiplicative: {naive_map_ok}; "
        f"module equality m=1,2: {modules}; {elapsed:.2f}s < 60s. "
        f"Sub-claim '(x^2 d^2)^2 non-central mod 4' is UNATTAINABLE: it equals x^4 d^4 + 2 x^2 d^2, which is central",
    )
    assert core


@pytest.mark.xfail(strict=True, reason="(x^2 d^2)^2 = x^4 d^4 + 2 x^2 d^2 is central mod 4; the claimed witness does not exist")
def test_criterion_08_literal_naive_square_noncentral():
    assert not is_central(naive_map_witness()["naive_square"])


def test_criterion_09_bracket_and_power_suites(record_criterion):
    t0 = time.perf_counter()
    reports = [
        run_suite("lemma21", p=3, trials=100, seed=9),
        run_suite("lemma21", p=2, trials=100, seed=9),
        run_suite("binom-e9-bnf", p=3, m=2, trials=100, seed=9),
        run_suite("binom-e9-bnf", p=2, m=2, trials=100, seed=9),
    ]
    elapsed = time.perf_counter() - t0
    ok = failures(*reports) == 0 and elapsed < 60
    record_criterion(9, ok, f"{summary(*reports)}; {failures(*reports)} failures; {elapsed:.2f}s < 60s")
    assert ok


def test_criterion_10_serre_cartier(record_criterion):
    t0 = time.perf_counter()
    reports = [run_suite("serre-cartier", p=p, m=1, trials=50, seed=10) for p in (3, 2)]
    elapsed = time.perf_counter() - t0
    ok = failures(*reports) == 0 and elapsed < 30
    record_criterion(10, ok, f"{summary(*reports)}; {failures(*reports)} failures; {elapsed:.2f}s < 30s")
    assert ok
