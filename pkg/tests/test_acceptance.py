"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line (shown in the terminal summary and on
stdout with ``-s``) before asserting.
"""

import csv
import io
import itertools
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from kakeya import cli
from kakeya.bounds import (
    alpha_root,
    combine_product,
    minkowski_bound,
    minkowski_bound_alpha,
    telescoping_coefficients,
)
from kakeya.entropy import cond_entropy, entropy, marginal, random_joint, shearer_check
from kakeya.fourier import (
    FpFunc,
    FpSet,
    additive_energy,
    convolve,
    dft,
    dilate,
    energy_fourier,
    fourier_lemma_scan,
    is_prime,
    primes_between,
)
from kakeya.ratios import RSet, homogeneous_ratio, kakeya_ratio, witness_replay
from kakeya.search import SearchConfig, search_lower_bound
from kakeya.sets import (
    INF,
    FreimanError,
    PointSet,
    TypicalSetParams,
    freiman_embed,
    project,
    pry_verify,
    section4_pipeline,
)
from kakeya.verify import digit_witness, fiber_regular_graph


def record(number, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _H(D, S):
    return entropy(marginal(D, S)) if S else 0.0


def test_01_entropy_axioms():
    tol = 1e-9
    rng = random.Random(20240601)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        dim = rng.randint(1, 4)
        D = random_joint(rng, dim, rng.randint(1, 64))
        coords = list(range(dim))
        labels = [rng.randrange(3) for _ in coords]
        A = [i for i in coords if labels[i] == 0] or [0]
        B = [i for i in coords if labels[i] == 1 and i not in A]
        C = [i for i in coords if labels[i] == 2 and i not in A]
        # chain rule H(A, B) = H(B) + H(A | B)
        worst = max(worst, abs(_H(D, A + B) - _H(D, B) - cond_entropy(D, A, B)))
        # conditioning reduces entropy
        worst = max(worst, cond_entropy(D, A, B) - _H(D, A))
        # submodularity H(A, B | C) <= H(A | C) + H(B | C)
        if B:
            worst = max(worst, cond_entropy(D, A + B, C) - cond_entropy(D, A, C) - cond_entropy(D, B, C))
        # Shearer with a random cover of multiplicity t
        fam = [sorted(rng.sample(coords, rng.randint(1, dim))) for _ in range(rng.randint(1, 4))] + [coords]
        t = min(sum(i in F for F in fam) for i in coords)
        rep = shearer_check(D, fam, t)
        worst = max(worst, rep.lhs - rep.rhs)
    elapsed = time.perf_counter() - t0
    ok = worst <= tol and elapsed < 10
    record(1, ok, f"1000 distributions, worst violation {worst:.2e} (tol 1e-9), {elapsed:.2f} s (< 10 s)")
    assert ok


def test_02_digit_witness_and_search():
    D = digit_witness(2)
    R = RSet([0, 1])
    kr, hr = kakeya_ratio(D, R), homogeneous_ratio(D, R)
    t0 = time.perf_counter()
    B = search_lower_bound(R, SearchConfig(restarts=20))
    elapsed = time.perf_counter() - t0
    replay = witness_replay(B)
    ok = abs(kr - 2) <= 1e-12 and abs(hr - 2) <= 1e-12 and B.value >= 1.95 and elapsed < 60
    record(2, ok, f"kakeya {kr!r}, homogeneous {hr!r}, search {B.value:.9f} (>= 1.95) "
                  f"in {elapsed:.1f} s (< 60 s), replay {replay:.9f}")
    assert ok


def test_03_bound_table(capsys):
    code = cli.main(["bound-table", "--beta", "2", "--d-max", "8"])
    out = capsys.readouterr().out
    rows = list(csv.DictReader(io.StringIO(out)))
    drift = max(abs(float(r["beta_out"]) - d * 2**d / (2**d - 1))
                for d, r in zip(range(1, 9), rows) if d >= 2)
    root = alpha_root()
    a = root.value
    code_a = cli.main(["bound-table", "--beta", repr(a), "--d-max", "8", "--format", "json"])
    arows = json.loads(capsys.readouterr().out)
    mink1 = abs(arows[0]["mink_factor"] - 1 / a)
    agree = max(abs(minkowski_bound(8, d, combine_product([a] * d)) - minkowski_bound_alpha(8, d))
                for d in range(1, 9))
    ok = code == 0 and code_a == 0 and drift <= 1e-12 and root.residual <= 1e-12 and mink1 <= 1e-12 and agree <= 1e-12
    record(3, ok, f"d=2..8 drift {drift:.1e}, alpha {a:.15f} residual {root.residual:.1e}, "
                  f"d=1 factor vs 1/alpha {mink1:.1e}, formula agreement {agree:.1e} (all <= 1e-12)")
    assert ok


def test_04_telescoping_positivity():
    rng = random.Random(4)
    smallest = math.inf
    for _ in range(10_000):
        d = rng.randint(1, 6)
        betas = [2 - rng.random() for _ in range(d)]  # uniform on (1, 2]
        smallest = min(smallest, min(telescoping_coefficients(betas)))
    ok = smallest > 0
    record(4, ok, f"10^4 beta vectors, smallest coefficient {smallest:.3e} (> 0)")
    assert ok


def test_05_fp_identities():
    tol = 1e-9
    rng = random.Random(5)
    nrng = np.random.default_rng(5)
    t0 = time.perf_counter()
    worst = {"parseval": 0.0, "convolution": 0.0, "dilation": 0.0, "energy": 0.0}
    primes = primes_between(2, 101)
    for p in primes:
        A = FpSet(p, rng.sample(range(p), rng.randint(1, p)))
        worst["parseval"] = max(worst["parseval"], abs(np.sum(np.abs(dft(A.indicator()).values) ** 2) - len(A) / p))
        f = FpFunc(p, nrng.normal(size=p) + 1j * nrng.normal(size=p))
        g = FpFunc(p, nrng.normal(size=p) + 1j * nrng.normal(size=p))
        fh, gh = dft(f).values, dft(g).values
        worst["convolution"] = max(worst["convolution"], np.max(np.abs(dft(convolve(f, g)).values - fh * gh)))
        for j in range(1, p):
            rhs = fh[(pow(j, -1, p) * np.arange(p)) % p]
            worst["dilation"] = max(worst["dilation"], np.max(np.abs(dft(dilate(f, j)).values - rhs)))
        for _ in range(3):
            S = FpSet(p, rng.sample(range(p), rng.randint(1, min(p, 10))))
            T = FpSet(p, rng.sample(range(p), rng.randint(1, min(p, 10))))
            E = additive_energy(S, T)
            worst["energy"] = max(worst["energy"], abs(energy_fourier(S, T) - E) / E)
    elapsed = time.perf_counter() - t0
    ok = all(v <= tol for v in worst.values()) and elapsed < 30
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(5, ok, f"{len(primes)} primes <= 101: {detail} (tol 1e-9), {elapsed:.2f} s (< 30 s)")
    assert ok


def test_06_pry_exact():
    rng = random.Random(6)
    primes = [q for q in range(5, 32) if is_prime(q)]
    equal = 0
    for _ in range(50):
        p = rng.choice(primes)
        Gp = PointSet({(rng.randrange(p), rng.randrange(1, p)) for _ in range(rng.randint(1, 3 * p))}, mod=p)
        y = rng.choice(sorted(project(Gp, INF)))
        rep = pry_verify(Gp, y, rng.randint(1, p - 1))
        equal += rep["equal"] and isinstance(rep["lhs"], Fraction)
    ok = equal == 50
    record(6, ok, f"exact equality on {equal}/50 configurations with p <= 31")
    assert ok


def test_07_freiman():
    rng = random.Random(7)
    R = [Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)]
    success = post = 0
    for _ in range(200):
        N = rng.randint(1, 50)
        G = fiber_regular_graph(rng, N, rng.randint(1, 8))
        p = next(q for q in itertools.count(20 * N + rng.randrange(20 * N + 1)) if is_prime(q))
        try:
            Gp, rep = freiman_embed(G, R, p, seed=rng.getrandbits(64), max_retries=64)
        except FreimanError:
            continue
        success += 1
        good = len(Gp) >= 0.8 * len(G)
        for r in R:
            a, b = r.numerator, r.denominator
            good &= len(project(Gp, r)) <= (2 * (abs(a) + b) + 1) * len(project(G, r))
        post += good
    ok = success >= 190 and post == success
    record(7, ok, f"{success}/200 embeddings succeeded (>= 190), post-conditions on {post}/{success}")
    assert ok


def _brute_sizes(A, m, p):
    s = np.arange(p)[:, None]
    a = np.array(sorted(A))[None, :]
    sizes = []
    for j in range(math.ceil(m / 2), m + 1):
        hit = ((j * (s - a)) % p)
        sizes.append(int(((hit >= 1) & (hit <= m)).any(axis=1).sum()))
    return sizes


def test_08_scan_matches_oracle():
    rng = random.Random(8)
    primes = primes_between(3, 499)
    mismatches = 0
    for p in primes:
        m = rng.randint(2, p - 1)
        size = rng.randint(math.ceil(p / m), p)
        A = set(rng.sample(range(p), size))
        rep = fourier_lemma_scan(FpSet(p, A), m, 0.1)
        mismatches += [r["size"] for r in rep["per_j"]] != _brute_sizes(A, m, p)
    saturated = all(
        fourier_lemma_scan(FpSet(p, range(p)), m, 0.25)["good_count"] == m - math.ceil(m / 2) + 1
        for p in (101, 211, 499) for m in (4, 17, p // 3)
    )
    ok = mismatches == 0 and saturated
    record(8, ok, f"per-j sizes match brute force on {len(primes) - mismatches}/{len(primes)} primes <= 499, "
                  f"saturated family all good: {saturated}")
    assert ok


def test_09_pipeline_smoke():
    runs = []
    for seed in range(3):
        rep = section4_pipeline(digit_witness(2), RSet([0, 1]), TypicalSetParams(3), 2003, seed=seed)
        runs.append(bool(rep["checks"]) and all(rep["checks"].values()))
    ok = all(runs)
    record(9, ok, f"digit witness, n = 3, p = 2003: both structural checks exact on {sum(runs)}/{len(runs)} seeds")
    assert ok


@pytest.mark.slow
def test_10_determinism(tmp_path):
    outs = {}
    for tag, workers in (("first", 1), ("second", 1), ("w8", 8)):
        path = tmp_path / f"{tag}.json"
        code = cli.main(["verify", "--suite", "all", "--seed", "0", "--workers", str(workers),
                         "--out", str(path)])
        outs[tag] = (code, path.read_bytes())
    same_runs = outs["first"][1] == outs["second"][1]
    same_workers = outs["first"][1] == outs["w8"][1]
    passed = all(code == 0 for code, _ in outs.values())
    ok = same_runs and same_workers and passed
    record(10, ok, f"verify all byte-identical across runs: {same_runs}, across workers 1/8: {same_workers}, "
                   f"all suites passed: {passed}")
    assert ok
