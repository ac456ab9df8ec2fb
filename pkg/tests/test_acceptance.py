"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to get one PASS line per
criterion; any assertion failure marks the criterion red.
"""

import json
import math
import time

import numpy as np
import pytest

import gumbelpath as gp
from gumbelpath.cli import main as cli_main
from gumbelpath.distribution import _compute_marginals

from conftest import random_case
from test_gumbel import kl_quadrature


def report(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}", flush=True)


def fixed_case(seed: int, n: int, p: float):
    dag = gp.random_dag(n, p, seed)
    w = np.random.default_rng(seed + 10_000).normal(size=dag.num_edges)
    return dag, w


FIVE_NODE = (202, 5, 0.55)
EIGHT_NODE = (303, 8, 0.45)


def empirical_tv(dist, table, n, rng) -> float:
    index = {y: k for k, y in enumerate(table.paths)}
    hits = np.zeros(len(table.paths))
    for _ in range(n):
        hits[index[gp.sample_path(dist, rng)]] += 1
    return 0.5 * float(np.abs(hits / n - table.pmf).sum())


def test_c01_oracle_pmf_equivalence():
    """exp(path_log_prob) equals the enumeration pmf on 100 random DAGs."""
    t0 = time.perf_counter()
    for case in range(100):
        dag, w = random_case(case)  # 5..12 nodes, edge prob 0.3..0.7, fixed seeds
        alpha = 0.5 + (case % 5) * 0.5
        dist = gp.fit(dag, w, alpha)
        table = gp.exact_distribution(dag, w, alpha)
        total = 0.0
        for y, p in zip(table.paths, table.pmf):
            got = math.exp(gp.path_log_prob(dist, y))
            assert abs(got - p) <= 1e-10 * max(p, 1e-300)
            total += got
        assert total == pytest.approx(1.0, abs=1e-10)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(f"oracle pmf equivalence on 100 random DAGs ({elapsed:.2f}s)")


def test_c02_sampling_correctness():
    """TV falls with the sample count, is < 0.01 at 1e5, and the
    perturb-and-argmax sampler agrees with the reverse sampler."""
    for seed, n, p in (FIVE_NODE, EIGHT_NODE):
        dag, w = fixed_case(seed, n, p)
        dist = gp.fit(dag, w, 1.0)
        table = gp.exact_distribution(dag, w, 1.0)
        assert len(table.paths) >= 3

        counts = [1, 50, 100, 250]
        reps = 100
        rng = np.random.default_rng(seed)
        mean_tv = np.zeros(len(counts))
        for _ in range(reps):
            index = {y: k for k, y in enumerate(table.paths)}
            hits = np.zeros(len(table.paths))
            drawn = 0
            for ci, c in enumerate(counts):
                while drawn < c:
                    hits[index[gp.sample_path(dist, rng)]] += 1
                    drawn += 1
                mean_tv[ci] += 0.5 * np.abs(hits / drawn - table.pmf).sum()
        mean_tv /= reps
        assert np.all(np.diff(mean_tv) < 0.0), mean_tv  # decreasing in expectation
        tv_large = empirical_tv(dist, table, 10**5, np.random.default_rng(seed + 1))
        assert tv_large < 0.01

        race = np.zeros(len(table.paths))
        walk = np.zeros(len(table.paths))
        index = {y: k for k, y in enumerate(table.paths)}
        rng_a, rng_b = np.random.default_rng(seed + 2), np.random.default_rng(seed + 3)
        m = 10**5
        for _ in range(m):
            race[index[gp.gumbel_race_sample(table, rng_a)]] += 1
            walk[index[gp.sample_path(dist, rng_b)]] += 1
        assert 0.5 * np.abs(race / m - walk / m).sum() < 0.015
    report("sampling correctness (TV decay, 1e5 TV < 0.01, race agreement)")


def test_c03_marginals():
    """Marginals match enumeration, conserve flow, and differentiate the
    log-normaliser."""
    for case in range(25):
        dag, w = random_case(1000 + case)
        alpha = 0.5 + (case % 4) * 0.7
        dist = gp.fit(dag, w, alpha)
        m = gp.edge_marginals(dist)
        table = gp.exact_distribution(dag, w, alpha)
        assert np.abs(m.omega - gp.exact_marginals(table, dag)).max() <= 1e-10
        zeta = gp.hitting_probabilities(dist).zeta
        for v in range(2, dag.node_count + 1):
            inc = m.omega[dag.in_edge_ids(v)].sum()
            assert abs(inc - zeta[v]) <= 1e-12
            if v < dag.node_count:
                assert abs(inc - m.omega[dag.out_edge_ids(v)].sum()) <= 1e-12
        assert abs(m.omega[dag.in_edge_ids(dag.node_count)].sum() - 1.0) <= 1e-12

    dag, w = fixed_case(*EIGHT_NODE)
    alpha = 1.3
    dist = gp.fit(dag, w, alpha)
    omega = gp.edge_marginals(dist).omega
    h = 1e-5
    for k in range(dag.num_edges):
        up, dn = w.copy(), w.copy()
        up[k] += h
        dn[k] -= h
        fd = (
            gp.log_partition(gp.fit(dag, up, alpha))
            - gp.log_partition(gp.fit(dag, dn, alpha))
        ) / (2 * h)
        want = alpha * omega[k]
        assert abs(fd - want) <= 1e-5 * max(1.0, abs(want))
    report("marginals (oracle match, flow conservation, normaliser derivative)")


def test_c04_kl():
    """Closed-form KL equals the enumeration KL and behaves like one."""
    for case in range(25):
        dag, w = random_case(2000 + case)
        w2 = np.random.default_rng(case).normal(size=dag.num_edges)
        alpha = 0.4 + (case % 5) * 0.6
        p, q = gp.fit(dag, w, alpha), gp.fit(dag, w2, alpha)
        kl = gp.kl_divergence(p, q)
        oracle = gp.exact_kl(
            gp.exact_distribution(dag, w, alpha), gp.exact_distribution(dag, w2, alpha)
        )
        assert abs(kl - oracle) <= 1e-9
        assert kl >= 0.0
        assert gp.kl_divergence(p, p) == 0.0

    dag = gp.build_dag(4, [(1, 2), (1, 3), (2, 4), (3, 4)])
    p = gp.fit(dag, [1.0, 0.0, 1.0, 0.0], 1.0)
    q = gp.fit(dag, [0.0, 0.0, 0.0, 0.0], 1.0)
    golden = 0.3278133254727375  # two-term enumeration sum
    assert abs(gp.kl_divergence(p, q) - golden) <= 1e-4
    both = gp.exact_kl(
        gp.exact_distribution(dag, [1.0, 0.0, 1.0, 0.0], 1.0),
        gp.exact_distribution(dag, [0.0, 0.0, 0.0, 0.0], 1.0),
    )
    assert abs(both - golden) <= 1e-4
    report("kl (oracle match <= 1e-9, nonnegative, diamond worked example)")


def test_c05_gradients():
    """Score gradients match finite differences and average to zero."""
    h = 1e-5
    for case in range(20):
        dag, w = random_case(3000 + case)
        alpha = 0.5 + (case % 3) * 0.75
        dist = gp.fit(dag, w, alpha)
        y = gp.sample_path(dist, np.random.default_rng(case))
        g = gp.grad_log_prob(dist, y)
        w2 = np.random.default_rng(case + 5).normal(size=dag.num_edges)
        q = gp.fit(dag, w2, alpha)
        gk = gp.kl_grad_prior(dist, q)
        for k in range(dag.num_edges):
            up, dn = w.copy(), w.copy()
            up[k] += h
            dn[k] -= h
            fd = (
                gp.path_log_prob(gp.fit(dag, up, alpha), y)
                - gp.path_log_prob(gp.fit(dag, dn, alpha), y)
            ) / (2 * h)
            assert abs(fd - g[k]) <= 1e-5 * max(1.0, abs(g[k]))
            upq, dnq = w2.copy(), w2.copy()
            upq[k] += h
            dnq[k] -= h
            fdk = (
                gp.kl_divergence(dist, gp.fit(dag, upq, alpha))
                - gp.kl_divergence(dist, gp.fit(dag, dnq, alpha))
            ) / (2 * h)
            assert abs(fdk - gk[k]) <= 1e-5 * max(1.0, abs(gk[k]))

    dag, w = fixed_case(*EIGHT_NODE)
    dist = gp.fit(dag, w, 1.0)
    omega = gp.edge_marginals(dist).omega
    n = 10**5
    rng = np.random.default_rng(9)
    freq = np.zeros(dag.num_edges)
    for _ in range(n):
        freq[dag.path_edge_ids(gp.sample_path(dist, rng))] += 1
    mean_grad = dist.alpha * (freq / n - omega)
    sigma = dist.alpha * np.sqrt(omega * (1 - omega) / n)
    assert np.all(np.abs(mean_grad) <= 3 * sigma + 1e-12)
    report("gradients (finite differences, zero-mean score function)")


def _delannoy(m: int, n: int) -> int:
    d = np.zeros((m + 1, n + 1), dtype=object)
    d[0, :] = 1
    d[:, 0] = 1
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            d[i, j] = d[i - 1, j] + d[i, j - 1] + d[i - 1, j - 1]
    return int(d[m, n])


def test_c06_lattice_equivalence():
    """Dense kernels reproduce the generic pipeline on every grid <= 8x8."""
    for rows in range(1, 9):
        for cols in range(1, 9):
            if rows * cols < 2:
                continue
            rng = np.random.default_rng(rows * 101 + cols)
            kinds = ["dtw"] + (["ma"] if rows <= cols else [])
            for kind in kinds:
                spec = gp.LatticeSpec(rows, cols, kind, rng.normal(size=(rows, cols)))
                build = gp.dtw_graph if kind == "dtw" else gp.ma_graph
                fast_fit = gp.dtw_fit_fast if kind == "dtw" else gp.ma_fit_fast
                dag, w = build(spec)
                fast = fast_fit(spec, 1.2)
                slow = gp.fit(dag, w, 1.2)
                assert np.abs(fast.mu - slow.mu).max() <= 1e-12
                assert np.abs(fast.log_pi - slow.log_pi).max() <= 1e-12
                mf = gp.lattice_marginals(fast, spec)
                mg = _compute_marginals(slow)
                assert np.abs(mf.omega - mg.omega).max() <= 1e-12
                if rows <= 5 and cols <= 5:
                    count = len(gp.enumerate_paths(dag))
                    want = (
                        _delannoy(rows - 1, cols - 1)
                        if kind == "dtw"
                        else math.comb(cols - 1, rows - 1)
                    )
                    assert count == want
    big = gp.dtw_graph(gp.LatticeSpec(8, 8, "dtw", np.zeros((8, 8))))[0]
    assert len(gp.enumerate_paths(big)) == _delannoy(7, 7)
    report("lattice equivalence (grids <= 8x8, Delannoy/binomial path counts)")


def _bench_rows(kind: str, sizes: str, repeats: int, tmp_path) -> list[dict]:
    out = tmp_path / f"bench_{kind}.csv"
    code = cli_main(
        ["bench", "--kind", kind, "--sizes", sizes, "--repeats", str(repeats), "--out", str(out), "--format", "json"]
    )
    assert code == 0
    return json.loads(out.read_text())


def test_c07_linear_time_scaling(tmp_path):
    """fit+marginals time scales like the edge count; big grids stay fast."""
    sweeps = {
        "generic": "2000,4000,8000,16000",
        "dtw": "128,181,256,362",
        "ma": "128,181,256,362",
    }
    for kind, sizes in sweeps.items():
        rows = _bench_rows(kind, sizes, repeats=5, tmp_path=tmp_path)
        edges = [r["num_edges"] for r in rows]
        times = [r["fit_s"] + r["marginals_s"] for r in rows]
        for k in range(1, len(rows)):
            assert 1.7 <= edges[k] / edges[k - 1] <= 2.3  # sweep doubles |E|
            ratio = times[k] / times[k - 1]
            assert 1.3 <= ratio <= 3.0, (kind, edges, times)

    rng = np.random.default_rng(0)
    spec = gp.LatticeSpec(512, 512, "dtw", rng.normal(size=(512, 512)))
    t0 = time.perf_counter()
    gp.dtw_fit_fast(spec, 1.0)
    elapsed = time.perf_counter() - t0
    assert elapsed < 2.0
    report(f"linear-time scaling (three doublings x three kinds; 512x512 fit {elapsed:.2f}s)")


def test_c08_temperature_behaviour():
    """Sharpness grows with alpha; the distribution flattens as alpha -> 0."""
    dag = gp.random_dag(8, 0.45, 303)
    w = np.random.default_rng(777).normal(size=dag.num_edges)
    best, _ = gp.optimal_path(dag, w)
    for a, b in zip(best, best[1:]):
        idx = dag.edge_index(a, b)
        w = w.copy()
        w[idx] += 1.0  # give the argmax path a clear margin
    table = gp.exact_distribution(dag, w, 1.0)
    assert np.argsort(table.scores)[-1] != np.argsort(table.scores)[-2]  # unique argmax

    probs = []
    for alpha in (0.5, 1.0, 2.0, 4.0, 8.0):
        dist = gp.fit(dag, w, alpha)
        probs.append(math.exp(gp.path_log_prob(dist, best)))
    assert all(b >= a for a, b in zip(probs, probs[1:]))
    assert probs[-1] > 0.99

    cold = gp.exact_distribution(dag, w, 1e-4)
    uniform = np.full(len(cold.paths), 1.0 / len(cold.paths))
    assert 0.5 * np.abs(cold.pmf - uniform).sum() < 1e-3
    report("temperature behaviour (monotone sharpening, flat limit)")


def test_c09_gumbel_appendix():
    """Closed-form location divergence, relaxed Bernoulli, relaxed paths."""
    for a in (-2.0, -1.0, 0.0, 1.0, 2.0):
        for b in (-2.0, -1.0, 0.0, 1.0, 2.0):
            assert abs(gp.gumbel_kl(a, b) - kl_quadrature(a, b)) <= 1e-6

    zeta = 0.7
    out = gp.binary_gumbel_softmax(np.full(10**5, zeta), 0.01, np.random.default_rng(14))
    assert ((out > 0.0) & (out < 1.0)).all()
    assert abs((out > 0.5).mean() - zeta) < 0.01  # TV to Bernoulli(zeta)

    for seed, n, p in (FIVE_NODE, EIGHT_NODE):
        dag, w = fixed_case(seed, n, p)
        dist = gp.fit(dag, w, 1.0)
        table = gp.exact_distribution(dag, w, 1.0)
        node_sets = {frozenset(y): k for k, y in enumerate(table.paths)}
        rng = np.random.default_rng(seed + 4)
        draws = 1000
        counts = np.zeros(len(table.paths))
        valid = 0
        for _ in range(draws):
            soft = gp.soft_sample(dist, 0.01, rng)
            hard = frozenset(np.flatnonzero(soft.gamma > 0.5).tolist())
            if hard in node_sets:
                valid += 1
                counts[node_sets[hard]] += 1
        assert valid >= 0.99 * draws
        assert np.abs(counts / draws - table.pmf).max() <= 0.05
    report("gumbel appendix (kl quadrature grid, relaxed bernoulli, relaxed paths)")
