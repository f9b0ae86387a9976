"""Acceptance suite: one test per criterion, one printed line per criterion.

Run with `pytest tests/test_acceptance.py -v -s`.  Every stochastic
criterion uses the fixed seed 2026; numbers in the printed lines are the
measured quantities the assertions act on.
"""

import time
from fractions import Fraction

from hyperdrift import checks, gf2
from hyperdrift.drift import asymptotic_drift_k5, complete_profile, drift_min_exact
from hyperdrift.experiments import bench_complete5, bench_triadic, fit_exponent, growth_ratios
from hyperdrift.rng import SplitMix64, spawn
from hyperdrift.xorsat import gen_complete, gen_triadic_cycle, triadic_dual

SEED = 2026


def report(num: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"criterion {num:2d}: {status} - {detail}", flush=True)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_c01_unique_satisfiability_of_complete5():
    def run():
        for n in range(6, 11):
            for i in range(20):
                z = SplitMix64(spawn(SEED, 100 * n + i)).bits(n)
                inst = gen_complete(5, n, z)
                res = gf2.solve(gf2.instance_system(inst))
                if res.status is not gf2.SolveStatus.UNIQUE or res.witness != z:
                    return False, f"n={n} trial={i}"
        return True, "n=6..10, 20 witnesses each, all unique"
    (ok, detail), dt = timed(run)
    report(1, ok, f"{detail} [{dt:.2f}s]")
    assert ok, detail


def test_c02_figure1_reproduction():
    def run():
        prof = complete_profile(200, 5)
        worst = 0.0
        for i in range(1, 10):
            delta = Fraction(i, 10)
            dev = abs(float(prof[int(200 * delta)] - asymptotic_drift_k5(delta)))
            worst = max(worst, dev)
        if worst > 0.02:
            return False, f"max deviation {worst:.4f} > 0.02"
        neg_ok = all(prof[a] < 0 for a in range(1, 91))        # density <= 0.45
        pos_ok = all(prof[a] > 0 for a in range(110, 201))     # density >= 0.55
        crossings = [
            a for a in range(90, 110) if prof[a] < 0 <= prof[a + 1]
        ]
        sign_ok = neg_ok and pos_ok and len(crossings) >= 1
        return (
            sign_ok,
            f"max |exact-asymptotic| = {worst:.4f}; sign change between sizes "
            f"{crossings[0]} and {crossings[0] + 1}" if crossings else "no crossing",
        )
    (ok, detail), dt = timed(run)
    report(2, ok, f"{detail} [{dt:.2f}s]")
    assert ok, detail


def test_c03_triadic_cycle_drift_bound():
    def run():
        dual = triadic_dual(gen_triadic_cycle(18, [0] * 36))
        mn, _ = drift_min_exact(dual)
        return mn >= Fraction(1, 3), f"exhaustive min over 2^18 subsets = {mn}"
    (ok, detail), dt = timed(run)
    report(3, ok, f"{detail}, required >= 1/3 [{dt:.2f}s]")
    assert ok, detail


def test_c04_linear_case_scaling():
    def run():
        sizes = list(range(6, 61, 6))
        points = bench_triadic(sizes, trials=200, starts=50, seed=SEED, max_steps=10**6)
        exponent = fit_exponent(points)
        means = [round(p.mean_capped, 1) for p in points]
        return exponent <= 1.3, f"fit exponent {exponent:.3f}, means {means}"
    (ok, detail), dt = timed(run)
    report(4, ok, f"{detail} [{dt:.1f}s]")
    assert ok, detail


def test_c05_exponential_case_growth():
    def run():
        points = bench_complete5([11, 13, 15, 17], trials=50, seed=SEED, max_steps=10**7)
        ratios = growth_ratios(points)
        consecutive = any(a >= 3 and b >= 3 for a, b in zip(ratios, ratios[1:]))
        means = [round(p.mean_capped, 1) for p in points]
        return (
            consecutive,
            f"means {means}, ratios {[round(r, 3) for r in ratios]}, "
            f"censored {[p.censored for p in points]}",
        )
    (ok, detail), dt = timed(run)
    report(5, ok, f"{detail}, need two consecutive ratios >= 3 [{dt:.1f}s]")
    assert ok, detail


def test_c06_coupling():
    out, dt = timed(lambda: checks.check_coupling(graphs=50, runs_per_graph=20, seed=SEED, n_max=8))
    report(6, out.ok, f"{out.checked} coupled runs, eager+lazy [{dt:.1f}s]")
    assert out.ok, out.failures[:5]


def test_c07_duality():
    out, dt = timed(lambda: checks.check_duality(graphs=20, schedules_per_graph=25, seed=SEED, n_max=7))
    report(7, out.ok, f"{out.checked} schedules, per-prefix iff [{dt:.1f}s]")
    assert out.ok, out.failures[:5]


def test_c08_stabilizing_characterization():
    out, dt = timed(lambda: checks.check_stabilizing(graphs=30, seed=SEED, n_max=10))
    report(8, out.ok, f"{out.checked} configurations certified [{dt:.1f}s]")
    assert out.ok, out.failures[:5]


def test_c09_appendix_counterexamples():
    out, dt = timed(checks.check_counterexamples)
    report(9, out.ok, f"both fixtures solvable and unreachable [{dt:.2f}s]")
    assert out.ok, out.failures


def test_c10_one_step_drift_lemma():
    out, dt = timed(lambda: checks.check_drift_lemma(graphs=20, seed=SEED, n_max=10))
    report(10, out.ok, f"{out.checked} states, exact rational identity [{dt:.1f}s]")
    assert out.ok, out.failures[:5]


def test_c11_recurrence():
    out, dt = timed(lambda: checks.check_recurrence(graphs=20, seed=SEED, n_max=10))
    report(11, out.ok, f"{out.checked} states across 20 hypergraphs [{dt:.1f}s]")
    assert out.ok, out.failures[:5]


def test_c12_acyclicity_duality():
    out, dt = timed(lambda: checks.check_acyclicity_duality(instances=200, seed=SEED))
    report(12, out.ok, f"{out.checked} instances [{dt:.1f}s]")
    assert out.ok, out.failures[:5]


def test_c13_d_epsilon_sandwich():
    out, dt = timed(lambda: checks.check_d_epsilon(fixtures_seed=SEED, runs=200))
    report(13, out.ok, f"{out.checked} sampled runs, both inequalities [{dt:.1f}s]")
    assert out.ok, out.failures[:5]
