import numpy as np

from mcg.bench import BenchConfig, run_bench, sample_placement, to_csv
from mcg.core import McGateSpec, McKind, validate_spec


class TestSampler:
    def test_window_convention_and_roles(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            k = int(rng.integers(4, 12))
            n = int(rng.integers(1, k - 1))
            controls, t, a = sample_placement(k, n, rng)
            members = set(controls) | {t, a}
            assert 0 in members and k - 1 in members
            assert len(controls) == n
            assert a not in (0, k - 1)
            validate_spec(McGateSpec(McKind.MCX, k, controls, t, a))

    def test_deterministic_per_seed(self):
        a = sample_placement(10, 3, np.random.default_rng([7, 1]))
        b = sample_placement(10, 3, np.random.default_rng([7, 1]))
        assert a == b


class TestRunBench:
    def test_records_within_bounds(self):
        cfg = BenchConfig(mode="fixed_k", fixed=8, values=(2, 4), samples=10,
                          seed=3, verify_limit=8)
        records = run_bench(cfg)
        assert len(records) == 20
        for r in records:
            assert r.verify == "pass"
            assert r.achieved <= r.upper

    def test_fixed_n_mode(self):
        cfg = BenchConfig(mode="fixed_n", fixed=2, values=(6, 8), samples=5, seed=3)
        records = run_bench(cfg)
        assert {(r.k, r.n) for r in records} == {(6, 2), (8, 2)}

    def test_worker_count_does_not_change_csv(self):
        base = dict(mode="fixed_k", fixed=9, values=(2, 3), samples=12, seed=5)
        csv1 = to_csv(run_bench(BenchConfig(**base, workers=1)))
        csv2 = to_csv(run_bench(BenchConfig(**base, workers=4)))
        assert csv1 == csv2

    def test_csv_schema_stable_under_opt(self):
        base = dict(mode="fixed_k", fixed=7, values=(2,), samples=4, seed=5)
        plain = to_csv(run_bench(BenchConfig(**base, opt="none")))
        opt = to_csv(run_bench(BenchConfig(**base, opt="cost")))
        header = plain.splitlines()[0]
        assert opt.splitlines()[0] == header
        assert len(plain.splitlines()) == len(opt.splitlines())

    def test_summary_rows_present(self):
        cfg = BenchConfig(mode="fixed_k", fixed=7, values=(2,), samples=4, seed=5)
        text = to_csv(run_bench(cfg))
        assert any(line.startswith("summary,7,2,4,") for line in text.splitlines())
