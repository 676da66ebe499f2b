import numpy as np
import pytest

from dcqaoa.circuits import DCQAOA, QAOA, config_for
from dcqaoa.experiments import (
    RANDOM_INIT,
    RECORDS_HEADER,
    SUMMARY_HEADER,
    RunRecord,
    aggregate,
    final_means,
    optimize_circuit,
    run_benchmark,
    run_cd_compare,
    run_concentration,
    sort_records,
    train_networks,
    write_records_csv,
    write_summary_csv,
)
from dcqaoa.metalearn import GRU, LSTM
from dcqaoa.problems import MAXCUT_3REGULAR, SK, gen_3regular


def make_record(**kwargs):
    base = dict(
        experiment="e", problem="p", algorithm="a", init="i",
        instance_seed=0, iteration=0, cost=-1.0, rel_error=0.5,
    )
    base.update(kwargs)
    return RunRecord(**base)


class TestOptimizeCircuit:
    def test_row_count_and_iteration_zero(self):
        inst = gen_3regular(6, 1)
        config = config_for(inst, QAOA, 1)
        rows, theta = optimize_circuit(inst, config, np.array([0.4, 0.4]), 20)
        assert len(rows) == 20
        assert [it for it, _, _ in rows] == list(range(20))
        # iteration 0 is the untouched initial point
        from dcqaoa.circuits import evaluate_cost

        assert rows[0][1] == evaluate_cost(inst, config, np.array([0.4, 0.4]))
        assert theta.shape == (2,)

    def test_rel_errors_nonnegative_and_improving(self):
        inst = gen_3regular(6, 2)
        config = config_for(inst, DCQAOA, 1)
        rows, _ = optimize_circuit(inst, config, np.array([0.3, 0.3, 0.1]), 50)
        errs = [e for _, _, e in rows]
        assert all(e >= -1e-9 for e in errs)
        assert errs[-1] < errs[0]


class TestAggregate:
    def test_mean_and_stderr(self):
        records = [
            make_record(instance_seed=s, rel_error=v)
            for s, v in ((1, 0.1), (2, 0.2), (3, 0.3))
        ]
        rows = aggregate(records)
        assert len(rows) == 1
        assert abs(rows[0].mean_rel_error - 0.2) < 1e-15
        assert abs(rows[0].stderr - 0.1 / np.sqrt(3)) < 1e-12  # ~0.057735

    def test_single_record_stderr_zero(self):
        rows = aggregate([make_record()])
        assert rows[0].stderr == 0.0
        assert rows[0].mean_rel_error == 0.5

    def test_groups_by_iteration_and_init(self):
        records = [
            make_record(init=i, iteration=t, rel_error=0.1)
            for i in ("a", "b")
            for t in (0, 1, 2)
        ]
        assert len(aggregate(records)) == 6

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_final_means_picks_last_iteration(self):
        records = [
            make_record(iteration=t, rel_error=1.0 / (t + 1)) for t in range(5)
        ]
        out = final_means(records)
        (row,) = out.values()
        assert row.iteration == 4
        assert abs(row.mean_rel_error - 0.2) < 1e-15


class TestSortAndCsv:
    def test_sort_is_total_and_stable(self):
        records = [
            make_record(instance_seed=2, iteration=1),
            make_record(instance_seed=1, iteration=3),
            make_record(instance_seed=1, iteration=0),
        ]
        s = sort_records(records)
        assert [(r.instance_seed, r.iteration) for r in s] == [(1, 0), (1, 3), (2, 1)]

    def test_csv_headers_and_rerun_bytes(self, tmp_path):
        records = [make_record(iteration=t, cost=-0.5 - t) for t in range(3)]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_records_csv(records, p1)
        write_records_csv(list(reversed(records)), p2)
        assert p1.read_bytes() == p2.read_bytes()
        lines = p1.read_text().splitlines()
        assert lines[0] == RECORDS_HEADER
        assert len(lines) == 4

        s1 = tmp_path / "s.csv"
        write_summary_csv(records, s1)
        assert s1.read_text().splitlines()[0] == SUMMARY_HEADER


@pytest.fixture(scope="module")
def tiny_trained():
    from dcqaoa.experiments import default_train_config
    from dcqaoa.metalearn import train

    cfg = default_train_config(SK, 0, train_set_size=2)
    cfg.max_epochs = 1
    out = {}
    for algorithm in (QAOA, DCQAOA):
        for cell in (LSTM, GRU):
            out[(algorithm, cell)] = train(cell, SK, 4, 1, algorithm, cfg)
    return out


class TestRunBenchmark:
    def test_row_counts_and_determinism(self, tiny_trained):
        kwargs = dict(
            problem_kind=SK, n=4, p=1, iterations=5, instances=2,
            inits=(RANDOM_INIT, LSTM, GRU), seed=0, trained=tiny_trained,
        )
        records = run_benchmark(**kwargs)
        # 2 instances x 2 algorithms x 3 inits x 5 iterations
        assert len(records) == 60
        assert records == run_benchmark(**kwargs)
        assert all(r.rel_error >= -1e-9 for r in records)
        assert all(r.experiment == f"bench/{SK}" for r in records)

    def test_missing_network_rejected(self):
        with pytest.raises(KeyError):
            run_benchmark(SK, n=4, p=1, iterations=2, instances=1,
                          inits=(LSTM,), trained=None)


class TestRunCdCompare:
    def test_small_run_shape(self):
        records = run_cd_compare(
            n=4, p=1, train_size=1, eval_instances=1, iterations=2,
            problem_kinds=(SK,),
        )
        # 5 CD classes x 1 instance x 2 iterations
        assert len(records) == 10
        assert sorted({r.experiment for r in records}) == [
            "cd-compare/XY", "cd-compare/Y", "cd-compare/YX",
            "cd-compare/YZ", "cd-compare/ZY",
        ]


class TestRunConcentration:
    def test_small_run_shape(self):
        trained = train_networks(
            MAXCUT_3REGULAR, 4, 1, 0, algorithms=(QAOA,), cells=(LSTM,),
            train_set_size=1,
        )
        # keep max_epochs down by retraining with a tiny config instead:
        records = run_concentration(
            node_list=(4, 6), p=1, instances=2, iterations=3, seed=0,
            trained=trained, algorithms=(QAOA,),
        )
        # 2 sizes x 2 instances x 1 algorithm x 2 inits x 3 iterations
        assert len(records) == 24
        assert {r.init for r in records} == {"random", "transferred"}
        # Transferred vector is shared: same init name across sizes.
        assert {r.experiment for r in records} == {
            "concentration/n4", "concentration/n6"
        }
