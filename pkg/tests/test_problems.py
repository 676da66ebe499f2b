import itertools
import json

import numpy as np
import pytest

from dcqaoa.problems import (
    MAXCUT_3REGULAR,
    MAXCUT_COMPLETE_WEIGHTED,
    SK,
    cost_hamiltonian,
    exact_ground_energy,
    from_json,
    gen_3regular,
    gen_complete_weighted,
    gen_sk,
    generate,
    relative_error,
    to_json,
)
from dcqaoa.simulator import DiagonalOperator, expectation_diagonal, StateVector


def degrees(inst):
    deg = [0] * inst.n
    for i, j, _ in inst.edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def brute_force_diagonal(inst):
    """Independent per-bitstring enumeration of the cost."""
    vals = []
    for k in range(1 << inst.n):
        z = [1 - 2 * ((k >> q) & 1) for q in range(inst.n)]
        if inst.is_maxcut:
            vals.append(-0.5 * sum(w * (1 - z[i] * z[j]) for i, j, w in inst.edges))
        else:
            vals.append(-sum(w * z[i] * z[j] for i, j, w in inst.edges))
    return np.array(vals)


class TestThreeRegular:
    def test_n4_is_k4(self):
        inst = gen_3regular(4, 123)
        assert inst.edges == tuple(
            (i, j, 1.0) for i, j in itertools.combinations(range(4), 2)
        )

    def test_n10_counts_and_degrees(self):
        inst = gen_3regular(10, 7)
        assert len(inst.edges) == 15
        assert degrees(inst) == [3] * 10

    def test_deterministic(self):
        assert gen_3regular(10, 7).edges == gen_3regular(10, 7).edges

    def test_different_seeds_differ(self):
        assert gen_3regular(10, 1).edges != gen_3regular(10, 2).edges

    @pytest.mark.parametrize("n", [3, 5, 2, 0])
    def test_invalid_n(self, n):
        with pytest.raises(ValueError):
            gen_3regular(n, 0)


class TestCompleteWeighted:
    def test_counts(self):
        assert len(gen_complete_weighted(3, 0).edges) == 3
        assert len(gen_complete_weighted(10, 0).edges) == 45

    def test_weights_in_half_open_unit_interval(self):
        inst = gen_complete_weighted(12, 5)
        ws = [w for _, _, w in inst.edges]
        assert all(0 < w <= 1 for w in ws)

    def test_weight_mean(self):
        ws = []
        seed = 0
        while len(ws) < 10_000:
            inst = gen_complete_weighted(20, seed)
            ws.extend(w for _, _, w in inst.edges)
            seed += 1
        assert abs(np.mean(ws) - 0.5) < 0.02

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            gen_complete_weighted(1, 0)


class TestSK:
    def test_couplings_pm_one(self):
        inst = gen_sk(10, 3)
        assert len(inst.edges) == 45
        assert all(w in (-1.0, 1.0) for _, _, w in inst.edges)

    def test_coupling_mean(self):
        ws = []
        seed = 0
        while len(ws) < 10_000:
            inst = gen_sk(20, seed)
            ws.extend(w for _, _, w in inst.edges)
            seed += 1
        assert abs(np.mean(ws)) < 0.03

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            gen_sk(1, 0)


class TestCostHamiltonian:
    def test_single_edge_maxcut(self):
        inst = from_json(
            '{"kind": "maxcut_3regular", "n": 2, "seed": 0, "edges": [[0, 1, 1.0]]}'
        )
        np.testing.assert_allclose(
            cost_hamiltonian(inst).values, [0, -1, -1, 0], atol=1e-15
        )

    def test_two_node_sk(self):
        inst = from_json('{"kind": "sk", "n": 2, "seed": 0, "edges": [[0, 1, 1.0]]}')
        np.testing.assert_allclose(
            cost_hamiltonian(inst).values, [-1, 1, 1, -1], atol=1e-15
        )

    def test_triangle_min_is_minus_two(self):
        edges = [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]]
        inst = from_json(
            json.dumps(
                {"kind": "maxcut_3regular", "n": 3, "seed": 0, "edges": edges}
            )
        )
        vals = cost_hamiltonian(inst).values
        np.testing.assert_allclose(vals, brute_force_diagonal(inst), atol=1e-12)
        assert vals.min() == -2

    @pytest.mark.parametrize(
        "kind,n,seed",
        [(MAXCUT_3REGULAR, 6, 1), (MAXCUT_COMPLETE_WEIGHTED, 5, 2), (SK, 5, 3)],
    )
    def test_matches_brute_force(self, kind, n, seed):
        inst = generate(kind, n, seed)
        np.testing.assert_allclose(
            cost_hamiltonian(inst).values, brute_force_diagonal(inst), atol=1e-12
        )

    def test_maxcut_diagonal_nonpositive_and_zero_at_origin(self):
        for kind, seed in ((MAXCUT_3REGULAR, 4), (MAXCUT_COMPLETE_WEIGHTED, 4)):
            vals = cost_hamiltonian(generate(kind, 6, seed)).values
            assert vals.max() <= 0
            assert vals[0] == 0

    def test_sk_spin_flip_symmetry_exact(self):
        vals = cost_hamiltonian(gen_sk(6, 9)).values
        flipped = vals[::-1]  # bitwise complement reverses the index order
        assert np.array_equal(vals, flipped)


class TestGroundEnergy:
    def test_single_edge(self):
        op = DiagonalOperator(2, np.array([0.0, -1.0, -1.0, 0.0]))
        e0, arg = exact_ground_energy(op)
        assert e0 == -1.0
        assert arg == 1  # lowest index on ties

    def test_constant_diagonal_tie_break(self):
        op = DiagonalOperator(2, np.full(4, 3.25))
        e0, arg = exact_ground_energy(op)
        assert (e0, arg) == (3.25, 0)

    def test_expectation_never_below_ground(self, rng):
        inst = gen_sk(5, 11)
        op = cost_hamiltonian(inst)
        e0, _ = exact_ground_energy(op)
        for _ in range(20):
            amps = rng.normal(size=32) + 1j * rng.normal(size=32)
            amps /= np.linalg.norm(amps)
            assert expectation_diagonal(StateVector(5, amps), op) >= e0 - 1e-9


class TestRelativeError:
    def test_values(self):
        assert relative_error(-2.0, -2.0) == 0
        assert relative_error(0.0, -2.0) == 1.0
        assert relative_error(-1.5, -2.0) == 0.25

    def test_zero_ground_energy_rejected(self):
        with pytest.raises(ValueError):
            relative_error(1.0, 0.0)


class TestJson:
    @pytest.mark.parametrize(
        "kind", [MAXCUT_3REGULAR, MAXCUT_COMPLETE_WEIGHTED, SK]
    )
    def test_roundtrip_bit_exact(self, kind):
        inst = generate(kind, 6, 17)
        again = from_json(to_json(inst))
        assert again == inst

    def test_schema(self):
        obj = json.loads(to_json(gen_3regular(4, 1)))
        assert set(obj) == {"kind", "n", "seed", "edges"}
        assert all(len(e) == 3 for e in obj["edges"])
        assert obj["edges"] == sorted(obj["edges"])
