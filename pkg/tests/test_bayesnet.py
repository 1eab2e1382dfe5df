import itertools
import math

import numpy as np
import pytest

from causalchron.bayesnet import (
    Cpt,
    Dag,
    DiscreteBayesNet,
    ZeroProbabilityEvidence,
    bic_score,
    d_separated,
    fit_cpts,
    local_bic,
    local_markov_statements,
    log_likelihood,
    network_from_json,
    network_to_json,
    query,
    sample,
    topological_levels,
)
from causalchron.dataset import EventMatrix

from conftest import random_network


def matrix(labels, rows):
    return EventMatrix(tuple(labels), np.array(rows, dtype=np.int8))


def brute_force_conditional(bn, target, evidence):
    """Pure-Python enumeration over all states; independent of the vectorized joint."""
    cpt_of = {c.node: c for c in bn.cpts}
    p_num = 0.0
    p_den = 0.0
    for state in itertools.product((0, 1), repeat=len(bn.dag.nodes)):
        assignment = dict(zip(bn.dag.nodes, state))
        if any(assignment[k] != v for k, v in evidence.items()):
            continue
        p = 1.0
        for node in bn.dag.nodes:
            cpt = cpt_of[node]
            idx = 0
            for parent in cpt.parents:
                idx = (idx << 1) | assignment[parent]
            p1 = cpt.p1[idx]
            p *= p1 if assignment[node] == 1 else 1.0 - p1
        p_den += p
        if assignment[target] == 1:
            p_num += p
    if p_den == 0.0:
        raise ZeroDivisionError
    return p_num / p_den


class TestDag:
    def test_rejects_cycle(self):
        with pytest.raises(ValueError, match="cycle"):
            Dag(("a", "b"), [("a", "b"), ("b", "a")])

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Dag(("a",), [("a", "a")])

    def test_rejects_duplicate_nodes(self):
        with pytest.raises(ValueError, match="duplicate"):
            Dag(("a", "a"), [])

    def test_topological_order_prefers_declared_order(self):
        g = Dag(("c", "a", "b"), [("a", "b")])
        assert g.topological_order() == ("c", "a", "b")

    def test_edge_list_round_trip(self):
        g = Dag(("a", "b", "c", "d"), [("a", "b"), ("b", "c")])
        back = Dag.from_edge_list(g.to_edge_list())
        assert set(back.nodes) == set(g.nodes)
        assert back.edges == g.edges
        assert back.isolated() == ("d",)

    def test_dot_contains_edges_and_ranks(self):
        g = Dag(("a", "b"), [("a", "b")])
        dot = g.to_dot(ranks={"a": 0, "b": 1})
        assert '"a" -> "b";' in dot
        assert "rank=same" in dot

    def test_v_structures(self):
        g = Dag(("a", "b", "c"), [("a", "c"), ("b", "c")])
        assert g.v_structures() == {(frozenset({"a", "b"}), "c")}
        shielded = Dag(("a", "b", "c"), [("a", "c"), ("b", "c"), ("a", "b")])
        assert shielded.v_structures() == frozenset()

    def test_markov_equivalence_of_chain_and_reversal(self):
        chain = Dag(("a", "b", "c"), [("a", "b"), ("b", "c")])
        reverse = Dag(("a", "b", "c"), [("c", "b"), ("b", "a")])
        collider = Dag(("a", "b", "c"), [("a", "b"), ("c", "b")])
        assert chain.markov_equivalent(reverse)
        assert not chain.markov_equivalent(collider)


class TestTopologicalLevels:
    def test_chain(self):
        g = Dag(("A", "B", "C"), [("A", "B"), ("B", "C")])
        assert topological_levels(g) == {"A": 0, "B": 1, "C": 2}

    def test_edgeless(self):
        g = Dag(("A", "B", "C"), [])
        assert topological_levels(g) == {"A": 0, "B": 0, "C": 0}

    def test_diamond_max_parent_rule(self):
        g = Dag(("A", "B", "C", "D"), [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")])
        assert topological_levels(g) == {"A": 0, "B": 1, "C": 1, "D": 2}

    def test_levels_respect_edges_on_random_dags(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            bn = random_network(rng, int(rng.integers(2, 8)))
            levels = topological_levels(bn.dag)
            for p, c in bn.dag.edges:
                assert levels[c] > levels[p]


class TestFitCpts:
    def test_single_node_ml(self):
        data = matrix(["x"], [[1], [1], [0], [1]])
        bn = fit_cpts(Dag(("x",), []), data, ess=0.0)
        assert bn.cpt("x").p1[0] == pytest.approx(0.75)

    def test_unseen_assignment_prior_mean(self):
        data = matrix(["p", "x"], [[1, 1], [1, 0]])
        bn = fit_cpts(Dag(("p", "x"), [("p", "x")]), data, ess=1.0)
        # p=0 never observed -> (0 + 0.5) / (0 + 1) = 0.5
        assert bn.cpt("x").p1[0] == pytest.approx(0.5)

    def test_hand_counts_with_parent(self):
        rows = [[1, 1]] * 3 + [[1, 0]] * 1 + [[0, 0]] * 4
        data = matrix(["p", "x"], rows)
        bn = fit_cpts(Dag(("p", "x"), [("p", "x")]), data, ess=0.0)
        assert bn.cpt("x").p1[1] == pytest.approx(0.75)
        assert bn.cpt("x").p1[0] == pytest.approx(0.0)

    def test_rejects_missing_cells(self):
        data = EventMatrix(("x",), np.array([[-1]], dtype=np.int8))
        with pytest.raises(ValueError, match="missing"):
            fit_cpts(Dag(("x",), []), data)

    def test_rejects_absent_node(self):
        data = matrix(["x"], [[1]])
        with pytest.raises(KeyError):
            fit_cpts(Dag(("x", "y"), []), data)


class TestLogLikelihood:
    def test_closed_form(self):
        bn = DiscreteBayesNet(Dag(("x",), []), (Cpt("x", (), np.array([0.5])),))
        data = matrix(["x"], [[1], [0], [1], [0]])
        assert log_likelihood(bn, data) == pytest.approx(4 * math.log(0.5), abs=1e-12)

    def test_perfect_model_scores_zero(self):
        bn = DiscreteBayesNet(Dag(("x",), []), (Cpt("x", (), np.array([1.0])),))
        data = matrix(["x"], [[1], [1]])
        assert log_likelihood(bn, data) == 0.0

    def test_floor_replaces_zero(self):
        bn = DiscreteBayesNet(Dag(("x",), []), (Cpt("x", (), np.array([1.0])),))
        data = matrix(["x"], [[0]])
        assert log_likelihood(bn, data) == pytest.approx(math.log(1e-9))


class TestBic:
    def test_single_node_closed_form(self):
        data = matrix(["x"], [[1], [1], [0], [0]])
        expected = 4 * math.log(0.5) - 0.5 * math.log(4)
        assert bic_score(Dag(("x",), []), data) == pytest.approx(expected, abs=1e-12)

    def test_useless_edge_hurts_in_expectation(self):
        rng = np.random.default_rng(21)
        deltas = []
        for _ in range(50):
            values = rng.integers(0, 2, size=(1000, 2)).astype(np.int8)
            data = EventMatrix(("a", "b"), values)
            empty = bic_score(Dag(("a", "b"), []), data)
            edge = bic_score(Dag(("a", "b"), [("a", "b")]), data)
            deltas.append(edge - empty)
        assert np.mean(deltas) < 0

    def test_chain_beats_empty_on_chain_data(self, chain_ab):
        data = sample(chain_ab, 5000, seed=3)
        chain = bic_score(chain_ab.dag, data)
        empty = bic_score(Dag(("a", "b"), []), data)
        assert chain > empty

    def test_decomposability(self):
        rng = np.random.default_rng(9)
        bn = random_network(rng, 5)
        data = sample(bn, 400, seed=2)
        total = bic_score(bn.dag, data)
        local_sum = sum(local_bic(data, n, bn.dag.parents(n)) for n in bn.dag.nodes)
        assert total == pytest.approx(local_sum, abs=1e-10)
        # single-edge move deltas match full rescoring
        g = bn.dag
        some_edge = sorted(g.edges)[0] if g.edges else None
        if some_edge:
            removed = g.with_edges(remove=[some_edge])
            full_delta = bic_score(removed, data) - total
            p, c = some_edge
            local_delta = local_bic(data, c, removed.parents(c)) - local_bic(data, c, g.parents(c))
            assert full_delta == pytest.approx(local_delta, abs=1e-10)


class TestQuery:
    def test_chain_marginal(self, chain_ab):
        assert query(chain_ab, "b") == pytest.approx(0.55, abs=1e-12)

    def test_target_in_evidence(self, chain_ab):
        assert query(chain_ab, "a", {"a": 1}) == 1.0
        assert query(chain_ab, "a", {"a": 0}) == 0.0

    def test_root_prior(self, chain_ab):
        assert query(chain_ab, "a") == pytest.approx(0.5)

    def test_zero_probability_evidence(self):
        bn = DiscreteBayesNet(
            Dag(("a", "b"), [("a", "b")]),
            (Cpt("a", (), np.array([1.0])), Cpt("b", ("a",), np.array([0.5, 0.5]))),
        )
        with pytest.raises(ZeroProbabilityEvidence):
            query(bn, "b", {"a": 0})

    def test_matches_brute_force(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            bn = random_network(rng, int(rng.integers(2, 10)))
            nodes = list(bn.dag.nodes)
            target = nodes[int(rng.integers(len(nodes)))]
            evidence = {}
            for n in nodes:
                if n != target and rng.random() < 0.4:
                    evidence[n] = int(rng.integers(0, 2))
            try:
                expected = brute_force_conditional(bn, target, evidence)
            except ZeroDivisionError:
                continue
            assert query(bn, target, evidence) == pytest.approx(expected, abs=1e-12)

    def test_elimination_handles_networks_beyond_enumeration_limit(self):
        # 24-node chain: enumeration would need 2^24 states, elimination is
        # linear; the oracle is the forward marginal recursion
        d = 24
        labels = tuple(f"v{i}" for i in range(d))
        dag = Dag(labels, [(labels[i], labels[i + 1]) for i in range(d - 1)])
        cpts = [Cpt(labels[0], (), np.array([0.3]))]
        cpts += [
            Cpt(labels[i + 1], (labels[i],), np.array([0.2, 0.9]))
            for i in range(d - 1)
        ]
        bn = DiscreteBayesNet(dag, tuple(cpts))

        p = 1.0  # P(v_k = 1 | v0 = 1) by forward recursion
        for _ in range(d - 1):
            p = 0.9 * p + 0.2 * (1 - p)
        assert query(bn, labels[-1], {labels[0]: 1}) == pytest.approx(p, abs=1e-12)

        marginal = 0.3
        for _ in range(d - 1):
            marginal = 0.9 * marginal + 0.2 * (1 - marginal)
        assert query(bn, labels[-1]) == pytest.approx(marginal, abs=1e-12)

    def test_joint_distribution_sums_to_one(self):
        rng = np.random.default_rng(55)
        for _ in range(10):
            bn = random_network(rng, int(rng.integers(2, 8)))
            assert bn.prob({}) == pytest.approx(1.0, abs=1e-12)

    def test_enumeration_agrees_with_elimination(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            bn = random_network(rng, int(rng.integers(2, 12)))
            nodes = list(bn.dag.nodes)
            target = nodes[int(rng.integers(len(nodes)))]
            evidence = {
                n: int(rng.integers(0, 2))
                for n in nodes
                if n != target and rng.random() < 0.3
            }
            try:
                a = query(bn, target, evidence, method="enumeration")
            except ZeroProbabilityEvidence:
                with pytest.raises(ZeroProbabilityEvidence):
                    query(bn, target, evidence, method="elimination")
                continue
            b = query(bn, target, evidence, method="elimination")
            assert a == pytest.approx(b, abs=1e-10)


class TestDSeparation:
    def test_chain(self):
        g = Dag(("A", "B", "C"), [("A", "B"), ("B", "C")])
        assert d_separated(g, "A", "C", {"B"})
        assert not d_separated(g, "A", "C", set())

    def test_collider(self):
        g = Dag(("A", "B", "C"), [("A", "C"), ("B", "C")])
        assert d_separated(g, "A", "B", set())
        assert not d_separated(g, "A", "B", {"C"})

    def test_collider_descendant_opens(self):
        g = Dag(("A", "B", "C", "D"), [("A", "C"), ("B", "C"), ("C", "D")])
        assert not d_separated(g, "A", "B", {"D"})

    def test_fork(self):
        g = Dag(("A", "B", "Z"), [("Z", "A"), ("Z", "B")])
        assert d_separated(g, "A", "B", {"Z"})
        assert not d_separated(g, "A", "B", set())

    def test_unknown_label(self):
        g = Dag(("A", "B"), [])
        with pytest.raises(KeyError):
            d_separated(g, "A", "X", set())

    def test_matches_networkx_oracle(self):
        nx = pytest.importorskip("networkx")
        rng = np.random.default_rng(23)
        for _ in range(200):
            bn = random_network(rng, int(rng.integers(3, 8)))
            g = bn.dag
            nxg = nx.DiGraph()
            nxg.add_nodes_from(g.nodes)
            nxg.add_edges_from(g.edges)
            nodes = list(g.nodes)
            x, y = rng.choice(nodes, size=2, replace=False)
            z = {n for n in nodes if n not in (x, y) and rng.random() < 0.4}
            assert d_separated(g, x, y, z) == nx.is_d_separator(nxg, {x}, {y}, z)

    def test_dsep_implies_exact_ci(self):
        # d-separation must imply conditional independence in every
        # parameterization; checked numerically on random CPTs
        rng = np.random.default_rng(4)
        checked = 0
        while checked < 20:
            bn = random_network(rng, 5)
            nodes = list(bn.dag.nodes)
            x, y = rng.choice(nodes, size=2, replace=False)
            z = {n for n in nodes if n not in (x, y) and rng.random() < 0.4}
            if not d_separated(bn.dag, x, y, z):
                continue
            checked += 1
            for z_vals in itertools.product((0, 1), repeat=len(z)):
                evidence = dict(zip(sorted(z), z_vals))
                try:
                    p_y = brute_force_conditional(bn, y, evidence)
                    p_y_given_x1 = brute_force_conditional(bn, y, {**evidence, x: 1})
                    p_y_given_x0 = brute_force_conditional(bn, y, {**evidence, x: 0})
                except ZeroDivisionError:
                    continue
                assert abs(p_y_given_x1 - p_y) < 1e-10
                assert abs(p_y_given_x0 - p_y) < 1e-10


class TestLocalMarkov:
    def test_chain_single_statement(self):
        g = Dag(("A", "B", "C"), [("A", "B"), ("B", "C")])
        stmts = local_markov_statements(g)
        assert len(stmts) == 1
        assert stmts[0].canonical() == (frozenset({"A", "C"}), frozenset({"B"}))

    def test_complete_dag_empty(self):
        g = Dag(("a", "b", "c"), [("a", "b"), ("a", "c"), ("b", "c")])
        assert local_markov_statements(g) == []

    def test_edgeless_marginal_pairs(self):
        g = Dag(("a", "b", "c"), [])
        stmts = local_markov_statements(g)
        assert len(stmts) == 3
        assert all(s.z == frozenset() for s in stmts)


class TestSample:
    def test_deterministic(self, chain_ab):
        a = sample(chain_ab, 50, seed=9)
        b = sample(chain_ab, 50, seed=9)
        assert np.array_equal(a.values, b.values)

    def test_degenerate_probability(self):
        bn = DiscreteBayesNet(Dag(("x",), []), (Cpt("x", (), np.array([1.0])),))
        assert sample(bn, 10, seed=0).values.tolist() == [[1]] * 10

    def test_chain_marginal_converges(self, chain_ab):
        data = sample(chain_ab, 100_000, seed=1)
        assert abs(float((data.column("b") == 1).mean()) - 0.55) < 0.01


class TestSerialization:
    def test_network_json_round_trip(self):
        rng = np.random.default_rng(8)
        bn = random_network(rng, 4)
        back = network_from_json(network_to_json(bn))
        assert back.dag.nodes == bn.dag.nodes
        assert back.dag.edges == bn.dag.edges
        for n in bn.dag.nodes:
            assert np.allclose(back.cpt(n).p1, bn.cpt(n).p1)
