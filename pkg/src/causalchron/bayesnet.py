"""Directed acyclic graphs and discrete Bayesian networks over binary events.

Provides the graph type shared by every learner, conditional probability
tables, Bayesian/maximum-likelihood parameter fitting, exact inference
(joint enumeration up to 20 nodes, variable elimination above), BIC and
log-likelihood scoring, d-separation, local Markov statements, ancestral
sampling, and the edge-list / DOT / JSON exchange formats.

Everything here is deterministic: nodes iterate in declared order, edges
lexicographically, and sampling takes an explicit seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dataset import EventMatrix

__all__ = [
    "Dag",
    "Cpt",
    "DiscreteBayesNet",
    "CiStatement",
    "ZeroProbabilityEvidence",
    "topological_levels",
    "fit_cpts",
    "log_likelihood",
    "bic_score",
    "query",
    "d_separated",
    "local_markov_statements",
    "sample",
]

#: node-count threshold below which exact inference enumerates the full joint
ENUMERATION_LIMIT = 20

#: probability floor replacing exact zeros in log-likelihood sums
DEFAULT_LL_FLOOR = 1e-9


class ZeroProbabilityEvidence(ValueError):
    """The conditioning event has probability zero under the model."""


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph with an explicit, meaningful node order."""

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __init__(self, nodes: Sequence[str], edges: Iterable[tuple[str, str]] = ()):
        nodes = tuple(nodes)
        edges = frozenset((str(p), str(c)) for p, c in edges)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node labels")
        if any(not n for n in nodes):
            raise ValueError("node labels must be non-empty")
        node_set = set(nodes)
        for p, c in edges:
            if p == c:
                raise ValueError(f"self-loop at {p!r}")
            if p not in node_set or c not in node_set:
                raise ValueError(f"edge ({p!r}, {c!r}) references unknown node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        self.topological_order()  # raises on cycles

    @cached_property
    def _index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def _parents(self) -> dict[str, tuple[str, ...]]:
        by_child: dict[str, list[str]] = {n: [] for n in self.nodes}
        for p, c in self.sorted_edges():
            by_child[c].append(p)
        return {n: tuple(sorted(ps, key=self._index.__getitem__)) for n, ps in by_child.items()}

    @cached_property
    def _children(self) -> dict[str, tuple[str, ...]]:
        by_parent: dict[str, list[str]] = {n: [] for n in self.nodes}
        for p, c in self.sorted_edges():
            by_parent[p].append(c)
        return {n: tuple(sorted(cs, key=self._index.__getitem__)) for n, cs in by_parent.items()}

    def parents(self, node: str) -> tuple[str, ...]:
        return self._parents[node]

    def children(self, node: str) -> tuple[str, ...]:
        return self._children[node]

    def roots(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if not self._parents[n])

    def isolated(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if not self._parents[n] and not self._children[n])

    def sorted_edges(self) -> list[tuple[str, str]]:
        idx = {n: i for i, n in enumerate(self.nodes)}
        return sorted(self.edges, key=lambda e: (idx[e[0]], idx[e[1]]))

    def topological_order(self) -> tuple[str, ...]:
        """Kahn's algorithm; ready nodes are taken in declared order."""
        indeg = {n: 0 for n in self.nodes}
        for _, c in self.edges:
            indeg[c] += 1
        order: list[str] = []
        ready = [n for n in self.nodes if indeg[n] == 0]
        while ready:
            node = ready.pop(0)
            order.append(node)
            newly = []
            for child in self._children_raw(node):
                indeg[child] -= 1
                if indeg[child] == 0:
                    newly.append(child)
            if newly:
                pos = {n: i for i, n in enumerate(self.nodes)}
                ready = sorted(ready + newly, key=pos.__getitem__)
        if len(order) != len(self.nodes):
            raise ValueError("graph contains a directed cycle")
        return tuple(order)

    def _children_raw(self, node: str) -> list[str]:
        return [c for p, c in self.edges if p == node]

    def descendants(self, node: str) -> frozenset[str]:
        seen: set[str] = set()
        stack = list(self._children[node])
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(self._children[n])
        return frozenset(seen)

    def ancestors(self, node: str) -> frozenset[str]:
        seen: set[str] = set()
        stack = list(self._parents[node])
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(self._parents[n])
        return frozenset(seen)

    def has_path(self, src: str, dst: str) -> bool:
        return dst in self.descendants(src)

    def with_edges(self, add: Iterable[tuple[str, str]] = (), remove: Iterable[tuple[str, str]] = ()) -> "Dag":
        return Dag(self.nodes, (self.edges - frozenset(remove)) | frozenset(add))

    def relabel(self, mapping: Mapping[str, str]) -> "Dag":
        """Rename nodes; node order follows the original positions."""
        return Dag(
            tuple(mapping[n] for n in self.nodes),
            ((mapping[p], mapping[c]) for p, c in self.edges),
        )

    def skeleton(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(e) for e in self.edges)

    def v_structures(self) -> frozenset[tuple[frozenset[str], str]]:
        """Colliders a -> c <- b with a, b non-adjacent, as ({a, b}, c) pairs."""
        skel = self.skeleton()
        out = set()
        for c in self.nodes:
            ps = self._parents[c]
            for i in range(len(ps)):
                for j in range(i + 1, len(ps)):
                    if frozenset((ps[i], ps[j])) not in skel:
                        out.add((frozenset((ps[i], ps[j])), c))
        return frozenset(out)

    def markov_equivalent(self, other: "Dag") -> bool:
        return (
            set(self.nodes) == set(other.nodes)
            and self.skeleton() == other.skeleton()
            and self.v_structures() == other.v_structures()
        )

    # -- exchange formats ---------------------------------------------------

    def to_edge_list(self) -> str:
        """Edge-list text: isolated-nodes header line, then one edge per line."""
        lines = ["# isolated: " + ",".join(self.isolated())]
        lines += [f"{p}\t{c}" for p, c in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Dag":
        nodes: list[str] = []
        edges: list[tuple[str, str]] = []
        seen: set[str] = set()

        def _add(label: str) -> None:
            if label not in seen:
                seen.add(label)
                nodes.append(label)

        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                _, _, payload = line.partition(":")
                for label in payload.split(","):
                    label = label.strip()
                    if label:
                        _add(label)
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"malformed edge line: {raw!r}")
            p, c = parts[0].strip(), parts[1].strip()
            _add(p)
            _add(c)
            edges.append((p, c))
        return cls(tuple(nodes), edges)

    def to_dot(self, name: str = "g", ranks: Mapping[str, int] | None = None) -> str:
        lines = [f"digraph {json.dumps(name)} {{"]
        for n in self.nodes:
            lines.append(f"  {json.dumps(n)};")
        for p, c in self.sorted_edges():
            lines.append(f"  {json.dumps(p)} -> {json.dumps(c)};")
        if ranks is not None:
            for level in sorted(set(ranks.values())):
                members = " ".join(json.dumps(n) for n in self.nodes if ranks.get(n) == level)
                lines.append(f"  {{ rank=same; {members} }}")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class Cpt:
    """P(node=1) for every parent assignment.

    ``p1`` is indexed in binary counting order of the parent list: the
    first parent is the most significant bit, so for parents (a, b) the
    entries correspond to (a=0,b=0), (a=0,b=1), (a=1,b=0), (a=1,b=1).
    """

    node: str
    parents: tuple[str, ...]
    p1: np.ndarray

    def __post_init__(self) -> None:
        p1 = np.asarray(self.p1, dtype=np.float64)
        if p1.shape != (2 ** len(self.parents),):
            raise ValueError(f"CPT for {self.node!r} must have 2^|parents| entries")
        if ((p1 < 0) | (p1 > 1)).any():
            raise ValueError(f"CPT for {self.node!r} has probabilities outside [0, 1]")
        p1 = p1.copy()
        p1.flags.writeable = False
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "p1", p1)


def _assignment_index(values: np.ndarray, cols: Sequence[int]) -> np.ndarray:
    """Bit-pack columns into stratum indices (first column = high bit)."""
    idx = np.zeros(values.shape[0], dtype=np.int64)
    for j in cols:
        idx = (idx << 1) | values[:, j].astype(np.int64)
    return idx


@dataclass(frozen=True, eq=False)
class DiscreteBayesNet:
    """A Dag plus one Cpt per node."""

    dag: Dag
    cpts: tuple[Cpt, ...]

    def __post_init__(self) -> None:
        by_node = {c.node: c for c in self.cpts}
        if set(by_node) != set(self.dag.nodes) or len(by_node) != len(self.cpts):
            raise ValueError("need exactly one CPT per node")
        for n in self.dag.nodes:
            if by_node[n].parents != self.dag.parents(n):
                raise ValueError(f"CPT parent set for {n!r} disagrees with the graph")
        object.__setattr__(self, "cpts", tuple(by_node[n] for n in self.dag.nodes))

    def cpt(self, node: str) -> Cpt:
        return self.cpts[self.dag._index[node]]

    @cached_property
    def _joint(self) -> np.ndarray:
        """Full joint table for networks up to ENUMERATION_LIMIT nodes.

        Entry s is the probability of the state whose bit i (counting the
        first node as the highest bit) gives node i's value.
        """
        d = len(self.dag.nodes)
        if d > ENUMERATION_LIMIT:
            raise ValueError("network too large for joint enumeration")
        states = np.arange(1 << d, dtype=np.int64)
        shift = {n: d - 1 - i for i, n in enumerate(self.dag.nodes)}
        joint = np.ones(1 << d, dtype=np.float64)
        for cpt in self.cpts:
            assign = np.zeros(1 << d, dtype=np.int64)
            for p in cpt.parents:
                assign = (assign << 1) | ((states >> shift[p]) & 1)
            p1 = cpt.p1[assign]
            value = (states >> shift[cpt.node]) & 1
            joint *= np.where(value == 1, p1, 1.0 - p1)
        return joint

    def _state_mask(self, assignment: Mapping[str, int]) -> np.ndarray:
        d = len(self.dag.nodes)
        states = np.arange(1 << d, dtype=np.int64)
        mask = np.ones(1 << d, dtype=bool)
        for node, value in assignment.items():
            shift = d - 1 - self.dag._index[node]
            mask &= ((states >> shift) & 1) == int(value)
        return mask

    def prob(self, assignment: Mapping[str, int]) -> float:
        """Exact probability of a (partial) assignment, by enumeration."""
        return float(self._joint[self._state_mask(assignment)].sum())


@dataclass(frozen=True)
class CiStatement:
    """Conditional independence claim ``x is independent of y given z``."""

    x: str
    y: str
    z: frozenset[str]

    def __post_init__(self) -> None:
        if self.x == self.y:
            raise ValueError("x and y must differ")
        if self.x in self.z or self.y in self.z:
            raise ValueError("x and y cannot appear in the conditioning set")
        object.__setattr__(self, "z", frozenset(self.z))

    def canonical(self) -> tuple[frozenset[str], frozenset[str]]:
        return frozenset((self.x, self.y)), self.z

    def relabel(self, mapping: Mapping[str, str]) -> "CiStatement":
        return CiStatement(mapping[self.x], mapping[self.y], frozenset(mapping[v] for v in self.z))


# ---------------------------------------------------------------------------
# graph queries
# ---------------------------------------------------------------------------


def topological_levels(g: Dag) -> dict[str, int]:
    """Level 0 for roots, otherwise 1 + max level over parents."""
    levels: dict[str, int] = {}
    for n in g.topological_order():
        ps = g.parents(n)
        levels[n] = 0 if not ps else 1 + max(levels[p] for p in ps)
    return levels


def d_separated(g: Dag, x: str, y: str, z: Iterable[str]) -> bool:
    """Whether every path between x and y is blocked by z (reachability form)."""
    z = frozenset(z)
    for label in (x, y, *z):
        if label not in g._index:
            raise KeyError(f"unknown node label: {label!r}")
    if x == y:
        raise ValueError("x and y must differ")
    if x in z or y in z:
        raise ValueError("x and y cannot be conditioned on")
    # nodes having a descendant in z (or being in z): colliders there are open
    opens = set(z)
    for v in z:
        opens |= g.ancestors(v)
    UP, DOWN = 0, 1
    visited: set[tuple[str, int]] = set()
    stack: list[tuple[str, int]] = [(x, UP)]
    while stack:
        node, direction = stack.pop()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node == y:
            return False
        if direction == UP and node not in z:
            stack.extend((p, UP) for p in g.parents(node))
            stack.extend((c, DOWN) for c in g.children(node))
        elif direction == DOWN:
            if node not in z:
                stack.extend((c, DOWN) for c in g.children(node))
            if node in opens:
                stack.extend((p, UP) for p in g.parents(node))
    return True


def local_markov_statements(g: Dag) -> list[CiStatement]:
    """Pairwise form of the local Markov condition.

    One statement per (node, non-descendant non-parent) pair, deduplicated
    across symmetric repeats; nodes iterate in declared order.
    """
    seen: set[tuple[frozenset[str], frozenset[str]]] = set()
    out: list[CiStatement] = []
    for v in g.nodes:
        nd = set(g.nodes) - g.descendants(v) - {v}
        parents = set(g.parents(v))
        for u in g.nodes:
            if u not in nd or u in parents or u == v:
                continue
            stmt = CiStatement(v, u, frozenset(parents))
            key = stmt.canonical()
            if key not in seen:
                seen.add(key)
                out.append(stmt)
    return out


# ---------------------------------------------------------------------------
# parameter fitting and scoring
# ---------------------------------------------------------------------------


def _require_complete(data: EventMatrix) -> None:
    if not data.is_complete:
        raise ValueError("data contains missing cells")


def _counts(data: EventMatrix, node: str, parents: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    """(n1, n) per parent assignment, in binary counting order."""
    node_col = data.column_index(node)
    parent_cols = [data.column_index(p) for p in parents]
    k = 1 << len(parent_cols)
    idx = _assignment_index(data.values, parent_cols)
    n = np.bincount(idx, minlength=k).astype(np.float64)
    n1 = np.bincount(idx, weights=(data.values[:, node_col] == 1), minlength=k)
    return n1, n


def fit_cpts(g: Dag, data: EventMatrix, ess: float = 1.0) -> DiscreteBayesNet:
    """Bayesian CPT estimation with a symmetric prior of strength ``ess``.

    P(node=1 | assignment) = (count1 + ess/2) / (count + ess).  With
    ess=0 this is the maximum-likelihood estimate; parent assignments
    never observed then fall back to 0.5 (the limit of the prior mean).
    """
    _require_complete(data)
    if ess < 0:
        raise ValueError("ess must be non-negative")
    missing_nodes = set(g.nodes) - set(data.columns)
    if missing_nodes:
        raise KeyError(f"nodes absent from data: {sorted(missing_nodes)}")
    cpts = []
    for node in g.nodes:
        n1, n = _counts(data, node, g.parents(node))
        denom = n + ess
        with np.errstate(invalid="ignore", divide="ignore"):
            p1 = (n1 + ess / 2.0) / denom
        p1 = np.where(denom > 0, p1, 0.5)
        cpts.append(Cpt(node, g.parents(node), p1))
    return DiscreteBayesNet(g, tuple(cpts))


def log_likelihood(bn: DiscreteBayesNet, data: EventMatrix, floor: float = DEFAULT_LL_FLOOR) -> float:
    """Sum over rows and nodes of ln P(value | parent values).

    Exact zeros are replaced by ``floor`` so the result is finite even for
    maximum-likelihood tables with empty cells.
    """
    _require_complete(data)
    total = 0.0
    for cpt in bn.cpts:
        node_col = data.column_index(cpt.node)
        parent_cols = [data.column_index(p) for p in cpt.parents]
        idx = _assignment_index(data.values, parent_cols)
        p1 = cpt.p1[idx]
        p = np.where(data.values[:, node_col] == 1, p1, 1.0 - p1)
        total += float(np.log(np.maximum(p, floor)).sum())
    return total


def local_bic(data: EventMatrix, node: str, parents: Sequence[str]) -> float:
    """Node-wise BIC term: ML log-likelihood minus (2^|parents| / 2) ln N."""
    n1, n = _counts(data, node, parents)
    n0 = n - n1
    ll = 0.0
    pos = n > 0
    for cnt in (n1, n0):
        nz = pos & (cnt > 0)
        ll += float((cnt[nz] * np.log(cnt[nz] / n[nz])).sum())
    penalty = 0.5 * (1 << len(parents)) * np.log(data.n_rows)
    return ll - penalty


def bic_score(g: Dag, data: EventMatrix) -> float:
    """Decomposable BIC with maximum-likelihood tables; higher is better.

    The free-parameter count is 2^|parents| per binary node, so scores are
    typically negative, matching the usual bar-chart convention.
    """
    _require_complete(data)
    return sum(local_bic(data, node, g.parents(node)) for node in g.nodes)


# ---------------------------------------------------------------------------
# exact inference
# ---------------------------------------------------------------------------


def _query_enumeration(bn: DiscreteBayesNet, target: str, evidence: Mapping[str, int]) -> float:
    if target in evidence:
        return float(evidence[target])
    p_evidence = bn.prob(evidence) if evidence else 1.0
    if p_evidence <= 0.0:
        raise ZeroProbabilityEvidence(f"evidence {dict(evidence)!r} has probability 0")
    p_joint = bn.prob({**evidence, target: 1})
    return p_joint / p_evidence


@dataclass
class _Factor:
    variables: tuple[str, ...]
    table: np.ndarray  # shape (2,) * len(variables)

    def restrict(self, node: str, value: int) -> "_Factor":
        axis = self.variables.index(node)
        table = np.take(self.table, value, axis=axis)
        variables = self.variables[:axis] + self.variables[axis + 1 :]
        return _Factor(variables, table)

    def multiply(self, other: "_Factor") -> "_Factor":
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        a = self.table.reshape(self.table.shape + (1,) * (len(variables) - len(self.variables)))
        perm = [other.variables.index(v) if v in other.variables else None for v in variables]
        b_shape = tuple(2 if p is not None else 1 for p in perm)
        order = [p for p in perm if p is not None]
        b = np.transpose(other.table, axes=order).reshape(b_shape)
        return _Factor(variables, a * b)

    def marginalize(self, node: str) -> "_Factor":
        axis = self.variables.index(node)
        return _Factor(
            self.variables[:axis] + self.variables[axis + 1 :],
            self.table.sum(axis=axis),
        )


def _cpt_factor(cpt: Cpt) -> _Factor:
    k = len(cpt.parents)
    table = np.empty((2,) * (k + 1), dtype=np.float64)
    p1 = cpt.p1.reshape((2,) * k) if k else cpt.p1[0]
    variables = cpt.parents + (cpt.node,)
    if k:
        table[..., 1] = p1
        table[..., 0] = 1.0 - p1
    else:
        table[1] = p1
        table[0] = 1.0 - p1
    return _Factor(variables, table)


def _query_elimination(bn: DiscreteBayesNet, target: str, evidence: Mapping[str, int]) -> float:
    if target in evidence:
        return float(evidence[target])
    factors = []
    for cpt in bn.cpts:
        f = _cpt_factor(cpt)
        for node, value in evidence.items():
            if node in f.variables:
                f = f.restrict(node, int(value))
        factors.append(f)
    to_eliminate = [n for n in bn.dag.nodes if n != target and n not in evidence]

    # min-fill ordering over the factor scopes
    def fill_cost(node: str, scopes: list[frozenset[str]]) -> int:
        joined: set[str] = set()
        for s in scopes:
            if node in s:
                joined |= s
        joined.discard(node)
        return len(joined)

    remaining = list(to_eliminate)
    while remaining:
        scopes = [frozenset(f.variables) for f in factors]
        node = min(remaining, key=lambda n: (fill_cost(n, scopes), bn.dag._index[n]))
        remaining.remove(node)
        involved = [f for f in factors if node in f.variables]
        others = [f for f in factors if node not in f.variables]
        if involved:
            prod = involved[0]
            for f in involved[1:]:
                prod = prod.multiply(f)
            factors = others + [prod.marginalize(node)]
        else:
            factors = others
    result = _Factor((), np.array(1.0))
    for f in factors:
        result = result.multiply(f)
    table = result.table
    if result.variables == (target,):
        p0, p1 = float(table[0]), float(table[1])
    elif result.variables == ():
        raise ZeroProbabilityEvidence("target eliminated; inconsistent factor state")
    else:  # pragma: no cover - defensive
        raise RuntimeError(f"unexpected residual scope {result.variables}")
    norm = p0 + p1
    if norm <= 0.0:
        raise ZeroProbabilityEvidence(f"evidence {dict(evidence)!r} has probability 0")
    return p1 / norm


def query(
    bn: DiscreteBayesNet,
    target: str,
    evidence: Mapping[str, int] | None = None,
    method: str | None = None,
) -> float:
    """Exact P(target=1 | evidence).

    Dispatches to full joint enumeration for small networks and variable
    elimination (min-fill order) above ENUMERATION_LIMIT nodes; ``method``
    forces one backend ("enumeration" or "elimination").
    """
    evidence = dict(evidence or {})
    for label in (target, *evidence):
        if label not in bn.dag._index:
            raise KeyError(f"unknown node label: {label!r}")
    if method is None:
        method = "enumeration" if len(bn.dag.nodes) <= ENUMERATION_LIMIT else "elimination"
    if method == "enumeration":
        return _query_enumeration(bn, target, evidence)
    if method == "elimination":
        return _query_elimination(bn, target, evidence)
    raise ValueError(f"unknown inference method {method!r}")


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample(bn: DiscreteBayesNet, n: int, seed: int) -> EventMatrix:
    """Ancestral sampling in topological order; deterministic for a seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    columns = bn.dag.nodes
    values = np.zeros((n, len(columns)), dtype=np.int8)
    col_of = {c: i for i, c in enumerate(columns)}
    for node in bn.dag.topological_order():
        cpt = bn.cpt(node)
        if cpt.parents:
            idx = _assignment_index(values, [col_of[p] for p in cpt.parents])
            p1 = cpt.p1[idx]
        else:
            p1 = np.full(n, cpt.p1[0])
        values[:, col_of[node]] = (rng.random(n) < p1).astype(np.int8)
    return EventMatrix(columns, values, provenance=f"sampled(seed={seed})")


# ---------------------------------------------------------------------------
# network serialization
# ---------------------------------------------------------------------------


def network_to_json(bn: DiscreteBayesNet) -> str:
    doc = {
        "nodes": list(bn.dag.nodes),
        "edges": [list(e) for e in bn.dag.sorted_edges()],
        "cpts": [
            {
                "node": cpt.node,
                "parents": list(cpt.parents),
                "p1_by_assignment": [float(p) for p in cpt.p1],
            }
            for cpt in bn.cpts
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def network_from_json(text: str) -> DiscreteBayesNet:
    doc = json.loads(text)
    dag = Dag(tuple(doc["nodes"]), [tuple(e) for e in doc["edges"]])
    cpts = tuple(
        Cpt(entry["node"], tuple(entry["parents"]), np.asarray(entry["p1_by_assignment"]))
        for entry in doc["cpts"]
    )
    return DiscreteBayesNet(dag, cpts)


def write_dag(g: Dag, path: str | Path) -> None:
    Path(path).write_text(g.to_edge_list(), encoding="utf-8")


def read_dag(path: str | Path) -> Dag:
    return Dag.from_edge_list(Path(path).read_text(encoding="utf-8"))
