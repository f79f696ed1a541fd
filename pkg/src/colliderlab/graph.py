"""Directed acyclic graphs and the blocking calculus used to audit adjustment sets.

A :class:`Dag` is immutable once built; all operations are pure functions, so
values can be shared freely across threads. Path enumeration is exhaustive
simple-path search, which is exponential in the worst case but fine for the
small graphs audited here (tens of nodes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from .errors import CycleError, DuplicateEdge, NodeNotOnPath, UnknownNode

Orientation = Literal["forward", "backward"]
FORWARD: Orientation = "forward"
BACKWARD: Orientation = "backward"

Role = Literal["collider", "chain", "fork", "endpoint"]


@dataclass(frozen=True)
class Path:
    """A simple path; edges may be traversed with or against their direction.

    ``orientations[i]`` says how the edge between ``nodes[i]`` and
    ``nodes[i+1]`` is traversed: ``forward`` means the dag edge is
    ``nodes[i] -> nodes[i+1]``, ``backward`` means it is ``nodes[i+1] -> nodes[i]``.
    """

    nodes: tuple[str, ...]
    orientations: tuple[Orientation, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least two nodes")
        if len(self.orientations) != len(self.nodes) - 1:
            raise ValueError("need one orientation per consecutive node pair")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path nodes must be distinct")

    def reversed(self) -> "Path":
        flipped = tuple(
            FORWARD if o == BACKWARD else BACKWARD for o in reversed(self.orientations)
        )
        return Path(tuple(reversed(self.nodes)), flipped)

    def __str__(self) -> str:
        parts = [self.nodes[0]]
        for node, orientation in zip(self.nodes[1:], self.orientations):
            parts.append(" -> " if orientation == FORWARD else " <- ")
            parts.append(node)
        return "".join(parts)


class Dag:
    """Validated directed acyclic graph over named variables.

    Construct through :func:`build_dag`, which checks node references,
    duplicate edges and acyclicity. Instances are immutable and hashable
    by identity; parents, children and descendants are precomputed.
    """

    __slots__ = (
        "nodes",
        "edges",
        "topological_order",
        "_parents",
        "_children",
        "_desc_or_self",
        "_path_cache",
    )

    def __init__(self, nodes: tuple[str, ...], edges: tuple[tuple[str, str], ...],
                 topological_order: tuple[str, ...]):
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "topological_order", topological_order)
        parents: dict[str, set[str]] = {v: set() for v in nodes}
        children: dict[str, set[str]] = {v: set() for v in nodes}
        for a, b in edges:
            parents[b].add(a)
            children[a].add(b)
        object.__setattr__(self, "_parents", {v: frozenset(s) for v, s in parents.items()})
        object.__setattr__(self, "_children", {v: frozenset(s) for v, s in children.items()})
        # descendants-or-self, computed in reverse topological order
        desc: dict[str, frozenset[str]] = {}
        for v in reversed(topological_order):
            acc: set[str] = {v}
            for c in children[v]:
                acc |= desc[c]
            desc[v] = frozenset(acc)
        object.__setattr__(self, "_desc_or_self", desc)
        object.__setattr__(self, "_path_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("Dag is immutable")

    def __repr__(self) -> str:
        return f"Dag(nodes={list(self.nodes)}, edges={[list(e) for e in self.edges]})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges))

    def has_node(self, v: str) -> bool:
        return v in self._parents

    def parents(self, v: str) -> frozenset[str]:
        self._require(v)
        return self._parents[v]

    def children(self, v: str) -> frozenset[str]:
        self._require(v)
        return self._children[v]

    def descendants(self, v: str) -> frozenset[str]:
        """Strict descendants of ``v`` (excludes ``v`` itself)."""
        self._require(v)
        return self._desc_or_self[v] - {v}

    def ancestors(self, v: str) -> frozenset[str]:
        self._require(v)
        return frozenset(u for u in self.nodes if v in self._desc_or_self[u]) - {v}

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges]}

    def _require(self, *names: str) -> None:
        for v in names:
            if v not in self._parents:
                raise UnknownNode(f"unknown node {v!r}")


def build_dag(nodes: Iterable[str], edges: Iterable[Sequence[str]]) -> Dag:
    """Validate ``nodes`` and ``edges`` and return an immutable :class:`Dag`.

    Raises:
        UnknownNode: an edge endpoint is not a declared node.
        DuplicateEdge: the same ordered pair appears twice.
        CycleError: the edges admit no topological order; the message
            names one offending cycle.
    """
    node_tuple = tuple(sorted(set(nodes)))
    node_set = set(node_tuple)
    seen: set[tuple[str, str]] = set()
    edge_list: list[tuple[str, str]] = []
    for edge in edges:
        a, b = edge
        if a not in node_set:
            raise UnknownNode(f"edge endpoint {a!r} is not a declared node")
        if b not in node_set:
            raise UnknownNode(f"edge endpoint {b!r} is not a declared node")
        if (a, b) in seen:
            raise DuplicateEdge(f"duplicate edge {a!r} -> {b!r}")
        if a == b:
            raise CycleError((a, a))
        seen.add((a, b))
        edge_list.append((a, b))
    edge_tuple = tuple(sorted(edge_list))
    order = _topological_order(node_tuple, edge_tuple)
    return Dag(node_tuple, edge_tuple, order)


def _topological_order(nodes: tuple[str, ...], edges: tuple[tuple[str, str], ...]) -> tuple[str, ...]:
    indegree = {v: 0 for v in nodes}
    children: dict[str, list[str]] = {v: [] for v in nodes}
    for a, b in edges:
        indegree[b] += 1
        children[a].append(b)
    ready = sorted(v for v in nodes if indegree[v] == 0)
    order: list[str] = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for c in children[v]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
        ready.sort()
    if len(order) < len(nodes):
        raise CycleError(_find_cycle(children, {v for v in nodes if indegree[v] > 0}))
    return tuple(order)


def _find_cycle(children: dict[str, list[str]], remaining: set[str]) -> tuple[str, ...]:
    # every remaining node lies on or leads into a cycle; walk until a repeat
    start = min(remaining)
    trail = [start]
    positions = {start: 0}
    v = start
    while True:
        v = min(c for c in children[v] if c in remaining)
        if v in positions:
            return tuple(trail[positions[v]:] + [v])
        positions[v] = len(trail)
        trail.append(v)


def enumerate_paths(dag: Dag, x: str, y: str) -> list[Path]:
    """All simple paths between ``x`` and ``y``, ignoring edge direction.

    Deterministic: results are ordered lexicographically by node sequence.
    """
    dag._require(x, y)
    if x == y:
        raise ValueError("path endpoints must differ")
    cached = dag._path_cache.get((x, y))
    if cached is not None:
        return list(cached)
    paths: list[Path] = []
    trail: list[str] = [x]
    orients: list[Orientation] = []
    visited = {x}

    def extend(v: str) -> None:
        neighbours = sorted(dag._parents[v] | dag._children[v])
        for w in neighbours:
            if w in visited:
                continue
            orients.append(FORWARD if w in dag._children[v] else BACKWARD)
            if w == y:
                paths.append(Path(tuple(trail) + (y,), tuple(orients)))
            else:
                trail.append(w)
                visited.add(w)
                extend(w)
                visited.discard(w)
                trail.pop()
            orients.pop()

    extend(x)
    dag._path_cache[(x, y)] = tuple(paths)
    return paths


def classify_node_on_path(path: Path, v: str) -> Role:
    """Role of ``v`` on ``path``: collider, chain, fork, or endpoint.

    A collider has both adjacent edges pointing into it
    (``a -> v <- b``); a fork points out both ways; a chain passes through.
    """
    if v == path.nodes[0] or v == path.nodes[-1]:
        return "endpoint"
    try:
        i = path.nodes.index(v)
    except ValueError:
        raise NodeNotOnPath(f"{v!r} is not on path {path}") from None
    into_left = path.orientations[i - 1] == FORWARD   # nodes[i-1] -> v
    into_right = path.orientations[i] == BACKWARD     # v <- nodes[i+1]
    if into_left and into_right:
        return "collider"
    if not into_left and not into_right:
        return "fork"
    return "chain"


def _blocked(dag: Dag, path: Path, cond: frozenset[str]) -> bool:
    # validation-free kernel shared by is_path_blocked and d_separated
    nodes = path.nodes
    orients = path.orientations
    desc = dag._desc_or_self
    for i in range(1, len(nodes) - 1):
        v = nodes[i]
        if orients[i - 1] == FORWARD and orients[i] == BACKWARD:
            # collider: blocks unless v or a descendant is conditioned on
            if cond.isdisjoint(desc[v]):
                return True
        elif v in cond:
            return True
    return False


def is_path_blocked(dag: Dag, path: Path, conditioning: Iterable[str]) -> bool:
    """Decide whether ``conditioning`` blocks ``path``.

    Blocked iff some non-collider on the path is conditioned on, or some
    collider has neither itself nor any descendant conditioned on.
    """
    cond = conditioning if isinstance(conditioning, frozenset) else frozenset(conditioning)
    for v in cond:
        dag._require(v)
    if path.nodes[0] in cond or path.nodes[-1] in cond:
        raise ValueError("conditioning set must exclude the path endpoints")
    return _blocked(dag, path, cond)


def d_separated(dag: Dag, x: str, y: str, conditioning: Iterable[str]) -> bool:
    """True iff every path between ``x`` and ``y`` is blocked by ``conditioning``."""
    cond = conditioning if isinstance(conditioning, frozenset) else frozenset(conditioning)
    dag._require(x, y)
    for v in cond:
        dag._require(v)
    if x == y:
        raise ValueError("d-separation endpoints must differ")
    if x in cond or y in cond:
        raise ValueError("conditioning set must exclude the endpoints")
    for path in enumerate_paths(dag, x, y):
        if not _blocked(dag, path, cond):
            return False
    return True


@dataclass(frozen=True)
class AdjustmentVerdict:
    """Outcome of auditing a proposed adjustment set.

    ``valid`` is true iff all three diagnostic lists are empty: no back-door
    path stays open, no previously blocked path is opened by conditioning,
    and no member of the set descends from the exposure.
    """

    valid: bool
    open_backdoor_paths: tuple[Path, ...]
    opened_collider_paths: tuple[Path, ...]
    descendants_of_exposure_in_set: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "open_backdoor_paths": [str(p) for p in self.open_backdoor_paths],
            "opened_collider_paths": [str(p) for p in self.opened_collider_paths],
            "descendants_of_exposure_in_set": list(self.descendants_of_exposure_in_set),
        }


def check_adjustment_set(dag: Dag, exposure: str, outcome: str,
                         adjust: Iterable[str]) -> AdjustmentVerdict:
    """Audit ``adjust`` against the back-door criterion for exposure -> outcome.

    The verdict lists every back-door path left open under ``adjust``, every
    path that was blocked unconditionally but is opened by ``adjust``
    (collider opening), and every member of ``adjust`` that is a descendant
    of the exposure.
    """
    adjust_set = frozenset(adjust)
    dag._require(exposure, outcome, *adjust_set)
    if exposure == outcome:
        raise ValueError("exposure and outcome must differ")
    if exposure in adjust_set or outcome in adjust_set:
        raise ValueError("adjustment set must exclude exposure and outcome")

    paths = enumerate_paths(dag, exposure, outcome)
    open_backdoor = tuple(
        p for p in paths
        if p.orientations[0] == BACKWARD and not is_path_blocked(dag, p, adjust_set)
    )
    opened = tuple(
        p for p in paths
        if is_path_blocked(dag, p, ()) and not is_path_blocked(dag, p, adjust_set)
    )
    exposure_desc = dag.descendants(exposure)
    in_set_desc = tuple(sorted(adjust_set & exposure_desc))
    valid = not open_backdoor and not opened and not in_set_desc
    return AdjustmentVerdict(valid, open_backdoor, opened, in_set_desc)
