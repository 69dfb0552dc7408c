"""Exact solver for the uniform-marginal transportation problem.

Network simplex specialized to the bipartite transportation graph: the
basis is a spanning tree over row and column nodes, node potentials follow
from the tree, and each pivot pushes flow around the unique cycle closed
by the entering cell. Flows are kept as integers (each row ships n_y
units, each column receives n_x units) so marginals are exact and
degenerate pivots are unambiguous; the returned coupling is the integer
flow divided by n_x * n_y.

Entering cells follow Dantzig's rule (most negative reduced cost) with a
fallback to Bland's rule after a pivot budget, which guarantees
termination under the heavy degeneracy that uniform marginals produce.
"""

from __future__ import annotations

from math import fsum

import numpy as np


def solve_uniform_transport(costs: np.ndarray) -> tuple[float, np.ndarray]:
    """Minimize <costs, T> over couplings T with row sums 1/n_x, column sums 1/n_y.

    Returns (objective, coupling). The coupling is a basic optimal solution
    with at most n_x + n_y - 1 nonzero entries.
    """
    c = np.ascontiguousarray(costs, dtype=np.float64)
    if c.ndim != 2 or c.size == 0:
        raise ValueError(f"cost matrix must be non-empty 2-D, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix contains non-finite entries")
    n_x, n_y = c.shape
    total = n_x * n_y

    flow = np.zeros((n_x, n_y), dtype=np.int64)
    in_basis = np.zeros((n_x, n_y), dtype=bool)
    rows_adj: list[set[int]] = [set() for _ in range(n_x)]
    cols_adj: list[set[int]] = [set() for _ in range(n_y)]

    def add_edge(i: int, j: int) -> None:
        in_basis[i, j] = True
        rows_adj[i].add(j)
        cols_adj[j].add(i)

    def drop_edge(i: int, j: int) -> None:
        in_basis[i, j] = False
        rows_adj[i].discard(j)
        cols_adj[j].discard(i)

    # Northwest-corner start: n_x + n_y - 1 basic cells, zeros included.
    supply = [n_y] * n_x
    demand = [n_x] * n_y
    i = j = 0
    while True:
        q = min(supply[i], demand[j])
        flow[i, j] = q
        add_edge(i, j)
        supply[i] -= q
        demand[j] -= q
        if i == n_x - 1 and j == n_y - 1:
            break
        if supply[i] == 0 and i < n_x - 1:
            i += 1
        else:
            j += 1

    tol = 1e-12 * max(1.0, float(np.max(np.abs(c))))
    n_nodes = n_x + n_y
    max_dantzig = 50 * n_nodes + 1000
    max_pivots = 1_000_000

    u = np.empty(n_x)
    v = np.empty(n_y)
    parent = np.empty(n_nodes, dtype=np.int64)
    parent_cell: list[tuple[int, int] | None] = [None] * n_nodes
    depth = np.empty(n_nodes, dtype=np.int64)

    def refresh_tree() -> None:
        """Walk the basis tree from row 0: potentials, parents, depths."""
        seen = np.zeros(n_nodes, dtype=bool)
        seen[0] = True
        parent[0] = -1
        parent_cell[0] = None
        depth[0] = 0
        u[0] = 0.0
        stack = [0]
        while stack:
            node = stack.pop()
            if node < n_x:
                ri = node
                for cj in rows_adj[ri]:
                    cnode = n_x + cj
                    if not seen[cnode]:
                        seen[cnode] = True
                        parent[cnode] = node
                        parent_cell[cnode] = (ri, cj)
                        depth[cnode] = depth[node] + 1
                        v[cj] = c[ri, cj] - u[ri]
                        stack.append(cnode)
            else:
                cj = node - n_x
                for ri in cols_adj[cj]:
                    if not seen[ri]:
                        seen[ri] = True
                        parent[ri] = node
                        parent_cell[ri] = (ri, cj)
                        depth[ri] = depth[node] + 1
                        u[ri] = c[ri, cj] - v[cj]
                        stack.append(ri)
        if not seen.all():
            raise RuntimeError("basis lost connectivity (internal error)")

    def tree_path(a: int, b: int) -> list[tuple[int, int]]:
        """Basic cells along the unique tree path from node a to node b."""
        side_a: list[tuple[int, int]] = []
        side_b: list[tuple[int, int]] = []
        while depth[a] > depth[b]:
            side_a.append(parent_cell[a])
            a = parent[a]
        while depth[b] > depth[a]:
            side_b.append(parent_cell[b])
            b = parent[b]
        while a != b:
            side_a.append(parent_cell[a])
            a = parent[a]
            side_b.append(parent_cell[b])
            b = parent[b]
        return side_a + side_b[::-1]

    pivots = 0
    while True:
        refresh_tree()
        reduced = c - u[:, None] - v[None, :]
        search = np.where(in_basis, np.inf, reduced)
        if pivots < max_dantzig:
            flat = int(np.argmin(search))
            ei, ej = divmod(flat, n_y)
            if search[ei, ej] >= -tol:
                break
        else:
            candidates = np.argwhere(search < -tol)
            if candidates.size == 0:
                break
            ei, ej = (int(candidates[0][0]), int(candidates[0][1]))

        # Cycle: entering cell plus the tree path from its column back to its row.
        path = tree_path(ei, n_x + ej)
        cycle = [(ei, ej)] + path[::-1]
        minus = cycle[1::2]
        theta = min(int(flow[i_, j_]) for i_, j_ in minus)
        if pivots < max_dantzig:
            leaving = next(cell for cell in minus if flow[cell] == theta)
        else:
            # Bland mode: smallest cell index among the blocking arcs
            leaving = min(cell for cell in minus if flow[cell] == theta)
        for k, cell in enumerate(cycle):
            if k % 2 == 0:
                flow[cell] += theta
            else:
                flow[cell] -= theta
        drop_edge(*leaving)
        add_edge(ei, ej)

        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot budget exceeded (internal error)")

    coupling = flow.astype(np.float64) / float(total)
    bi, bj = np.nonzero(flow)
    objective = fsum(c[i_, j_] * coupling[i_, j_] for i_, j_ in zip(bi, bj))
    return objective, coupling
