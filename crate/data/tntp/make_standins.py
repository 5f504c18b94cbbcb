"""Generate road-like TNTP networks with fixed node and link counts.

Points are scattered in the unit square; the network is the Euclidean minimum
spanning tree plus randomly drawn remaining Delaunay edges, every edge in
both directions. A layout is accepted when the max-out-degree vertex s and the
max-in-degree vertex z (rules used by the synthesizer) are at least three hops
apart and peeling hop-shortest s-z paths yields at least `min_paths` of them,
none longer than `max_arcs` arcs.

    python3 make_standins.py
"""

from collections import deque

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree, shortest_path
from scipy.sparse import coo_matrix
from scipy.spatial import Delaunay

NETWORKS = [
    ("EMA_net.tntp", "EMA", 74, 258, 5, 7),
    ("Anaheim_net.tntp", "Anaheim", 416, 914, 4, 15),
]


def layout(nodes, links, seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((nodes, 2))
    tri = Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        for i in range(3):
            a, b = sorted((int(simplex[i]), int(simplex[(i + 1) % 3])))
            edges.add((a, b))
    edges = sorted(edges)
    rows = [a for a, _ in edges]
    cols = [b for _, b in edges]
    weights = [np.linalg.norm(pts[a] - pts[b]) for a, b in edges]
    mst = minimum_spanning_tree(coo_matrix((weights, (rows, cols)), shape=(nodes, nodes))).tocoo()
    chosen = {tuple(sorted((int(a), int(b)))) for a, b in zip(mst.row, mst.col)}
    rest = [e for e in edges if e not in chosen]
    for i in rng.permutation(len(rest)):
        if len(chosen) == links // 2:
            break
        chosen.add(rest[i])
    assert len(chosen) == links // 2
    return sorted(chosen)


def peel(nodes, out, s, z):
    """Arc counts of hop-shortest s-z paths removed one after another."""
    alive = [True] * nodes
    counts = []
    while True:
        parent = {s: s}
        queue = deque([s])
        while queue and z not in parent:
            u = queue.popleft()
            for w in out[u]:
                if alive[w] and w not in parent:
                    parent[w] = u
                    queue.append(w)
        if z not in parent:
            return counts
        path = [z]
        while path[-1] != s:
            path.append(parent[path[-1]])
        for v in path[1:-1]:
            alive[v] = False
        counts.append(len(path) - 1)
        if len(path) == 2:
            return counts


def endpoints_ok(nodes, edges, min_paths, max_arcs):
    deg = [0] * nodes
    out = [[] for _ in range(nodes)]
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
        out[a].append(b)
        out[b].append(a)
    for o in out:
        o.sort()
    s = max(range(nodes), key=lambda v: (deg[v], -v))
    z = max((v for v in range(nodes) if v != s), key=lambda v: (deg[v], -v))
    rows = [a for a, _ in edges] + [b for _, b in edges]
    cols = [b for _, b in edges] + [a for a, _ in edges]
    adj = coo_matrix(([1] * len(rows), (rows, cols)), shape=(nodes, nodes))
    hops = shortest_path(adj, unweighted=True, indices=[s])[0][z]
    counts = peel(nodes, out, s, z)
    return hops >= 3 and len(counts) >= min_paths and max(counts) <= max_arcs, counts


def write(path, name, nodes, edges):
    links = 2 * len(edges)
    with open(path, "w") as f:
        f.write(f"<NUMBER OF ZONES> {nodes}\n")
        f.write(f"<NUMBER OF NODES> {nodes}\n")
        f.write("<FIRST THRU NODE> 1\n")
        f.write(f"<NUMBER OF LINKS> {links}\n")
        f.write(f"<ORIGINAL HEADER>~ generated road-like network {name}\n")
        f.write("<END OF METADATA>\n\n\n")
        f.write("~ \tinit_node\tterm_node\tcapacity\tlength\tfree_flow_time\tb\tpower\tspeed\ttoll\tlink_type\t;\n")
        arcs = sorted([(a, b) for a, b in edges] + [(b, a) for a, b in edges])
        for a, b in arcs:
            f.write(f"\t{a + 1}\t{b + 1}\t1000\t1.0\t1.0\t0.15\t4\t0\t0\t1\t;\n")


def main():
    for path, name, nodes, links, min_paths, max_arcs in NETWORKS:
        seed = 0
        while True:
            edges = layout(nodes, links, seed)
            ok, counts = endpoints_ok(nodes, edges, min_paths, max_arcs)
            if ok:
                break
            seed += 1
        write(path, name, nodes, edges)
        print(f"{path}: {nodes} nodes, {links} links, peeled {counts} (layout seed {seed})")


if __name__ == "__main__":
    main()
