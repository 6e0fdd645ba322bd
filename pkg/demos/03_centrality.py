"""The four classical metrics side by side on a graph with obvious structure.

The "kite with a tail" makes the differences visible: a dense clique, a
bridge node, and a pendant path. Degree rewards the clique, betweenness the
bridge, closeness the middle, eigenvector the dense core.
"""

import numpy as np

from ctrlfeat import (
    Graph,
    average_controllability_for_graph,
    betweenness_centrality,
    closeness_centrality,
    degree_vector,
    eigenvector_centrality,
)

# Nodes 0-3 form a K4 core, node 4 bridges out of it, 5 and 6 trail off.
KITE = Graph(
    id=0,
    n=7,
    edges=(
        (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
        (3, 4), (4, 5), (5, 6),
    ),
)


def main():
    metrics = {
        "degree": degree_vector(KITE),
        "closeness": closeness_centrality(KITE),
        "betweenness": betweenness_centrality(KITE),
        "eigenvector": eigenvector_centrality(KITE),
        "avg control": average_controllability_for_graph(KITE),
    }
    print("node      " + "".join(f"{name:>13}" for name in metrics))
    for v in range(KITE.n):
        row = "".join(f"{m.values[v]:13.4f}" for m in metrics.values())
        print(f"node {v}  {row}")

    print()
    bet = metrics["betweenness"].values
    print(f"the clique's gateway (node 3) tops betweenness: {bet.argmax() == 3}")
    eig = metrics["eigenvector"].values
    print(f"the clique owns the eigenvector mass: {set(np.argsort(eig)[-4:]) == {0, 1, 2, 3}}")
    ac = metrics["avg control"].values
    print(f"avg controllability is largest in the clique too: {ac.argmax() in {0, 1, 2, 3}}")


if __name__ == "__main__":
    main()
