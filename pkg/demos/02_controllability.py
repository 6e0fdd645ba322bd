"""Average controllability from three angles.

The Gramian W = integral_0^T e^{-At} B B^T e^{-A^T t} dt measures how much
input energy each node can soak up when every node is driven (B = I). Its
diagonal is the average controllability. This script compares the spectral
closed form against trapezoid quadrature, shows the quadrature error
shrinking like step^2, and cross-checks the infinite-horizon limit against a
Lyapunov solve.
"""

import math

import numpy as np

from ctrlfeat import (
    Graph,
    Horizon,
    adjacency,
    average_controllability_for_graph,
    gramian_lyapunov,
    gramian_spectral,
    gramian_trapezoid,
)


def main():
    # K2 has a closed form: both diagonal entries equal sinh(2T)/(2T changes
    # nothing here, T=1) / 2.
    k2 = Graph(id=0, n=2, edges=((0, 1),))
    W = gramian_spectral(adjacency(k2))
    print("K2 Gramian (spectral, T=1):")
    print(W.matrix)
    print(f"diagonal vs sinh(2)/2 = {math.sinh(2) / 2:.12f}\n")

    # A node with no edges integrates e^0 over [0, T]: its value is exactly T.
    iso = Graph(id=1, n=5, edges=((0, 1), (0, 2), (1, 2)))
    ac = average_controllability_for_graph(iso)
    print("triangle plus two isolated nodes, AC per node:")
    print(f"  {np.round(ac.values, 6)}  (isolated nodes sit at the horizon T=1)\n")

    # Quadrature error is O(step^2): each halving buys a factor of four.
    star = Graph(id=2, n=6, edges=tuple((0, i) for i in range(1, 6)))
    A = adjacency(star)
    exact = gramian_spectral(A).matrix
    print("trapezoid error vs step (5-star, relative Frobenius):")
    for step in (0.01, 0.005, 0.0025, 0.00125):
        approx = gramian_trapezoid(A, Horizon(1.0, step)).matrix
        rel = np.linalg.norm(approx - exact) / np.linalg.norm(exact)
        print(f"  step {step:7.5f}  error {rel:.3e}")
    print()

    # With a decaying flow (all eigenvalues of A positive) the horizon can go
    # to infinity; the Lyapunov equation A W + W A^T = B B^T gives the limit
    # directly and the long-horizon quadrature should walk right up to it.
    p3_shifted = adjacency(Graph(id=3, n=3, edges=((0, 1), (1, 2)))) + 3.0 * np.eye(3)
    W_inf = gramian_lyapunov(p3_shifted).matrix
    W_50 = gramian_trapezoid(p3_shifted, Horizon(50.0, 0.001)).matrix
    print("infinite-horizon check (P3 shifted by +3I):")
    print(f"  Lyapunov diagonal    {np.round(np.diag(W_inf), 9)}")
    print(f"  trapezoid T=50 diag  {np.round(np.diag(W_50), 9)}")
    print(f"  max-abs gap          {np.abs(W_inf - W_50).max():.2e}")


if __name__ == "__main__":
    main()
