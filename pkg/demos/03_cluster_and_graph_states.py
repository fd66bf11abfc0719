"""Build cluster/graph states two ways and relate them by local gates.

The controlled-phase construction applies CZ along every edge of a graph
to |+>^n. The product-form expansion of the one-dimensional cluster state
differs from the path-graph state only by Z corrections on qubits 2..n,
and the familiar GHZ form appears after Hadamards on the end qubits.
"""

import numpy as np

from dissipforge import GraphSpec, cluster_formula, graph_state
from dissipforge.algebra import PauliString
from dissipforge.states import ghz_state, max_local_overlap

for n in (2, 3):
    psi = graph_state(GraphSpec.path(n))
    print(f"path graph state, n = {n}: amplitudes * 2^(n/2) =",
          np.round(psi.amplitudes * 2 ** (n / 2), 6).real)

print("\nstabilizer expectations for the 3-qubit path state:")
psi3 = graph_state(GraphSpec.path(3)).amplitudes
for word in ("XZI", "ZXZ", "IZX"):
    val = np.vdot(psi3, PauliString(word).dense() @ psi3).real
    print(f"  <{word}> = {val:+.6f}")

print("\nproduct form vs graph state:")
for n in (2, 3, 4):
    prod = cluster_formula(n)
    graph = graph_state(GraphSpec.path(n))
    # Z on qubits 2..n maps one onto the other
    signs = np.ones(1 << n)
    for q in range(2, n + 1):
        z = PauliString.single(n, q, "Z").dense()
        signs = signs * np.diag(z).real
    print(f"  n = {n}: product form == Z-corrected graph state:",
          np.allclose(prod.amplitudes, signs * graph.amplitudes))

print("\nlocal-gate equivalences (max overlap over per-qubit corrections):")
print("  cluster(3) ~ path(3):", round(max_local_overlap(
    cluster_formula(3), graph_state(GraphSpec.path(3))), 12))
print("  GHZ(3)     ~ path(3):", round(max_local_overlap(
    graph_state(GraphSpec.path(3)), ghz_state(3)), 12))

phi4 = np.zeros(16, dtype=complex)
phi4[[0, 3, 12]] = 0.5
phi4[15] = -0.5
print("  phi4       ~ path(4):", round(max_local_overlap(
    graph_state(GraphSpec.path(4)), phi4), 12))

ring = GraphSpec(5, ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5)))
psi = graph_state(ring)
print(f"\nring graph on 5 vertices: all |amplitudes| equal:",
      bool(np.allclose(np.abs(psi.amplitudes), 2 ** (-2.5))))
