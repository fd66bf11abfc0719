"""Drive a single qubit into |+> with one engineered jump operator.

The operator Z - iY annihilates |+> and drains |->, so the qubit relaxes
into the superposition no matter where it starts. In the rotated frame the
same operator is plain sigma-minus decay toward |0>.
"""

import numpy as np

from dissipforge import (
    LindbladModel,
    PureState,
    SynthesisSpec,
    fidelity,
    integrate,
    steady_states,
    synth_subspace,
)

plus = PureState(np.array([1.0, 1.0]) / np.sqrt(2.0))
minus = np.array([1.0, -1.0]) / np.sqrt(2.0)

spec = SynthesisSpec(
    dim=2, k=1, coeffs=np.array([[1.0]]),
    basis=np.column_stack([plus.amplitudes, minus]),
)
ds = synth_subspace(spec)
L = ds.operators[0]
print("synthesized operator L = |+><-|:")
print(np.round(L, 6))
print("2L equals Z - iY:",
      np.allclose(2 * L, np.diag([1, -1]) - 1j * np.array([[0, -1j], [1j, 0]])))

model = LindbladModel(ds)
result = steady_states(model)
print(f"\nsteady-state subspace dimension: {result.dimension}")
print(f"steady-state fidelity to |+>:    {fidelity(result.state, plus):.12f}")

print("\nrelaxation from |0> (gamma = 1):")
rho0 = np.diag([1.0, 0.0]).astype(complex)
record = integrate(model, rho0, t_max=12.0, dt=0.01, target=plus)
for t in (0.0, 1.0, 2.0, 4.0, 8.0, 12.0):
    idx = record.index_at(t)
    print(f"  t = {t:5.1f}   fidelity = {record.fidelities[idx]:.9f}")

# doubling the rate reaches the target twice as fast
fast = LindbladModel(ds.scaled(2.0))
rec_fast = integrate(fast, rho0, t_max=12.0, dt=0.005, target=plus)
t_slow = record.times[np.argmax(record.fidelities >= 0.999)]
t_fast = rec_fast.times[np.argmax(rec_fast.fidelities >= 0.999)]
print(f"\ntime to fidelity 0.999:  gamma = 1 -> {t_slow:.2f},  gamma = 2 -> {t_fast:.2f}")
