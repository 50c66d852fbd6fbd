#!/usr/bin/env python3
"""Quantum-resource accounting: qubit budgets, change descriptors, measurements.

Compares the three Fock-state encodings, evaluates the 3+1D QCD qubit
estimate, checks that the change-descriptor pathway reproduces the matrix
structure, and emulates the occupation measurement with a probing-scale flag.
"""

from lfdlcq import (
    ModelParams,
    apply_delta,
    apply_hamiltonian,
    enumerate_basis,
    enumerate_deltas,
    measure_occupation,
    qubit_count,
    qubit_count_qcd,
    tuple_from_index,
)

print("=== Qubit budgets per encoding ===")
print(f"  {'K':>5} {'compact':>9} {'direct-compact':>15} {'direct-direct':>14}")
for k in (6, 16, 64, 256, 1024):
    row = [qubit_count(s, k).total_qubits for s in ("compact", "direct-compact", "direct-direct")]
    print(f"  {k:>5} {row[0]:>9} {row[1]:>15} {row[2]:>14}")
print("  (compact grows like sqrt(K) log K; the direct schemes like K and K log K)")

b = qubit_count("compact", 6)
print(f"\n  compact at K=6: {b.total_qubits} qubits total, breakdown {b.breakdown}")

print("\n=== 3+1D QCD estimate (pure formula evaluation) ===")
q = qubit_count_qcd(20, 20, 5, 3)
print(f"  K=20, transverse cutoff 20, 5 flavors, 3 colors: {q.total_qubits} qubits "
      f"({q.breakdown})")

print("\n=== Matrix-enumeration oracle: tuple index and change descriptors ===")
print("  first tuples:", [tuple_from_index(n) for n in range(1, 7)])
K = 6
deltas = list(enumerate_deltas(K))
print(f"  K={K}: {len(deltas)} descriptors (bound 324 K^3 = {324 * K**3})")

params = ModelParams(m_B=1.3, m_F=0.7, g=0.9, Lambda=24, K=K)
basis = enumerate_basis(K)
agree = True
for s in basis:
    ham = {img.key for img, _ in apply_hamiltonian(s, params)} | {s.key}
    via = {s.key} | {im.key for im in (apply_delta(s, d) for d in deltas) if im is not None}
    agree &= ham == via
print(f"  descriptor images match Hamiltonian images on all {len(basis)} states: {agree}")

print("\n=== Occupation measurement with a probing-scale flag ===")
p4 = ModelParams(m_B=2.0, m_F=1.0, g=0.0, Lambda=16, K=4)
basis4 = enumerate_basis(4, 0)
uniform = [(s, 1.0 / len(basis4)) for s in basis4]
for n in (1, 2, 4):
    full, _ = measure_occupation(uniform, n, p4)
    cut, kept = measure_occupation(uniform, n, p4, qsq=30.0)
    print(f"  mode {n}: <occupancy> = {full:.4f} uncut, {cut:.4f} below Q^2=30 "
          f"(kept fraction {kept:.3f})")
