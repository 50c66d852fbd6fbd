#!/usr/bin/env python3
"""Fixed-K Fock blocks: enumeration, partition counting, and growth.

Walks through the combinatorial backbone: each harmonic-resolution block is
finite, its purely bosonic sector counts integer partitions, and the block
dimension grows like exp(sqrt(K)).
"""

import math

from lfdlcq import (
    enumerate_basis,
    format_state,
    is_angel_state,
    max_distinct_parts,
    partition_count,
)

print("=== The K=3 charge-0 block, state by state ===")
basis = enumerate_basis(3, 0)
for i, s in enumerate(basis):
    tag = "  <- decoupled all-ones boson state" if is_angel_state(s) else ""
    print(f"  [{i}] {format_state(s)}{tag}")

print("\n=== Purely bosonic states count integer partitions ===")
for k in (4, 6, 10, 16):
    b = enumerate_basis(k, 0)
    bosonic = sum(1 for s in b if not s.fermions and not s.antifermions)
    print(f"  K={k:2d}: bosonic states = {bosonic:4d} = p({k}) = {partition_count(k)}")

print("\n=== Block dimension vs K (log2 dim / sqrt(K) stays in a band) ===")
for k in range(4, 21, 4):
    full = len(enumerate_basis(k))
    q0 = len(enumerate_basis(k, 0))
    ratio = math.log2(full) / math.sqrt(k)
    print(f"  K={k:2d}: dim={full:6d} (Q=0 block {q0:5d})  log2(dim)/sqrt(K)={ratio:.3f}")

print("\n=== Distinct-mode bound: no species ever uses more than I(K) modes ===")
for k in (6, 12, 20):
    cap = max_distinct_parts(k)
    worst = max(
        max(len(s.bosons), len(s.fermions), len(s.antifermions))
        for s in enumerate_basis(k)
    )
    print(f"  K={k:2d}: I(K)={cap}, largest distinct-mode count seen = {worst}")
