"""
Benchmark suite for heightcensus.

Measures the exact-arithmetic hot paths:
- height12 and normalize over ℚ and 𝔽_q(t)
- torsion classification with and without the Lutz-Nagell fast paths
- bounded-height enumeration, serial and chunked
- peak memory of streaming versus materialized enumeration
"""
