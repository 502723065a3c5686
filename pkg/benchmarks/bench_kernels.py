"""Compare the numba kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from qgdprep import _kernels_numba as nbk
from qgdprep import _kernels_numpy as npk
from qgdprep.pauli import pauli_masks
from qgdprep.vqsp import AnsatzSpec


def cases(rng):
    n = 14
    psi = rng.normal(size=(1 << n, 1)) + 1j * rng.normal(size=(1 << n, 1))
    masks = pauli_masks("XYZI" * 3 + "ZX")
    u = np.array([[0.6, -0.8], [0.8, 0.6]], dtype=complex)
    rho = rng.normal(size=(256, 256)) + 0j
    spec = AnsatzSpec(5, 3, "cry")
    theta = rng.uniform(0, 2 * np.pi, spec.num_params)
    vec = psi[:, 0].copy()
    return {
        "pauli_apply n=14": lambda k: k.pauli_apply(psi, *masks),
        "pauli_expect n=14": lambda k: k.pauli_expect(vec, *masks),
        "pauli_trace 256x256": lambda k: k.pauli_trace(rho, 0b10110101, 0b01100110, 1),
        "gate_1q n=14 q=5": lambda k: k.gate_1q(psi, u, 5, n),
        "controlled_1q n=14": lambda k: k.controlled_1q(psi, u, 1 << 3, 1 << 3, 5, n),
        "ansatz_state k=5 L=3 cry": lambda k: k.ansatz_state(theta, *spec.program, 5),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'numpy [us]':>12s} {'numba [us]':>12s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        a, b = fn(npk), fn(nbk)  # warm-up and JIT compile
        assert np.allclose(a, b), name
        number = 200 if "ansatz" in name or "trace" in name else 20
        t_np = min(timeit.repeat(lambda: fn(npk), number=number, repeat=args.repeat)) / number
        t_nb = min(timeit.repeat(lambda: fn(nbk), number=number, repeat=args.repeat)) / number
        print(f"{name:28s} {t_np * 1e6:12.1f} {t_nb * 1e6:12.1f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
