"""Pure-numpy kernels. Reference path and fallback when numba is disabled.

Arrays of amplitudes are 2-D, shape ``(2**nq, ncol)``: axis 0 is the basis
index, columns are independent vectors (one column for a pure state, the
columns of rho for a density matrix). Qubit 0 is the most significant bit.
"""
import numpy as np

RY, CZ, CRY = 0, 1, 2


def _bit(q, nq):
    return 1 << (nq - 1 - q)


def _parity(values):
    return (np.bitwise_count(values) & 1).astype(np.int64)


def pauli_apply(psi, xmask, zmask, ny):
    dim = psi.shape[0]
    idx = np.arange(dim)
    phase = 1j**ny * (1 - 2 * _parity(idx & zmask))
    out = np.empty_like(psi)
    out[idx ^ xmask] = phase[:, None] * psi
    return out


def controlled_pauli_apply(psi, xmask, zmask, ny, ctrl_mask, ctrl_val):
    idx = np.arange(psi.shape[0])
    hit = (idx & ctrl_mask) == ctrl_val
    return np.where(hit[:, None], pauli_apply(psi, xmask, zmask, ny), psi)


def pauli_trace(rho, xmask, zmask, ny):
    """Tr(P rho) for a square matrix rho."""
    idx = np.arange(rho.shape[0])
    phase = 1j**ny * (1 - 2 * _parity(idx & zmask))
    return complex(np.sum(phase * rho[idx, idx ^ xmask]))


def pauli_expect(vec, xmask, zmask, ny):
    """<v|P|v> for a 1-D vector."""
    idx = np.arange(vec.shape[0])
    phase = 1j**ny * (1 - 2 * _parity(idx & zmask))
    return complex(np.sum(np.conj(vec[idx ^ xmask]) * phase * vec))


def gate_1q(psi, u, q, nq):
    ncol = psi.shape[1]
    view = psi.reshape(1 << q, 2, 1 << (nq - q - 1), ncol)
    return np.einsum("ij,ajbc->aibc", u, view).reshape(psi.shape)


def controlled_1q(psi, u, ctrl_mask, ctrl_val, q, nq):
    idx = np.arange(psi.shape[0])
    hit = (idx & ctrl_mask) == ctrl_val
    return np.where(hit[:, None], gate_1q(psi, u, q, nq), psi)


def _ry_real(vec, angle, q, nq, ctrl=0):
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    view = vec.reshape(1 << q, 2, 1 << (nq - q - 1))
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :].copy()
    new = np.empty_like(view)
    new[:, 0, :] = c * a0 - s * a1
    new[:, 1, :] = s * a0 + c * a1
    new = new.reshape(-1)
    if ctrl:
        idx = np.arange(vec.shape[0])
        return np.where((idx & ctrl) == ctrl, new, vec)
    return new


def ansatz_state(theta, kinds, qa, qb, pidx, nq):
    vec = np.zeros(1 << nq)
    vec[0] = 1.0
    idx = np.arange(1 << nq)
    for kind, a, b, p in zip(kinds, qa, qb, pidx):
        if kind == RY:
            vec = _ry_real(vec, theta[p], a, nq)
        elif kind == CZ:
            mask = _bit(a, nq) | _bit(b, nq)
            vec = np.where((idx & mask) == mask, -vec, vec)
        else:
            vec = _ry_real(vec, theta[p], b, nq, ctrl=_bit(a, nq))
    return vec
