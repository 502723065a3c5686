"""numba-compiled kernels, same signatures and semantics as ``_kernels_numpy``."""
import numba as nb
import numpy as np

RY, CZ, CRY = 0, 1, 2

njit_kwargs = {"nogil": True, "cache": True}


@nb.njit(**njit_kwargs)
def _parity(v):
    p = 0
    while v:
        p ^= 1
        v &= v - 1
    return p


@nb.njit(**njit_kwargs)
def _phase(ny):
    r = ny % 4
    if r == 0:
        return 1.0 + 0.0j
    if r == 1:
        return 1.0j
    if r == 2:
        return -1.0 + 0.0j
    return -1.0j


@nb.njit(**njit_kwargs)
def pauli_apply(psi, xmask, zmask, ny):
    dim, ncol = psi.shape
    out = np.empty_like(psi)
    ph = _phase(ny)
    for b in range(dim):
        f = -ph if _parity(b & zmask) else ph
        t = b ^ xmask
        for c in range(ncol):
            out[t, c] = f * psi[b, c]
    return out


@nb.njit(**njit_kwargs)
def controlled_pauli_apply(psi, xmask, zmask, ny, ctrl_mask, ctrl_val):
    dim, ncol = psi.shape
    out = psi.copy()
    ph = _phase(ny)
    for b in range(dim):
        if (b & ctrl_mask) != ctrl_val:
            continue
        f = -ph if _parity(b & zmask) else ph
        t = b ^ xmask
        for c in range(ncol):
            out[t, c] = f * psi[b, c]
    return out


@nb.njit(**njit_kwargs)
def pauli_trace(rho, xmask, zmask, ny):
    ph = _phase(ny)
    acc = 0.0 + 0.0j
    for b in range(rho.shape[0]):
        f = -ph if _parity(b & zmask) else ph
        acc += f * rho[b, b ^ xmask]
    return acc


@nb.njit(**njit_kwargs)
def pauli_expect(vec, xmask, zmask, ny):
    ph = _phase(ny)
    acc = 0.0 + 0.0j
    for b in range(vec.shape[0]):
        f = -ph if _parity(b & zmask) else ph
        acc += np.conj(vec[b ^ xmask]) * f * vec[b]
    return acc


@nb.njit(**njit_kwargs)
def controlled_1q(psi, u, ctrl_mask, ctrl_val, q, nq):
    dim, ncol = psi.shape
    bit = 1 << (nq - 1 - q)
    out = psi.copy()
    for b in range(dim):
        if b & bit or (b & ctrl_mask) != ctrl_val:
            continue
        b1 = b | bit
        for c in range(ncol):
            a0 = psi[b, c]
            a1 = psi[b1, c]
            out[b, c] = u[0, 0] * a0 + u[0, 1] * a1
            out[b1, c] = u[1, 0] * a0 + u[1, 1] * a1
    return out


@nb.njit(**njit_kwargs)
def gate_1q(psi, u, q, nq):
    return controlled_1q(psi, u, 0, 0, q, nq)


@nb.njit(**njit_kwargs)
def ansatz_state(theta, kinds, qa, qb, pidx, nq):
    dim = 1 << nq
    vec = np.zeros(dim)
    vec[0] = 1.0
    for k in range(kinds.shape[0]):
        kind = kinds[k]
        if kind == CZ:
            mask = (1 << (nq - 1 - qa[k])) | (1 << (nq - 1 - qb[k]))
            for b in range(dim):
                if (b & mask) == mask:
                    vec[b] = -vec[b]
            continue
        if kind == RY:
            target, ctrl = qa[k], 0
        else:
            target, ctrl = qb[k], 1 << (nq - 1 - qa[k])
        bit = 1 << (nq - 1 - target)
        c = np.cos(theta[pidx[k]] / 2)
        s = np.sin(theta[pidx[k]] / 2)
        for b in range(dim):
            if b & bit or (b & ctrl) != ctrl:
                continue
            b1 = b | bit
            a0 = vec[b]
            a1 = vec[b1]
            vec[b] = c * a0 - s * a1
            vec[b1] = s * a0 + c * a1
    return vec
