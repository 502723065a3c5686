"""Backend selection for the hot loops.

The numba path is used when numba imports cleanly and ``QGDPREP_NO_NUMBA``
is unset or ``0``. Set ``QGDPREP_NO_NUMBA=1`` to force the numpy path.
"""
import os

from . import _kernels_numpy

RY, CZ, CRY = _kernels_numpy.RY, _kernels_numpy.CZ, _kernels_numpy.CRY

_impl = _kernels_numpy
BACKEND = "numpy"

if os.environ.get("QGDPREP_NO_NUMBA", "0") in ("", "0"):
    try:
        from . import _kernels_numba
    except ImportError:  # pragma: no cover
        pass
    else:
        _impl = _kernels_numba
        BACKEND = "numba"

pauli_apply = _impl.pauli_apply
controlled_pauli_apply = _impl.controlled_pauli_apply
pauli_trace = _impl.pauli_trace
pauli_expect = _impl.pauli_expect
gate_1q = _impl.gate_1q
controlled_1q = _impl.controlled_1q
ansatz_state = _impl.ansatz_state
