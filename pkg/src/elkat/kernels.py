"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ELKAT_PURE=1 to force the pure-Python kernels (used by the parity tests
and the benchmark).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("ELKAT_PURE"):
    impl = _pykernels
else:
    try:
        from . import _speedups as impl  # type: ignore[attr-defined]
    except ImportError:
        impl = _pykernels

BACKEND = impl.BACKEND

axiom_bits = impl.axiom_bits
search_kripke = impl.search_kripke

# enumeration helpers always come from the pure module (cheap, cached)
interp_counts = _pykernels.interp_counts
all_partitions = _pykernels.all_partitions
canonical_point_partitions = _pykernels.canonical_point_partitions
block_masks = _pykernels.block_masks

OP_TOP = _pykernels.OP_TOP
OP_CONCEPT = _pykernels.OP_CONCEPT
OP_AND = _pykernels.OP_AND
OP_EXISTS = _pykernels.OP_EXISTS
OP_INCLUSION = _pykernels.OP_INCLUSION
OP_CASSERT = _pykernels.OP_CASSERT
OP_RASSERT = _pykernels.OP_RASSERT
