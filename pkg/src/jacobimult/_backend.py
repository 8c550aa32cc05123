"""Select the compiled core or the numpy fallback.

Set ``JACOBIMULT_PURE=1`` to force the fallback even when the extension
is importable.
"""

import os

from jacobimult import _pycore

if os.environ.get("JACOBIMULT_PURE", "") not in ("", "0"):
    core = _pycore
    NAME = "python"
else:
    try:
        from jacobimult import _core as core
        NAME = "cython"
    except ImportError:  # extension not built
        core = _pycore
        NAME = "python"

orthonormal_table = core.orthonormal_table
christoffel_sums = core.christoffel_sums
hilbert_naive = core.hilbert_naive
q_naive = core.q_naive
ap_windows = core.ap_windows
