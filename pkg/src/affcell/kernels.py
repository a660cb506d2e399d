"""Select the compiled kernels when available, else the pure-Python ones.

Set ``AFFCELL_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("AFFCELL_PURE_PYTHON"):
    from ._kernels_py import *  # noqa: F401,F403
    from ._kernels_py import IMPLEMENTATION
else:
    try:
        from ._ckernels import *  # noqa: F401,F403
        from ._ckernels import IMPLEMENTATION
    except ImportError:
        from ._kernels_py import *  # noqa: F401,F403
        from ._kernels_py import IMPLEMENTATION

__all__ = [
    "IMPLEMENTATION",
    "padd",
    "pmul",
    "axpy",
    "gen_mult",
    "kl_reduce",
    "t_to_c",
    "c_to_t",
    "c_gen_mult",
]
