"""Hot counting kernel with compiled and pure-python backends.

The compiled Cython extension is preferred; set ACISIM_KERNELS=python to force
the numpy fallback. ``BACKEND`` reports which one is active.
"""

import os

__all__ = ["joint_counts", "BACKEND"]

if os.environ.get("ACISIM_KERNELS", "").lower() in {"py", "python", "ref", "numpy"}:
    from acisim.kernels._ref import joint_counts

    BACKEND = "python"
else:
    try:
        from acisim.kernels._fast import joint_counts

        BACKEND = "cython"
    except ImportError:
        from acisim.kernels._ref import joint_counts

        BACKEND = "python"
