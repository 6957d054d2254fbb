"""Kernel backend selection.

The hot loops (Monte Carlo path stepping, ADI time stepping) exist twice:
compiled Cython extensions and a pure-NumPy fallback with the same contract.
The compiled ones are preferred when importable. Override with the
EPIOPT_BACKEND environment variable: "python"/"numpy" forces the fallback,
"cython" requires the extensions (ImportError if missing).
"""

import os

_choice = os.environ.get("EPIOPT_BACKEND", "").strip().lower()

if _choice in ("python", "numpy"):
    from . import _mc_numpy as mc
    from . import _pde_numpy as pde

    BACKEND = "numpy"
elif _choice in ("", "cython"):
    try:
        from . import _mc_cy as mc
        from . import _pde_cy as pde

        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        from . import _mc_numpy as mc
        from . import _pde_numpy as pde

        BACKEND = "numpy"
else:
    raise ValueError(
        f"EPIOPT_BACKEND={_choice!r} not understood; use 'cython' or 'python'"
    )

__all__ = ["mc", "pde", "BACKEND"]
