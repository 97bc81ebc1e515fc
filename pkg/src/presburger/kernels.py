"""Select the compiled kernels when available, else the pure-Python ones.

Callers reach the kernels through this module's attributes, so ``use`` can
swap implementations at run time (the benchmark and the equivalence tests
rely on that).
"""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

NAMES = ("eval_circuit", "eval_circuit_packed", "propagate_rows", "cd_minimal")

IMPLEMENTATION = "python"


def available() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def use(name: str) -> None:
    """Switch every kernel to the ``"python"`` or ``"cython"`` implementation."""
    global IMPLEMENTATION
    if name == "cython":
        if _compiled is None:
            raise ImportError("the compiled kernels are not built")
        impl = _compiled
    elif name == "python":
        impl = _kernels_py
    else:
        raise ValueError(f"unknown kernel implementation {name!r}")
    g = globals()
    for fn in NAMES:
        g[fn] = getattr(impl, fn)
    IMPLEMENTATION = name


use("cython" if _compiled is not None else "python")
