"""Hot numeric kernels with two interchangeable backends.

`_core` is a compiled Cython extension; `_pure` is a plain-Python mirror that
produces bit-identical results. The compiled backend is picked automatically
when available. Override with the ``PEERSPLIT_BACKEND`` environment variable
(``auto``, ``compiled``, ``pure``) or at runtime via :func:`use_backend`.

Callers look functions up through this module (``kernels.residual_geometric``)
so a backend switch takes effect immediately.
"""

from __future__ import annotations

import os

from . import _pure

try:
    from . import _core
except ImportError:
    _core = None

_FUNCTIONS = (
    "weighted_geometric",
    "weighted_arithmetic",
    "residual_geometric",
    "residual_arithmetic",
    "objective_geometric",
    "objective_arithmetic",
)

_active = None


def available_backends() -> tuple[str, ...]:
    """Backend names importable in this environment."""
    names = ["pure"]
    if _core is not None:
        names.insert(0, "compiled")
    return tuple(names)


def backend_name() -> str:
    """Name of the backend currently bound ('compiled' or 'pure')."""
    return _active


def use_backend(name: str = "auto") -> str:
    """Bind kernel functions to a backend and return its name.

    ``auto`` prefers the compiled extension; ``compiled`` raises if the
    extension is unavailable.
    """
    global _active
    if name == "auto":
        module = _core if _core is not None else _pure
    elif name == "compiled":
        if _core is None:
            raise RuntimeError("compiled kernel extension is not available")
        module = _core
    elif name == "pure":
        module = _pure
    else:
        raise ValueError(f"unknown kernel backend {name!r}")
    for fn in _FUNCTIONS:
        globals()[fn] = getattr(module, fn)
    _active = module.BACKEND_NAME
    return _active


use_backend(os.environ.get("PEERSPLIT_BACKEND", "auto"))
