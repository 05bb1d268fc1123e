"""Hot-kernel backend selection.

The compiled extension ``_ckernels`` is used when it imports; otherwise the numpy
fallback in ``_pykernels``.  Set ``TRIHEAT_PURE_PYTHON=1`` to force the fallback.
Both backends expose ``phi_integrand``, ``phi_panel``, ``counter_uniform`` and
``exit_steps`` with identical signatures and identical random streams.
"""

import os

from . import _pykernels

python_backend = _pykernels
compiled_backend = None

try:
    from . import _ckernels as compiled_backend
except ImportError:  # pragma: no cover - depends on the build
    compiled_backend = None

if compiled_backend is not None and not os.environ.get("TRIHEAT_PURE_PYTHON"):
    backend = compiled_backend
else:
    backend = python_backend

BACKEND = backend.BACKEND
phi_integrand = backend.phi_integrand
phi_panel = backend.phi_panel
counter_uniform = backend.counter_uniform
exit_steps = backend.exit_steps

# Key derivation is cheap and shared by both backends.
stream_key = _pykernels.stream_key
WORDS_PER_STEP = _pykernels.WORDS_PER_STEP


def get_backend(name: str):
    """Return the backend module called ``name`` ("python" or "cython")."""
    if name == "python":
        return python_backend
    if name == "cython":
        if compiled_backend is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return compiled_backend
    raise ValueError(f"unknown backend {name!r}")
