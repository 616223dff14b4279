"""Runtime backend and parallelism knobs, all driven by environment variables.

``LOEWNER_LAB_BACKEND`` selects the eigensolver kernel implementation:

* ``auto`` (default) -- numba-compiled kernel when numba is importable,
  pure-numpy fallback otherwise;
* ``numba`` -- require the compiled kernel, fail if numba is missing;
* ``numpy`` -- force the pure-numpy fallback.

``LOEWNER_LAB_THREADS`` caps worker threads for scans and hunts
(``0`` or unset means auto).
"""

import os

ENV_BACKEND = "LOEWNER_LAB_BACKEND"
ENV_THREADS = "LOEWNER_LAB_THREADS"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False


def active_backend() -> str:
    """Resolve the kernel backend name ("numba" or "numpy") for this call."""
    choice = os.environ.get(ENV_BACKEND, "auto").strip().lower() or "auto"
    if choice == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError(
                f"{ENV_BACKEND}=numba requested but numba is not importable"
            )
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise RuntimeError(
        f"{ENV_BACKEND} must be one of auto/numba/numpy, got {choice!r}"
    )


def thread_count() -> int:
    """Worker-thread cap from LOEWNER_LAB_THREADS (0 = auto)."""
    raw = os.environ.get(ENV_THREADS, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise RuntimeError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if n < 0:
        raise RuntimeError(f"{ENV_THREADS} must be >= 0, got {n}")
    if n == 0:
        return min(os.cpu_count() or 1, 8)
    return n
