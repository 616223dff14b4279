"""Plain-text matrix files.

Canonical format (UTF-8, '.' decimal separator, diff-friendly)::

    # comment lines and blank lines are ignored
    label heat-kernel-example        (optional, before dim)
    dim 3
    4.0 1.0 0.5
    1.0 3.0 0.25
    0.5 0.25 2.0

After the ``dim N`` line exactly N*N whitespace-separated entries follow in
row-major order; line breaks between entries are free-form.  Matrices are
symmetrized on load; asymmetry beyond 1e-9 relative triggers a warning.
Entries are written with ``repr`` so a write/read round trip is exact.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import MatrixFileError
from .matcore import SymMatrix

ASYMMETRY_WARN = 1e-9


class AsymmetryWarning(UserWarning):
    """Loaded matrix was asymmetric beyond the documented threshold."""


def load_matrix(path) -> tuple[SymMatrix, str | None]:
    """Parse one matrix file; returns (matrix, label)."""
    label = None
    dim = None
    entries: list[float] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if dim is None:
                head, _, rest = line.partition(" ")
                if head == "label":
                    if label is not None:
                        raise MatrixFileError(f"{path}:{lineno}: duplicate label line")
                    if not rest.strip():
                        raise MatrixFileError(f"{path}:{lineno}: empty label")
                    label = rest.strip()
                    continue
                if head != "dim":
                    raise MatrixFileError(
                        f"{path}:{lineno}: expected 'dim N' (or a label line), got {line!r}"
                    )
                try:
                    dim = int(rest)
                except ValueError:
                    raise MatrixFileError(f"{path}:{lineno}: bad dimension {rest!r}") from None
                if dim < 1:
                    raise MatrixFileError(f"{path}:{lineno}: dim must be >= 1, got {dim}")
                continue
            for token in line.split():
                try:
                    entries.append(float(token))
                except ValueError:
                    raise MatrixFileError(
                        f"{path}:{lineno}: bad entry {token!r}"
                    ) from None
                if len(entries) > dim * dim:
                    raise MatrixFileError(f"{path}: more than {dim * dim} entries")
    if dim is None:
        raise MatrixFileError(f"{path}: missing 'dim N' line")
    if len(entries) != dim * dim:
        raise MatrixFileError(
            f"{path}: expected {dim * dim} entries, got {len(entries)}"
        )
    raw_mat = np.array(entries, dtype=np.float64).reshape(dim, dim)
    if not np.all(np.isfinite(raw_mat)):
        raise MatrixFileError(f"{path}: entries must be finite")
    asym = float(np.linalg.norm(raw_mat - raw_mat.T))
    if asym > ASYMMETRY_WARN * max(1.0, float(np.linalg.norm(raw_mat))):
        warnings.warn(
            f"{path}: asymmetry {asym:.3e} exceeds {ASYMMETRY_WARN:g} relative; "
            "symmetrizing",
            AsymmetryWarning,
            stacklevel=2,
        )
    return SymMatrix(raw_mat), label


def save_matrix(path, m: SymMatrix, label: str | None = None) -> None:
    """Write a matrix in the canonical format (exact round trip)."""
    lines = []
    if label is not None:
        lines.append(f"label {label}")
    lines.append(f"dim {m.dim}")
    for row in m.data:
        lines.append(" ".join(repr(float(x)) for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
