"""
Reading tensors from files.

Text formats hold numbers separated by whitespace or commas.  ``#`` starts
a comment, and ``/`` ends a row so a whole matrix may sit on one line.

* ``matrix3``: 3 rows of 3 numbers, a second-order tensor.
* ``voigt6``: 6 rows of 6 numbers, a stiffness in Voigt notation.
* ``kelvin6``: 6 rows of 6 numbers, a stiffness in Kelvin notation.
* ``full81``: 81 numbers in any layout, ``C[i, j, k, l]`` in row-major order.
* ``json``: an object ``{"format": ..., "data": ..., "name": ..., "units": ...}``
  where ``data`` is a nested or flat list in one of the formats above.
"""

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParseError, SymmetryViolation, ValidationError
from .spectral import kelvin_unmap, voigt_to_tensor
from .tensor import TOL_SYM

FORMATS = ("voigt6", "kelvin6", "full81", "matrix3", "json")
_TOKEN = re.compile(r"[^\s,]+")


@dataclass(frozen=True)
class TensorFile:
    format: str
    tensor: np.ndarray
    name: str = ""
    units: str = ""


def parse_rows(text):
    """
    Split text into rows of floats.

    Returns
    -------
    list of (line_number, list of float)
        Empty rows are dropped.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        offset = 0
        for chunk in line.split("/"):
            values = []
            for match in _TOKEN.finditer(chunk):
                token = match.group()
                column = offset + match.start() + 1
                try:
                    value = float(token)
                except ValueError:
                    raise ParseError(f"not a number: {token!r}", line=lineno, column=column) from None
                if not np.isfinite(value):
                    raise ParseError(f"non-finite value {token!r}", line=lineno, column=column)
                values.append(value)
            if values:
                rows.append((lineno, values))
            offset += len(chunk) + 1
    return rows


def _matrix(rows, n):
    if len(rows) != n:
        where = rows[n][0] if len(rows) > n else (rows[-1][0] if rows else 1)
        raise ParseError(f"expected {n} rows, found {len(rows)}", line=where)
    for k, (lineno, values) in enumerate(rows, start=1):
        if len(values) != n:
            raise ParseError(f"row {k} has {len(values)} entries, expected {n}", line=lineno)
    return np.array([values for _, values in rows])


def _check_symmetric(M, tol, what):
    res = np.abs(M - M.T)
    i, j = np.unravel_index(int(np.argmax(res)), res.shape)
    if res[i, j] > tol * max(np.linalg.norm(M), np.finfo(float).tiny):
        raise SymmetryViolation(
            f"{what} matrix is not symmetric: |M[{i + 1},{j + 1}] - M[{j + 1},{i + 1}]| = {res[i, j]:.3e}",
            index=(int(i), int(j)),
            residual=float(res[i, j]),
        )
    return 0.5 * (M + M.T)


def tensor_from_array(data, fmt, tol=TOL_SYM, voigt_convention="stress"):
    """Convert numeric data of a declared format into a dense tensor."""
    A = np.asarray(data, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValidationError("data contains non-finite values")
    if fmt == "matrix3":
        if A.size != 9:
            raise DimensionError(f"matrix3 needs 9 numbers, got {A.size}")
        return A.reshape(3, 3)
    if fmt in ("voigt6", "kelvin6"):
        if A.size != 36:
            raise DimensionError(f"{fmt} needs 36 numbers, got {A.size}")
        M = _check_symmetric(A.reshape(6, 6), tol, fmt)
        if fmt == "voigt6":
            return voigt_to_tensor(M, voigt_convention)
        return kelvin_unmap(M)
    if fmt == "full81":
        if A.size != 81:
            raise DimensionError(f"full81 needs 81 numbers, got {A.size}")
        return A.reshape(3, 3, 3, 3)
    raise ValidationError(f"unknown format {fmt!r}")


def parse_text(text, fmt, tol=TOL_SYM, voigt_convention="stress"):
    rows = parse_rows(text)
    if fmt == "matrix3":
        data = _matrix(rows, 3)
    elif fmt in ("voigt6", "kelvin6"):
        data = _matrix(rows, 6)
    elif fmt == "full81":
        data = [v for _, values in rows for v in values]
        if len(data) != 81:
            raise DimensionError(f"full81 needs 81 numbers, got {len(data)}")
    else:
        raise ValidationError(f"unknown format {fmt!r}")
    return tensor_from_array(data, fmt, tol, voigt_convention)


def parse_json(text, tol=TOL_SYM, voigt_convention="stress"):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict) or "format" not in obj or "data" not in obj:
        raise ParseError('JSON input must be an object with "format" and "data" fields')
    fmt = obj["format"]
    if fmt not in FORMATS or fmt == "json":
        raise ValidationError(f"unsupported format {fmt!r} in JSON input")
    try:
        data = np.asarray(obj["data"], dtype=float)
    except (TypeError, ValueError):
        raise ParseError('"data" must be a (nested) list of numbers') from None
    tensor = tensor_from_array(data, fmt, tol, obj.get("voigt_convention", voigt_convention))
    return TensorFile(fmt, tensor, str(obj.get("name", "")), str(obj.get("units", "")))


def parse_tensor_file(path, fmt, tol=TOL_SYM, voigt_convention="stress"):
    """
    Read a tensor file.

    Parameters
    ----------
    path : str or Path
        File to read.
    fmt : str
        One of ``FORMATS``.
    tol : float
        Relative symmetry tolerance for 6x6 input.
    voigt_convention : {"stress", "strain"}
        How ``voigt6`` entries are read, see :func:`voigt_to_tensor`.

    Returns
    -------
    TensorFile
    """
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if fmt == "json":
        return parse_json(text, tol, voigt_convention)
    return TensorFile(fmt, parse_text(text, fmt, tol, voigt_convention))
