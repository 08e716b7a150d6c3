"""JSON and CSV encodings.  Rationals are written as ``"p/q"`` (or plain integers
as ``"3"``), floats with ``repr`` so they round-trip exactly."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvalidInput
from .polytope import LinearSystemH, PointVec, PolygonV
from .scalars import FLOAT64, RATIONAL, Mode, check_mode, format_scalar, json_scalar, to_scalar
from .slack import NonnegFactorization, SlackMatrix


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InvalidInput(f"{path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path}:{e.lineno}: {e.msg}") from e


def _parse(value, mode: Mode, where: str):
    try:
        if mode == FLOAT64:
            return float(value)
        return to_scalar(value if not isinstance(value, str) else Fraction(value), RATIONAL)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InvalidInput(f"{where}: cannot read {value!r} as a {mode} scalar") from e


def _tidy(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


# --- polygons and systems ----------------------------------------------------


def polygon_to_json(P: PolygonV) -> dict:
    return {
        "mode": P.mode,
        "vertices": [[json_scalar(c, P.mode) for c in v] for v in P.vertices],
    }


def polygon_from_json(data: dict, where: str = "polygon") -> PolygonV:
    try:
        mode = check_mode(data["mode"])
        verts = data["vertices"]
    except (KeyError, TypeError) as e:
        raise InvalidInput(f"{where}: expected keys 'mode' and 'vertices'") from e
    pts = []
    for k, v in enumerate(verts):
        coords = tuple(_tidy(_parse(c, mode, f"{where}: vertex {k}")) for c in v)
        pts.append(PointVec(coords, mode))
    return PolygonV(tuple(pts), mode)


def hrep_to_json(H: LinearSystemH) -> dict:
    enc = lambda arr: [[json_scalar(v, H.mode) for v in row] for row in arr]  # noqa: E731
    out = {
        "mode": H.mode,
        "A": enc(H.A),
        "b": [json_scalar(v, H.mode) for v in H.b],
    }
    if H.A_eq is not None:
        out["A_eq"] = enc(H.A_eq)
        out["b_eq"] = [json_scalar(v, H.mode) for v in H.b_eq]
    return out


def hrep_from_json(data: dict, where: str = "system") -> LinearSystemH:
    mode = check_mode(data.get("mode", RATIONAL))
    dec = lambda rows, name: [  # noqa: E731
        [_parse(v, mode, f"{where}: {name} row {i}") for v in row] for i, row in enumerate(rows)
    ]
    try:
        A = dec(data["A"], "A")
        b = [_parse(v, mode, f"{where}: b") for v in data["b"]]
    except (KeyError, TypeError) as e:
        raise InvalidInput(f"{where}: expected keys 'A' and 'b'") from e
    A_eq = b_eq = None
    if "A_eq" in data:
        A_eq = dec(data["A_eq"], "A_eq")
        b_eq = [_parse(v, mode, f"{where}: b_eq") for v in data["b_eq"]]
    return LinearSystemH(A, b, mode, A_eq, b_eq)


# --- matrices ----------------------------------------------------------------


def matrix_to_csv(M: np.ndarray, mode: Mode) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in M:
        w.writerow([format_scalar(v, mode) for v in row])
    return buf.getvalue()


def matrix_from_csv(text: str, mode: Mode, where: str = "<csv>") -> np.ndarray:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row:
            continue
        rows.append([_tidy(_parse(v.strip(), mode, f"{where}:{lineno}")) for v in row])
    if rows and len({len(r) for r in rows}) != 1:
        raise InvalidInput(f"{where}: rows have different lengths")
    if mode == FLOAT64:
        return np.array(rows, dtype=np.float64).reshape(len(rows), -1)
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


def read_matrix(path, mode: Mode | str = "auto") -> tuple[np.ndarray, Mode]:
    """Read a CSV matrix; ``auto`` picks float64 when any entry looks like a float."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InvalidInput(f"{path}: {e.strerror}") from e
    if mode == "auto":
        floaty = any(c in text for c in ".eE") or "inf" in text or "nan" in text
        mode = FLOAT64 if floaty else RATIONAL
    mode = check_mode(mode)
    return matrix_from_csv(text, mode, str(path)), mode


def matrix_to_json(M: np.ndarray, mode: Mode) -> dict:
    rows, cols = M.shape
    return {"rows": rows, "cols": cols, "data": [json_scalar(v, mode) for v in M.flat]}


# --- bundles -----------------------------------------------------------------


def write_bundle(
    out: Path,
    S: SlackMatrix | None,
    F: NonnegFactorization,
    meta: dict,
    prefix: str = "",
) -> dict:
    """Write T, U (and S when it is materialized) as CSV next to a JSON bundle.

    Returns the bundle dict; matrix fields hold file names relative to ``out``.
    """
    out.mkdir(parents=True, exist_ok=True)
    bundle = dict(meta)
    bundle["mode"] = F.mode
    bundle["rank"] = F.r
    for name, M in (("T", F.T), ("U", F.U)):
        fname = f"{prefix}{name}.csv"
        (out / fname).write_text(matrix_to_csv(M, F.mode))
        bundle[name] = fname
    if S is not None and S.materialized:
        fname = f"{prefix}S.csv"
        (out / fname).write_text(matrix_to_csv(S.to_array(), S.mode))
        bundle["S"] = fname
    else:
        bundle["S"] = None
    if F.scale_sq is not None:
        bundle["scale_sq"] = [str(v) for v in F.scale_sq]
    (out / f"{prefix}bundle.json").write_text(dumps(bundle))
    return bundle


def read_bundle(path) -> tuple[SlackMatrix | None, NonnegFactorization, dict]:
    path = Path(path)
    data = read_json(path)
    base = path.parent
    try:
        mode = check_mode(data["mode"])
        T, _ = read_matrix(base / data["T"], mode)
        U, _ = read_matrix(base / data["U"], mode)
    except KeyError as e:
        raise InvalidInput(f"{path}: missing field {e.args[0]!r}") from e
    scale_sq = data.get("scale_sq")
    F = NonnegFactorization(T, U, mode, scale_sq=tuple(Fraction(v) for v in scale_sq) if scale_sq else None)
    S = None
    if data.get("S"):
        S = SlackMatrix(read_matrix(base / data["S"], mode)[0], mode)
    return S, F, data


def extension_to_json(Q) -> dict:
    enc = lambda arr: [[json_scalar(v, Q.mode) for v in row] for row in arr]  # noqa: E731
    out = {
        "mode": Q.mode,
        "d": Q.d,
        "r": Q.r,
        "A": enc(Q.A),
        "T": enc(Q.T),
        "b": [json_scalar(v, Q.mode) for v in Q.b],
    }
    if Q.A_eq is not None:
        out["A_eq"] = enc(Q.A_eq)
        out["b_eq"] = [json_scalar(v, Q.mode) for v in Q.b_eq]
    return out


def rounded_to_json(R) -> dict:
    return {
        "d": R.d,
        "r": R.r,
        "Delta": R.Delta,
        "grid": R.grid,
        "epsilon": str(R.epsilon),
        "rows": list(R.rows),
        "A_bar": [[str(v) for v in row] for row in R.A_bar],
        "T_bar": [[str(Fraction(v)) for v in row] for row in R.T_bar],
        "b_bar": [str(v) for v in R.b_bar],
    }
