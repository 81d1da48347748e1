"""CPLEX-style LP text dump for cross-checking against external solvers."""

from __future__ import annotations

import io
import math
import re

import numpy as np

from .model import MilpModel

_BAD = re.compile(r"[^A-Za-z0-9_()\[\],.]")


def _name(raw: str) -> str:
    out = _BAD.sub("_", raw)
    return out if not out[:1].isdigit() and out[:1] not in ".e" else "x" + out


def _num(v: float) -> str:
    return repr(float(v))


def _expr(cols, vals, names) -> str:
    if len(cols) == 0:
        return "0 " + names[0] if names else "0"
    parts = []
    for j, v in zip(cols, vals):
        sign = "-" if v < 0 else "+"
        parts.append(f"{sign} {_num(abs(v))} {names[j]}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def write_lp(model: MilpModel, fh=None) -> str:
    """Write ``model`` in LP format; returns the text, also written to ``fh`` if given.

    Ranged rows are split into a ``_lo``/``_hi`` pair.
    """
    names = [_name(n) for n in (model.col_names or [f"x{j}" for j in range(model.n_cols)])]
    row_names = [_name(n) for n in (model.row_names or [f"c{i}" for i in range(model.n_rows)])]
    out = io.StringIO()
    out.write(f"\\ {model.name}\n")
    out.write("Minimize\n")
    nz = np.flatnonzero(model.c)
    out.write(" obj: " + _expr(nz, model.c[nz], names) + "\n")
    out.write("Subject To\n")
    A = model.A.tocsr()
    for i in range(model.n_rows):
        start, end = A.indptr[i], A.indptr[i + 1]
        expr = _expr(A.indices[start:end], A.data[start:end], names)
        lo, hi = model.row_lo[i], model.row_hi[i]
        nm = row_names[i]
        if lo == hi:
            out.write(f" {nm}: {expr} = {_num(hi)}\n")
        elif math.isinf(lo):
            out.write(f" {nm}: {expr} <= {_num(hi)}\n")
        elif math.isinf(hi):
            out.write(f" {nm}: {expr} >= {_num(lo)}\n")
        else:
            out.write(f" {nm}_lo: {expr} >= {_num(lo)}\n")
            out.write(f" {nm}_hi: {expr} <= {_num(hi)}\n")
    out.write("Bounds\n")
    binaries, generals = [], []
    for j in range(model.n_cols):
        lo, hi = model.col_lo[j], model.col_hi[j]
        nm = names[j]
        if model.integer[j]:
            if lo == 0 and hi == 1:
                binaries.append(nm)
                continue
            generals.append(nm)
        if math.isinf(lo) and math.isinf(hi):
            out.write(f" {nm} free\n")
        elif lo == hi:
            out.write(f" {nm} = {_num(lo)}\n")
        else:
            lo_s = "-inf" if math.isinf(lo) else _num(lo)
            hi_s = "+inf" if math.isinf(hi) else _num(hi)
            out.write(f" {lo_s} <= {nm} <= {hi_s}\n")
    if binaries:
        out.write("Binaries\n")
        for nm in binaries:
            out.write(f" {nm}\n")
    if generals:
        out.write("Generals\n")
        for nm in generals:
            out.write(f" {nm}\n")
    out.write("End\n")
    text = out.getvalue()
    if fh is not None:
        fh.write(text)
    return text
