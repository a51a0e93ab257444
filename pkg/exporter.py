"""CSV export of tables, grids, phase-space series and operator matrices."""

import os
import re

import numpy as np
import pandas as pd

import config
from errors import ConfigError
from kernel_engine.grid import KernelGrid


def write_frame(df: pd.DataFrame, filepath: str = None) -> str:
    """Write a DataFrame as CSV; returns the text when no path is given."""
    if filepath is None:
        return df.to_csv(index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n")
    directory = os.path.dirname(os.path.abspath(filepath))
    os.makedirs(directory, exist_ok=True)
    df.to_csv(filepath, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n")
    return filepath


def alpha_frame(table) -> pd.DataFrame:
    """(m, n, value) rows of the nonzero entries of an AlphaTable."""
    rows = [
        {"m": int(m), "n": int(n), "value": float(table.values[m, n])}
        for m, n in zip(*np.nonzero(table.values))
    ]
    return pd.DataFrame(rows, columns=["m", "n", "value"])


def alpha_orders_frame(table) -> pd.DataFrame:
    rows = [
        {"s": int(s), "m": int(m), "j": int(j), "value": float(table.values[s, m, j])}
        for s, m, j in zip(*np.nonzero(table.values))
    ]
    return pd.DataFrame(rows, columns=["s", "m", "j", "value"])


def phase_space_frame(series) -> pd.DataFrame:
    rows = [
        {"m": t.m, "j": t.j, "hbar_power": t.hbar_power, "coeff": t.coeff}
        for t in series.terms
    ]
    return pd.DataFrame(rows, columns=["m", "j", "hbar_power", "coeff"])


def matrix_frame(K) -> pd.DataFrame:
    i, j = np.indices(K.entries.shape)
    return pd.DataFrame({
        "i": i.ravel(),
        "j": j.ravel(),
        "re": K.entries.real.ravel(),
        "im": K.entries.imag.ravel(),
    })


def grid_frame(grid: KernelGrid) -> pd.DataFrame:
    i, j = np.indices(grid.values.shape)
    return pd.DataFrame({
        "i": i.ravel(),
        "j": j.ravel(),
        "u": grid.u_nodes[i.ravel()],
        "v": grid.v_nodes[j.ravel()],
        "value": grid.values.ravel(),
    })


def grid_header(grid: KernelGrid) -> str:
    return f"# order={grid.order_n},U={grid.U!r},V={grid.V!r},nodes={len(grid.u_nodes)},signed={int(grid.signed)}\n"


def write_grid_csv(grid: KernelGrid, filepath: str) -> str:
    """Header line (order, U, V, nodes) then (i, j, u, v, value) rows."""
    body = write_frame(grid_frame(grid))
    directory = os.path.dirname(os.path.abspath(filepath))
    os.makedirs(directory, exist_ok=True)
    with open(filepath, "w", encoding="utf-8", newline="\n") as f:
        f.write(grid_header(grid))
        f.write(body)
    return filepath


_HEADER = re.compile(r"#\s*order=(\d+),U=([^,]+),V=([^,]+),nodes=(\d+)(?:,signed=(\d))?")


def read_grid_csv(filepath: str, potential_id: str = "") -> KernelGrid:
    with open(filepath, "r", encoding="utf-8") as f:
        header = f.readline()
    match = _HEADER.match(header)
    if not match:
        raise ConfigError(f"{filepath} does not start with a kernel grid header")
    order, nodes = int(match.group(1)), int(match.group(4))
    df = pd.read_csv(filepath, comment="#", float_precision="round_trip")
    values = np.zeros((nodes, nodes))
    values[df["i"].to_numpy(), df["j"].to_numpy()] = df["value"].to_numpy()
    u_nodes = df.loc[df["j"] == 0].sort_values("i")["u"].to_numpy()
    v_nodes = df.loc[df["i"] == 0].sort_values("j")["v"].to_numpy()
    return KernelGrid(order, u_nodes, v_nodes, values, config.INTERP_DEGREE, potential_id)
