"""Brute-force nodal solve of the full ladder circuit.

Used only to cross-check :mod:`ladderline.ladder`.  The whole network is
assembled as one complex linear system (modified nodal analysis: node
voltages plus series-branch currents as unknowns, so zero-impedance series
branches are allowed) and solved directly with LU and partial pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularNetworkError
from .ladder import DamageCase, NetworkSpec, NodeResponse, _apply_damage, series_branch


@dataclass(frozen=True)
class DenseSolution:
    """Differential node voltages (nodes 0..n) and series currents.

    ``branch_currents[k]`` flows through the series branch of generation k+1,
    from node k toward node k+1.  ``load_current`` flows through ``z_out``.
    """

    node_voltages: np.ndarray
    branch_currents: np.ndarray
    load_current: complex
    source_current: complex
    residual: float
    kcl_residual: float


def _gen_constants(spec: NetworkSpec, damage: DamageCase):
    damage.validate_for(spec.n)
    lookup = damage.lookup()
    return [_apply_damage(spec.und, lookup, g) for g in range(1, spec.n + 1)]


def _solve(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SingularNetworkError(f"nodal matrix is singular: {exc}") from None
    if not np.all(np.isfinite(x)):
        raise SingularNetworkError("nodal solve produced non-finite values")
    residual = float(np.linalg.norm(A @ x - b) / np.linalg.norm(b))
    return x, residual


def nodal_solve(spec: NetworkSpec, damage: DamageCase = DamageCase(), two_rail: bool = False) -> DenseSolution:
    """Drive the transmitter with 1 V and solve every node of the ladder.

    With ``two_rail`` the top and bottom rails are assembled separately
    (bottom transmitter terminal grounded); otherwise each generation's two
    series branches are summed into one.
    """
    if two_rail:
        return _solve_two_rail(spec, damage)
    return _solve_collapsed(spec, damage)


class _Indexer:
    """Assigns matrix columns to named unknowns in allocation order."""

    def __init__(self) -> None:
        self.index: dict[tuple, int] = {}

    def __call__(self, *key) -> int:
        return self.index.setdefault(key, len(self.index))

    def __len__(self) -> int:
        return len(self.index)


def _solve_collapsed(spec: NetworkSpec, damage: DamageCase) -> DenseSolution:
    n, s = spec.n, spec.s
    gens = _gen_constants(spec, damage)
    # Unknowns are numbered from the receiver end so that elimination runs
    # receiver -> transmitter; strongly attenuated node voltages keep their
    # relative accuracy that way.
    col = _Indexer()
    for g in range(n, 0, -1):
        col("V", g)
        col("I", g)
    col("V", 0)
    col("Isrc")
    size = len(col)
    A = np.zeros((size, size), dtype=complex)
    b = np.zeros(size, dtype=complex)
    row = 0
    for g in range(n, 0, -1):
        gc = gens[g - 1]
        Y = gc.shunt_conductance + gc.c * s
        # KCL at node g: I_g in, shunt and I_{g+1} (or the load) out
        A[row, col("I", g)] = 1.0
        A[row, col("V", g)] = -Y
        if g < n:
            A[row, col("I", g + 1)] = -1.0
        else:
            A[row, col("V", g)] -= 1.0 / spec.z_out
        row += 1
        # series branch: V_{g-1} - V_g - S_g I_g = 0
        A[row, col("V", g - 1)] = 1.0
        A[row, col("V", g)] = -1.0
        A[row, col("I", g)] = -series_branch(gc, s)
        row += 1
    A[row, col("Isrc")] = 1.0
    A[row, col("I", 1)] = -1.0
    row += 1
    A[row, col("V", 0)] = 1.0
    b[row] = 1.0
    row += 1
    assert row == size

    x, residual = _solve(A, b)
    V = np.array([x[col("V", g)] for g in range(n + 1)])
    I = np.array([x[col("I", g)] for g in range(1, n + 1)])
    load = V[n] / spec.z_out
    kcl = _kcl_residual(V, I, load, gens, s)
    return DenseSolution(V, I, complex(load), complex(x[col("Isrc")]), residual, kcl)


def _solve_two_rail(spec: NetworkSpec, damage: DamageCase) -> DenseSolution:
    n, s = spec.n, spec.s
    gens = _gen_constants(spec, damage)
    # top/bottom rail potentials and series currents per generation, receiver first;
    # the bottom transmitter terminal is the reference (Vb_0 = 0)
    col = _Indexer()
    for g in range(n, 0, -1):
        col("Vt", g)
        col("Vb", g)
        col("It", g)
        col("Ib", g)
    col("Vt", 0)
    col("Isrc")
    size = len(col)
    A = np.zeros((size, size), dtype=complex)
    b = np.zeros(size, dtype=complex)
    yl = 1.0 / spec.z_out
    row = 0

    def stamp_vb(r: int, g: int, value: complex) -> None:
        if g > 0:
            A[r, col("Vb", g)] += value

    for g in range(n, 0, -1):
        gc = gens[g - 1]
        Y = gc.shunt_conductance + gc.c * s
        if g == n:
            Y = Y + yl
        # top node g: It_g in, shunt (+ load) and It_{g+1} out
        A[row, col("It", g)] = 1.0
        A[row, col("Vt", g)] = -Y
        stamp_vb(row, g, Y)
        if g < n:
            A[row, col("It", g + 1)] = -1.0
        row += 1
        # bottom node g: shunt (+ load) and Ib_{g+1} in, Ib_g out toward the transmitter
        A[row, col("Vt", g)] = Y
        stamp_vb(row, g, -Y)
        A[row, col("Ib", g)] = -1.0
        if g < n:
            A[row, col("Ib", g + 1)] = 1.0
        row += 1
        # top series: Vt_{g-1} - Vt_g = (r1 + l1 s) It_g
        A[row, col("Vt", g - 1)] = 1.0
        A[row, col("Vt", g)] = -1.0
        A[row, col("It", g)] = -(gc.r1 + gc.l1 * s)
        row += 1
        # bottom series: Vb_g - Vb_{g-1} = (r2 + l2 s) Ib_g
        stamp_vb(row, g, 1.0)
        stamp_vb(row, g - 1, -1.0)
        A[row, col("Ib", g)] = -(gc.r2 + gc.l2 * s)
        row += 1
    A[row, col("Isrc")] = 1.0
    A[row, col("It", 1)] = -1.0
    row += 1
    A[row, col("Vt", 0)] = 1.0
    b[row] = 1.0
    row += 1
    assert row == size

    x, residual = _solve(A, b)
    Vt = np.array([x[col("Vt", g)] for g in range(n + 1)])
    Vb = np.array([0.0] + [x[col("Vb", g)] for g in range(1, n + 1)])
    V = Vt - Vb
    It = np.array([x[col("It", g)] for g in range(1, n + 1)])
    load = V[n] * yl
    kcl = _kcl_residual(V, It, load, gens, s)
    return DenseSolution(V, It, complex(load), complex(x[col("Isrc")]), residual, kcl)


def _kcl_residual(V, I, load, gens, s) -> float:
    """Largest current mismatch at nodes 1..n relative to the largest branch current."""
    n = len(I)
    worst = 0.0
    for g in range(1, n + 1):
        gc = gens[g - 1]
        leaving = (gc.shunt_conductance + gc.c * s) * V[g] + (I[g] if g < n else load)
        worst = max(worst, abs(I[g - 1] - leaving))
    scale = max(float(np.max(np.abs(I))), abs(load))
    return worst / scale if scale else worst


def extract_responses(sol: DenseSolution, spec: NetworkSpec) -> list[NodeResponse]:
    """Per-node (Z_g, H_g) from a dense solution, node 0 first."""
    V = sol.node_voltages
    into_rest = np.append(sol.branch_currents, sol.load_current)
    out = []
    for g in range(spec.n + 1):
        if V[g] == 0:
            raise SingularNetworkError(f"node {g} voltage is zero", g)
        if into_rest[g] == 0:
            raise SingularNetworkError(f"no current enters the subnetwork at node {g}", g)
        Z = spec.z_out if g == spec.n else complex(V[g] / into_rest[g])
        H = 1.0 + 0j if g == spec.n else complex(V[spec.n] / V[g])
        out.append(NodeResponse(Z, H))
    return out


def dense_responses(spec: NetworkSpec, damage: DamageCase = DamageCase(), two_rail: bool = False) -> list[NodeResponse]:
    return extract_responses(nodal_solve(spec, damage, two_rail=two_rail), spec)
