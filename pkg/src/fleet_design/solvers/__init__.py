"""Fleet design solvers.

Every method turns a :class:`~fleet_design.models.problem.Problem` into a
:class:`SolverOutput`.  Use :func:`get_solver` to obtain the solver for a
given :class:`~fleet_design.models.enums.Method`.
"""

from __future__ import annotations

from fleet_design.models.enums import Method
from fleet_design.solvers.baselines import GreedySolver, RandomFleetSolver
from fleet_design.solvers.base import BaseSolver, SolverOutput
from fleet_design.solvers.exact import OracleLimits, OracleSolver
from fleet_design.solvers.lns import LnsSolver

__all__ = [
    "BaseSolver",
    "GreedySolver",
    "LnsSolver",
    "OracleLimits",
    "OracleSolver",
    "RandomFleetSolver",
    "SolverOutput",
    "get_solver",
]

# ---------------------------------------------------------------------------
# Method -> solver class mapping
# ---------------------------------------------------------------------------

_SOLVER_MAP: dict[Method, type[BaseSolver]] = {
    Method.LNS: LnsSolver,
    Method.GREEDY: GreedySolver,
    Method.RANDOM: RandomFleetSolver,
    Method.ORACLE: OracleSolver,
}


def get_solver(method: Method | str, *, limits: OracleLimits | None = None) -> BaseSolver:
    """Return a solver instance for *method*.

    Parameters
    ----------
    method:
        A :class:`Method` or its string value.
    limits:
        Size guards for the oracle; ignored by the other methods.

    Raises
    ------
    ValueError
        If *method* is not supported.
    """
    try:
        key = Method(method)
    except ValueError:
        key = None
    solver_cls = _SOLVER_MAP.get(key) if key is not None else None
    if solver_cls is None:
        raise ValueError(
            f"Unsupported method: {method!r}. "
            f"Supported methods: {sorted(m.value for m in _SOLVER_MAP)}"
        )
    if solver_cls is OracleSolver:
        return OracleSolver(limits)
    return solver_cls()
