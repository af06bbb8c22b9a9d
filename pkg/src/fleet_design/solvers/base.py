"""Abstract solver interface and the shared output structure."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING

from fleet_design.models.enums import Method
from fleet_design.models.params import LnsParams
from fleet_design.models.problem import Problem, Robot
from fleet_design.models.solution import Solution
from fleet_design.pathing import TravelSet

if TYPE_CHECKING:
    from fleet_design.solvers.baselines import GreedyTrace
    from fleet_design.solvers.lns import IterationRecord


@dataclass
class SolverOutput:
    """What every solver hands back to the CLI and the harness.

    Attributes
    ----------
    method:
        The solver that produced the result.
    solution:
        One tour per base-fleet robot.
    fleet:
        Robots with nonempty tours (for the baselines: the bought fleet).
    reward:
        Number of tasks serviced.
    iterations:
        LNS iterations run by the outermost search (0 for the oracle).
    log:
        Iteration log of the fleet LNS, empty for other methods.
    trace:
        Greedy step trace, ``None`` for other methods.
    """

    method: Method
    solution: Solution
    fleet: tuple[Robot, ...]
    reward: int
    iterations: int = 0
    log: tuple[IterationRecord, ...] = ()
    trace: GreedyTrace | None = None


class BaseSolver(ABC):
    """Abstract base class for the fleet design methods.

    Subclasses set the class-level ``method`` and implement :meth:`solve`.
    """

    method: Method

    @abstractmethod
    def solve(
        self,
        problem: Problem,
        params: LnsParams,
        *,
        travel_set: TravelSet | None = None,
    ) -> SolverOutput:
        """Design a fleet and its tours for *problem*.

        Parameters
        ----------
        problem:
            Instance to solve.
        params:
            LNS parameters; baselines use them for their inner tour search
            and take the run seed from ``params.seed``.
        travel_set:
            Precomputed travel matrices, built on demand when omitted.
        """
