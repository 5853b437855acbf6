"""Exception hierarchy.

Every error carries a stable string ``code`` and the process ``exit_code``
the command-line front end reports for it.
"""

from __future__ import annotations


class BBInterpError(Exception):
    code = "error"
    exit_code = 1

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "exit_code": self.exit_code}


class ParseError(BBInterpError):
    code = "parse_error"
    exit_code = 2


class ValidationError(BBInterpError, ValueError):
    code = "validation_error"
    exit_code = 2


class NodeError(ValidationError):
    """Duplicate nodes or nodes outside [0, 1]."""

    code = "node_error"


class PartitionError(ValidationError):
    """Node groups violate the collinear-partition requirements."""

    code = "partition_error"


class SolverError(BBInterpError):
    code = "solver_error"
    exit_code = 3


class GeometryError(SolverError):
    code = "geometry_error"


class SolvabilityError(SolverError):
    """A node lies (numerically) on a line fitted to an earlier group."""

    code = "solvability_error"


class SingularMatrixError(SolverError):
    code = "singular_matrix"


class ConvergenceError(SolverError):
    code = "no_convergence"


class ResourceError(BBInterpError):
    code = "resource_error"
    exit_code = 4
