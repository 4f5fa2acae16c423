"""Exception types shared across the package."""


class IncestlessError(Exception):
    """Base class for package-specific errors."""


class GraphFormatError(IncestlessError):
    """Adjacency input is not a square binary matrix, or a graph file is malformed."""


class DagViolationError(IncestlessError):
    """Adjacency matrix has entries on or below the diagonal (back-in-time edges)."""

    def __init__(self, violations):
        self.violations = list(violations)
        entries = ", ".join(f"({i},{j})" for i, j in self.violations)
        super().__init__(f"not strictly upper triangular; nonzero at {entries}")


class ConfigError(IncestlessError):
    """Scenario or topology configuration is inconsistent."""


class DegenerateEvidenceError(IncestlessError):
    """An observation has zero probability under the support of the public belief."""


class ZeroProbabilityActionError(IncestlessError):
    """An action cannot be produced by any observation given the public belief."""


class AvailabilityError(IncestlessError):
    """A log-belief required by a nonzero incest-removal weight was not received."""

    def __init__(self, node, missing):
        self.node = node
        self.missing = sorted(missing)
        super().__init__(
            f"node {node}: required log-beliefs missing from nodes {self.missing} "
            "(topological constraint violated at runtime)"
        )


class SignedInfinityError(IncestlessError):
    """A negative weight was applied to a -inf log-likelihood entry."""


class ConstraintViolationError(IncestlessError):
    """Removal-mode run requested on a graph that violates the topological constraint."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            "topological constraint violated at node(s) "
            + ", ".join(str(n) for n in sorted(report))
        )
