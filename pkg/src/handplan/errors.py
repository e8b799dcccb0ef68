"""Exception hierarchy.

Everything raised on purpose by the library derives from ``HandPlanError``.
``ScenarioFileError`` covers malformed input documents; the CLI maps it to
exit status 2 and every other ``HandPlanError`` to exit status 1.
"""


class HandPlanError(Exception):
    """Base class for library errors."""


class GeometryError(HandPlanError, ValueError):
    pass


class ChordTooLong(GeometryError):
    """A chord longer than the circle's diameter was requested."""


class DegenerateTriangle(GeometryError):
    """Three side lengths violate the triangle inequality."""


class ZeroVector(GeometryError):
    pass


class OffCircle(GeometryError):
    """A joint position does not sit at link length from its pivot."""


class ContactAtCenter(GeometryError):
    """A rolling contact update was asked for a contact at the object center."""


class DivergentIntegral(HandPlanError, ValueError):
    pass


class PlanningError(HandPlanError):
    """Failure while searching for finger configurations."""


class Unreachable(PlanningError):
    def __init__(self, finger_id, distance=None, reach=None):
        self.finger_id = finger_id
        self.distance = distance
        self.reach = reach
        msg = f"finger {finger_id}: contact target is unreachable"
        if distance is not None:
            msg += f" (distance {distance:.6g} outside reach {reach[0]:.6g}..{reach[1]:.6g})"
        super().__init__(msg)


class BudgetExhausted(PlanningError):
    """Sampler ran out of attempts; partial solutions and stats are attached."""

    def __init__(self, finger_id, solutions, stats):
        self.finger_id = finger_id
        self.solutions = solutions
        self.stats = stats
        super().__init__(
            f"finger {finger_id}: {len(solutions)} of {stats.target_count} configurations "
            f"after {stats.attempts} attempts ({stats.describe_rejections()})"
        )


class NoFingers(PlanningError, ValueError):
    pass


class DegenerateCosts(PlanningError, ValueError):
    pass


class TooFewSamples(PlanningError, ValueError):
    pass


class InfeasibleGrasp(PlanningError):
    pass


class ScenarioFileError(HandPlanError):
    pass


class ParseError(ScenarioFileError):
    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = str(path) if path is not None else "<scenario>"
        if line is not None:
            where += f":{line}:{column}"
        super().__init__(f"{where}: {message}")


class ValidationError(ScenarioFileError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
