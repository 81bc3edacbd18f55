"""Exception types raised across the simulator."""


class RailMarketError(Exception):
    """Base class for all simulator errors."""


class ScenarioSyntaxError(RailMarketError):
    """The scenario document is not well-formed YAML."""


class ScenarioValidationError(RailMarketError):
    """A scenario invariant is violated.

    ``path`` is the dotted location of the offending key, e.g.
    ``services[0].prices[1].price``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class UnknownPresetError(RailMarketError):
    """Requested preset name is not shipped with the package."""


class NotOwnerError(RailMarketError):
    """A price action touched a service operated by another agent."""


class OutOfRangeError(RailMarketError):
    """A discrete action level is outside [0, 10]."""


class SoldOutError(RailMarketError):
    """No tickets left in the (origin, destination, seat) cell."""


class UnknownCellError(RailMarketError):
    """The (origin, destination, seat) cell does not exist on the service."""


class UnknownMarketError(RailMarketError):
    """The origin-destination pair is not a market of the scenario."""


class UnknownAgentError(RailMarketError):
    """Agent id is not part of the scenario."""


class AlreadyTerminalError(RailMarketError):
    """step() was called after the episode reached its horizon."""


class MalformedActionError(RailMarketError):
    """Joint action has a wrong agent set, shape, or out-of-range values."""


class IncompatibleSpaceError(RailMarketError):
    """Policy cannot act on the environment's action space mode."""


class EmptyTraceError(RailMarketError):
    """No episode traces were supplied to an aggregation."""


class DegenerateInputError(RailMarketError):
    """Metric input carries no information (e.g. all-zero profits)."""


class MalformedWeightsError(RailMarketError):
    """Attention weights are negative or do not normalise."""


class IncompleteEpisodeError(RailMarketError):
    """Episode report requested before the episode reached its horizon."""


class InstanceRunError(RailMarketError):
    """An environment or policy error inside a harness run, attributed to
    its (base seed, instance, episode)."""
