"""Exception hierarchy shared across the package."""


class ScarlabError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ScarlabError):
    """Invalid run configuration or user input (CLI exit code 2)."""


class NumericalError(ScarlabError):
    """Numerical failure during a pipeline stage (CLI exit code 3)."""


class EmptySectorError(ScarlabError):
    """No basis configuration satisfies the requested constraint."""


class TooManySitesError(ScarlabError):
    """Chain length exceeds the configured maximum."""


class SectorEscapeError(ScarlabError):
    """An operator maps a configuration outside its sector."""


class NotInSectorError(ScarlabError):
    """A requested product state does not belong to the sector."""


class TooLargeError(ScarlabError):
    """Dimension exceeds the dense-matrix threshold."""


class NonHermitianError(NumericalError):
    """Operator flagged Hermitian fails the Hermiticity check."""


class SectorMismatchError(ScarlabError):
    """Two objects live over different sector bases."""


class NotSubsetError(ScarlabError):
    """Subspace configurations are not contained in the sector."""


class BadCutError(ScarlabError):
    """Entanglement cut outside the open interval (0, n)."""


class ZeroStateError(ScarlabError):
    """Raising-operator power annihilates the vacuum."""


class TooFewStatesError(ScarlabError):
    """Not enough states for the requested statistic."""


class NoScarsError(ScarlabError):
    """Dataset generation requires at least one scar index."""


class EmptyBatchError(ScarlabError):
    """Loss/gradient evaluation on an empty batch."""


class DimensionMismatchError(ScarlabError):
    """Input state dimension incompatible with the circuit."""


class DegenerateFitError(ScarlabError):
    """Extrapolation fit with degenerate abscissae."""


class IncompatibleSectorError(ScarlabError):
    """Quasiparticle subspace incompatible with the given sector."""
