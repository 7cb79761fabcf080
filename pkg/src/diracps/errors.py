"""Exception types shared across the solver modules."""


class ConfigError(ValueError):
    """Invalid configuration: bad grid sizes, violated sampling guards,
    inconsistent grid pairings, unusable potential kinds."""


class PreconditionError(ValueError):
    """An operation was called with inputs outside its contract
    (off-shell velocity, unnormalized state, incompatible runs, ...)."""


class IntegrityError(RuntimeError):
    """A numerical invariant that should hold to round-off was violated
    mid-run; results downstream of this point are not trustworthy."""
