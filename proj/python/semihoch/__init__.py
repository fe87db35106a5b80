from ._semihoch import (
    ResourceBound,
    SchemaError,
    SemihochError,
    ValidationError,
    band_class,
    betti,
    commands,
    disintegration,
    free_diagonal,
    free_semilattice,
    run,
    semigroup_betti,
    suites,
)

__all__ = [
    "ResourceBound",
    "SchemaError",
    "SemihochError",
    "ValidationError",
    "band_class",
    "betti",
    "commands",
    "disintegration",
    "free_diagonal",
    "free_semilattice",
    "run",
    "semigroup_betti",
    "suites",
]
