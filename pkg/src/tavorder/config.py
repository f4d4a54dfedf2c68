"""Default knobs. Everything here can be overridden per call or from the CLI."""

from dataclasses import dataclass, field

# Largest primes below 2**61; fixed so that screening is reproducible.
SCREEN_PRIMES = (2305843009213693951, 2305843009213693921)

ORDER_BOUND = 10_000
COSET_TABLE_BOUND = 1_000_000
WITNESS_SUBGROUP_BOUND = 200
RECERTIFY_FRACTION = 0.05
DEFAULT_SEED = 20240601

# Matrices at most this large use the in-house Bareiss kernel; larger ones go to FLINT.
SMALL_DET_SIZE = 12


@dataclass(frozen=True)
class EngineConfig:
    screen_primes: tuple = SCREEN_PRIMES
    seed: int = DEFAULT_SEED
    threads: int = 1
    recertify_fraction: float = RECERTIFY_FRACTION
    witness_bound: int = WITNESS_SUBGROUP_BOUND
    extra: dict = field(default_factory=dict)
