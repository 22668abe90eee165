"""Global defaults for searches, sampling and reports."""

DEFAULT_SEED = 20240917
DEFAULT_SEARCH_BUDGET = 20_000_000
DEFAULT_QBF_MAX_VARIABLES = 64

# Sampling universes for the randomized lemma checks.
UNIVERSE_3_LISTS = 9
UNIVERSE_4_LISTS = 12
HALF_PROPAGATOR_UNIVERSE = 7
PRISM_UNIVERSE = 5
REDUCTION_SAMPLE_UNIVERSE = 5

# Trial counts used by verify-paper when neither the config nor --trials overrides them.
DEFAULT_TRIALS = {
    "L42": 10_000,
    "L43": 10_000,
    "L44": 1_000,
    "L47": 10_000,
    "HP2": 100_000,
    "HP3": 100_000,
    "OPS": 100,
    "E2E": 1_000,
}

MAX_ATLAS_ORDER = 7
LEMMA41_MAX_UNIVERSE = 5

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2
EXIT_BUDGET = 3
EXIT_INTERNAL_ERROR = 4
