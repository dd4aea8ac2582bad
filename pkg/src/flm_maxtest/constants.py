import numpy as np

# Hypothesis test defaults
DEFAULT_SIGNIFICANCE = 0.05
DEFAULT_BOOTSTRAP_REPLICATES = 1000
MIN_BOOTSTRAP_REPLICATES = 100
DEFAULT_TAU_GRID = tuple(round(0.1 * k, 1) for k in range(10))
DEFAULT_INNER_BOOTSTRAP_REPLICATES = 250

# Bootstrap replicates drawn from one RNG stream
BOOTSTRAP_BLOCK_SIZE = 1000

# Numerical tolerances
DEGENERATE_SD_RATIO = 1e-12
EIGENVALUE_CUTOFF_RATIO = 1e-12
PSD_TOLERANCE_RATIO = 1e-10
GRID_WEIGHT_RTOL = 1e-12

# Simulation defaults
DEFAULT_GRID_SIZE = 101
DEFAULT_DOMAIN = (0.0, 1.0)
DEFAULT_K_TRUNC = 100
DEFAULT_Q = 5
DEFAULT_NOISE_TERMS = 50
DEFAULT_NOISE_DECAY = 1.5
VECTOR_PREDICTOR_DECAY = 1.5
MEAN_RESPONSE = 1.0

# Study defaults
DEFAULT_R_GRID = tuple(round(0.1 * k, 1) for k in range(11))
DEFAULT_REPLICATIONS = 1000

# Activity profiles
MINUTES_PER_DAY = 1440
MAX_ACTIVITY_DAYS = 7
MAX_ACTIVITY_INTENSITY = 32767
THRESHOLDS_CHILDREN = np.arange(1, 1001, 10)
THRESHOLDS_YOUNG_ADULTS = np.arange(1, 3001, 10)

ENV_WORKERS = "FLM_MAXTEST_WORKERS"
