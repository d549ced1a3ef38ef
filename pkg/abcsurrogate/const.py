"""ABC surrogate library constants."""

from typing import Final

from packaging.version import Version

ABC_ACCEPTANCE_RATE: Final[str] = "acceptance-rate"
ABC_ACCEPTED: Final[str] = "accepted"
ABC_CONFIG: Final[str] = "config"
ABC_DEGENERATE: Final[str] = "degenerate"
ABC_EPSILON: Final[str] = "epsilon"
ABC_ESS: Final[str] = "ess"
ABC_EXTRAPOLATED: Final[str] = "extrapolated"
ABC_ITERATIONS: Final[str] = "iterations"
ABC_METHOD: Final[str] = "method"
ABC_NAMES: Final[str] = "names"
ABC_SAMPLER: Final[str] = "sampler"
ABC_SEED: Final[str] = "seed"
ABC_SYNTHETIC_SETS: Final[str] = "synthetic-sets"
ABC_VERSIONS: Final[str] = "versions"
ABC_WALL_SECONDS: Final[str] = "wall-seconds"

CFG_BANDWIDTH: Final[str] = "bandwidth"
CFG_BANDWIDTH_RULE: Final[str] = "bandwidth-rule"
CFG_BLOCK_SIZES: Final[str] = "block-sizes"
CFG_BURN_IN: Final[str] = "burn-in"
CFG_C: Final[str] = "c"
CFG_COLS: Final[str] = "cols"
CFG_CONSTRAINTS: Final[str] = "constraints"
CFG_DESIGN: Final[str] = "design"
CFG_DOF: Final[str] = "dof"
CFG_DRAWS: Final[str] = "draws"
CFG_EPSILON: Final[str] = "epsilon"
CFG_FAMILY: Final[str] = "family"
CFG_INIT: Final[str] = "init"
CFG_INNER: Final[str] = "inner"
CFG_ITERATIONS: Final[str] = "iterations"
CFG_KIND: Final[str] = "kind"
CFG_LIKELIHOOD_SD: Final[str] = "likelihood-sd"
CFG_LOWER: Final[str] = "lower"
CFG_MAX_ITERATIONS: Final[str] = "max-iterations"
CFG_MEAN: Final[str] = "mean"
CFG_METHOD: Final[str] = "method"
CFG_MIN_ACCEPTED: Final[str] = "min-accepted"
CFG_MODEL: Final[str] = "model"
CFG_N: Final[str] = "n"
CFG_NOISE: Final[str] = "noise"
CFG_ORDERS: Final[str] = "orders"
CFG_OUTER: Final[str] = "outer"
CFG_PATH: Final[str] = "path"
CFG_PILOT_SIZE: Final[str] = "pilot-size"
CFG_PROBS: Final[str] = "probs"
CFG_PROPOSAL_SCALE: Final[str] = "proposal-scale"
CFG_QUANTILE: Final[str] = "quantile"
CFG_RIDGE: Final[str] = "ridge"
CFG_ROWS: Final[str] = "rows"
CFG_SAMPLER: Final[str] = "sampler"
CFG_SCALE: Final[str] = "scale"
CFG_SCHEMA: Final[str] = "schema"
CFG_SD: Final[str] = "sd"
CFG_SEED: Final[str] = "seed"
CFG_SPAN: Final[str] = "span"
CFG_STATES: Final[str] = "states"
CFG_SWEEPS: Final[str] = "sweeps"
CFG_SYNTHETIC_SETS: Final[str] = "synthetic-sets"
CFG_SYNTHETIC_SIZE: Final[str] = "synthetic-size"
CFG_TRUTH: Final[str] = "truth"
CFG_UPPER: Final[str] = "upper"
CFG_VALUES: Final[str] = "values"
CFG_WORKERS: Final[str] = "workers"

SECTION_BOOTSTRAP: Final[str] = "bootstrap"
SECTION_COUPLED: Final[str] = "coupled"
SECTION_DISTANCE: Final[str] = "distance"
SECTION_EMPIRICAL: Final[str] = "empirical"
SECTION_KERNEL: Final[str] = "kernel"
SECTION_MH: Final[str] = "mh"
SECTION_MODEL: Final[str] = "model"
SECTION_OBSERVED: Final[str] = "observed"
SECTION_PRIOR: Final[str] = "prior."
SECTION_RUN: Final[str] = "run"
SECTION_STATISTIC: Final[str] = "statistic"
SECTION_SYNTHETIC: Final[str] = "synthetic"
SECTION_TOLERANCE: Final[str] = "tolerance"

CONFIG_SCHEMA_VERSION: Final[Version] = Version("1.0")

CSV_FLOAT_FORMAT: Final[str] = "%.16e"
CSV_NORM_WEIGHT: Final[str] = "norm_weight"
CSV_RAW_WEIGHT: Final[str] = "raw_weight"

DEFAULT_BL_INNER: Final[int] = 1000
DEFAULT_BL_OUTER: Final[int] = 50
DEFAULT_BL_SPAN: Final[float] = 0.5
DEFAULT_CHUNK_SIZE: Final[int] = 4096
DEFAULT_COUPLING_DRAWS: Final[int] = 1
DEFAULT_GK_C: Final[float] = 0.8
DEFAULT_ITERATIONS: Final[int] = 10000
DEFAULT_MAX_ITERATIONS_FACTOR: Final[int] = 100
DEFAULT_PILOT_SIZE: Final[int] = 1000
DEFAULT_POTTS_SWEEPS: Final[int] = 200
DEFAULT_QUANTILE: Final[float] = 0.01
DEFAULT_RIDGE: Final[float] = 1e-8
DEFAULT_SCALE_PILOT_SIZE: Final[int] = 100
DEFAULT_SL_SETS: Final[int] = 40
DEFAULT_SUMMARY_PROBS: Final[tuple[float, ...]] = (0.025, 0.5, 0.975)
DEFAULT_TOLERANCE_GRID: Final[tuple[float, ...]] = (
    0.001,
    0.005,
    0.01,
    0.05,
    0.1,
    0.2,
    0.5,
)
DEFAULT_T_DOF: Final[float] = 5.0
DEFAULT_WORKERS: Final[int] = 1

BL_MIN_INNER: Final[int] = 100
BL_MIN_OUTER: Final[int] = 10
BL_MIN_PAIRS: Final[int] = 3

EL_GRADIENT_TOL: Final[float] = 1e-10
EL_MAX_HALVINGS: Final[int] = 60
EL_MAX_ITERATIONS: Final[int] = 100
EL_SUM_TOL: Final[float] = 1e-8

EXIT_DEGENERATE: Final[int] = 2
EXIT_FAILURE: Final[int] = 1
EXIT_OK: Final[int] = 0

FILE_DIAGNOSTICS: Final[str] = "diagnostics.csv"
FILE_MANIFEST: Final[str] = "manifest.json"
FILE_PILOT: Final[str] = "pilot.csv"
FILE_POSTERIOR: Final[str] = "posterior.csv"
FILE_SUMMARY: Final[str] = "summary.csv"

IDENTITY_MAX_SIZE: Final[int] = 100

MAD_FLOOR: Final[float] = 1e-12
MIN_SCALE_PILOTS: Final[int] = 20

POTTS_EXACT_MAX_CONFIGS: Final[int] = 2_000_000

WEIGHT_SUM_TOL: Final[float] = 1e-9
