DEFAULT_ORACLE_LIMIT = 61
ORACLE_HARD_CAP = 211
DEFAULT_SEED = 20140101
DEFAULT_JOBS = 1
DEFAULT_FORMAT = "json"
TENSOR_LIMIT = 31
MIXED_MATRIX_LIMIT = 61
BOUNDS_PMAX_CAP = 10**5
EXACT_V6_LIMIT = 499
TABLE_PMAX = 101
MOMENTS_NMAX_CAP = 12
FLOAT_DIGITS = 12
SCHEMA_VERSION = 1
TIME_ZONE = "UTC"
DEFAULT_DATETIME_FORMAT = "%Y-%m-%d %H:%M:%S"
TRANSFORM_SAMPLES = 200
