from typing import Dict, Tuple

SCHEMA_VERSION = 1

CPI_BASE_YEAR = 2010
MIN_YEAR = 1950
MAX_YEAR = 2030

BDT = "BDT"
USD = "USD"
RS = "Rs"
CURRENCIES: Tuple[str, ...] = (BDT, USD, RS)

MILLION = 1_000_000
KG_PER_TON = 1000
KW_PER_MW = 1000
KG_PER_MOUND = 37.3242

# Quantity units accepted on household loss line items.
UNITS: Tuple[str, ...] = ("kg", "mound", "decimal", "count")

BUNDLED_LIFE_EXPECTANCY: Dict[int, float] = {1987: 56.0, 1994: 61.0}

CONFIG_ENV_VAR = "HYDRO_CBA_CONFIG"
SENTRY_ENV_VAR = "SENTRY_DSN"
