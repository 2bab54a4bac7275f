import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Graph sizes
MAX_VERTICES = int(os.getenv("BOXCERT_MAX_VERTICES", 4096))
COLORING_EXACT_LIMIT = int(os.getenv("BOXCERT_COLORING_EXACT_LIMIT", 16))
ISOMORPHISM_LIMIT = int(os.getenv("BOXCERT_ISOMORPHISM_LIMIT", 10))

# Exact searches
ORACLE_BOX_LIMIT = int(os.getenv("BOXCERT_ORACLE_BOX_LIMIT", 12))
ORACLE_CUBE_LIMIT = int(os.getenv("BOXCERT_ORACLE_CUBE_LIMIT", 10))
PDIM_LIMIT = int(os.getenv("BOXCERT_PDIM_LIMIT", 24))
HYPERCUBE_LIMIT = int(os.getenv("BOXCERT_HYPERCUBE_LIMIT", 5))
DEFAULT_KMAX = int(os.getenv("BOXCERT_DEFAULT_KMAX", 6))

# Set families
FAMILY_RETRIES = int(os.getenv("BOXCERT_FAMILY_RETRIES", 64))
FAMILY_EXHAUSTIVE_LIMIT = int(os.getenv("BOXCERT_FAMILY_EXHAUSTIVE_LIMIT", 16))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("LOG_FILE")
