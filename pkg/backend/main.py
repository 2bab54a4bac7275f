import logging
import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

from app.api import run  # noqa: E402
from app.config import LOG_FILE, LOG_LEVEL  # noqa: E402

# Configure logging; stdout is reserved for command output
handlers = [logging.StreamHandler(sys.stderr)]
if LOG_FILE:
    handlers.append(logging.FileHandler(LOG_FILE))
logging.basicConfig(
    level=LOG_LEVEL.upper(),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    handlers=handlers,
)

logger = logging.getLogger(__name__)


def main() -> int:
    return run(sys.argv[1:])


# Run CLI
if __name__ == "__main__":
    sys.exit(main())
