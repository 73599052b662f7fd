import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else None


class Settings:
    PROJECT_NAME: str = "Chromatic Threshold Lab"
    SCHEMA_VERSION: str = "ctl/1"

    # Hard cap on vertex count (bitset word budget); not configurable
    VERTEX_CAP: int = 4096

    # Exact searches
    TIME_BUDGET_SECS: int = int(os.getenv("CTL_TIME_BUDGET", "60"))
    CLIQUE_NODE_CAP: int = int(os.getenv("CTL_CLIQUE_NODE_CAP", "20000"))

    # Batch runs
    PARALLELISM: int = int(os.getenv("CTL_PARALLELISM", "1"))
    OUTPUT_FORMAT: str = os.getenv("CTL_OUTPUT_FORMAT", "json")
    DEFAULT_SEED: Optional[int] = _optional_int("CTL_SEED")

    LOG_LEVEL: str = os.getenv("CTL_LOG_LEVEL", "WARNING")


settings = Settings()
