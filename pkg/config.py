import os
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from dotenv import load_dotenv

# Load environment
load_dotenv()

# Base paths
BASE_DIR = Path(__file__).parent

# Logger (set up early so we can use it)
logger = logging.getLogger("pi-connections")
logging.basicConfig(level=os.getenv("LOG_LEVEL", "INFO").upper())

FIXTURES_DIR = Path(os.getenv("PI_CONN_FIXTURES_DIR", str(BASE_DIR / "fixtures")))
SUBSTITUTION_SUFFIX = ".subst.json"

DEFAULT_SEED = 20240611
DEFAULT_FUZZ_ROUNDS = 20
MIN_FUZZ_ROUNDS = 20

SERVER_HOST = os.getenv("PI_CONN_HOST", "0.0.0.0")
SERVER_PORT = int(os.getenv("PI_CONN_PORT", "3000"))

logger.debug(f"[STARTUP] Fixtures directory: {FIXTURES_DIR}")

# Cache for fixtures
_FIXTURE_CACHE: Optional[Dict[str, Path]] = None
_SUBSTITUTION_CACHE: Optional[Dict[str, Path]] = None


def _read_int_env(key: str, default: int) -> int:
    raw = os.getenv(key, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"[CONFIG] {key}='{raw}' is not an integer, using {default}")
        return default


def fuzz_seed() -> int:
    """Seed for randomized substitution sampling (PI_CONN_SEED)."""
    return _read_int_env("PI_CONN_SEED", DEFAULT_SEED)


def fuzz_rounds() -> int:
    rounds = _read_int_env("PI_CONN_FUZZ_ROUNDS", DEFAULT_FUZZ_ROUNDS)
    if rounds < MIN_FUZZ_ROUNDS:
        logger.warning(f"[CONFIG] PI_CONN_FUZZ_ROUNDS={rounds} is below {MIN_FUZZ_ROUNDS}, clamping")
        rounds = MIN_FUZZ_ROUNDS
    return rounds


def _normalize_key(name: str) -> str:
    return name.strip().lower().replace("-", "_")


def _discover_fixtures() -> Tuple[Dict[str, Path], Dict[str, Path]]:
    logger.info(f"[DISCOVER] Starting fixture discovery in '{FIXTURES_DIR}'")
    instances: Dict[str, Path] = {}
    substitutions: Dict[str, Path] = {}

    if not FIXTURES_DIR.exists():
        logger.warning(f"[DISCOVER] Fixtures directory does not exist: '{FIXTURES_DIR}'")
        return instances, substitutions

    for path in sorted(FIXTURES_DIR.glob("*.json")):
        if path.name.endswith(SUBSTITUTION_SUFFIX):
            key = _normalize_key(path.name[: -len(SUBSTITUTION_SUFFIX)])
            substitutions[key] = path
        else:
            key = _normalize_key(path.stem)
            instances[key] = path
        logger.debug(f"[DISCOVER] Found fixture: '{path.name}' -> key: '{key}'")

    logger.info(f"[DISCOVER] Discovery complete. Found {len(instances)} instances, {len(substitutions)} substitutions")
    return instances, substitutions


def refresh_fixtures() -> None:
    global _FIXTURE_CACHE, _SUBSTITUTION_CACHE
    logger.info("[REFRESH] Refreshing fixtures cache")
    _FIXTURE_CACHE, _SUBSTITUTION_CACHE = _discover_fixtures()


def get_fixture_mapping() -> Dict[str, Path]:
    if _FIXTURE_CACHE is None:
        logger.debug("[GET_FIXTURES] Cache is empty, refreshing fixtures")
        refresh_fixtures()
    return dict(_FIXTURE_CACHE or {})


def get_substitution_mapping() -> Dict[str, Path]:
    if _SUBSTITUTION_CACHE is None:
        refresh_fixtures()
    return dict(_SUBSTITUTION_CACHE or {})


def list_fixtures() -> List[str]:
    return sorted(get_fixture_mapping().keys())


def resolve_fixture(name_or_path: str) -> Path:
    """Return a path for either an existing file or a shipped fixture key."""
    path = Path(name_or_path)
    if path.exists():
        return path
    key = _normalize_key(path.stem if path.suffix == ".json" else name_or_path)
    mapping = get_fixture_mapping()
    if key in mapping:
        return mapping[key]
    raise FileNotFoundError(f"No instance file or fixture named '{name_or_path}' (fixtures: {sorted(mapping)})")


def resolve_substitution(name_or_path: str) -> Path:
    path = Path(name_or_path)
    if path.exists():
        return path
    key = _normalize_key(name_or_path.replace(SUBSTITUTION_SUFFIX, ""))
    mapping = get_substitution_mapping()
    if key in mapping:
        return mapping[key]
    raise FileNotFoundError(f"No substitution file or fixture named '{name_or_path}' (fixtures: {sorted(mapping)})")
