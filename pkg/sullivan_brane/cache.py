"""On-disk cache of command reports, one JSON file per key."""

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Mapping, Optional

from pydantic import ValidationError

from sullivan_brane.models import CACHE_ENV_VAR, DEFAULT_CACHE_DIR, TOOL_VERSION, Report

logger = logging.getLogger(__name__)


def resolve_cache_dir(flag: Optional[str] = None) -> Path:
    """Cache directory: the flag, then the environment variable, then the default."""
    if flag:
        return Path(flag)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return DEFAULT_CACHE_DIR


def cache_key(content_hash: str, command: str, flags: Mapping[str, Any]) -> str:
    """Key of a report.

    Args:
        content_hash: Hash of the pretty-printed model
        command: Command name
        flags: Flags that influence the result (degree bound, k)

    Returns:
        Hex digest naming the cache entry
    """
    payload = json.dumps(
        [content_hash, command, sorted(flags.items()), TOOL_VERSION],
        sort_keys=True,
        default=str,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class ReportCache:
    """Manager for cached reports."""

    def __init__(self, cache_dir: Optional[Path] = None):
        """Initialize the cache.

        Args:
            cache_dir: Directory of cache entries. Defaults to local_data/cache
        """
        self.cache_dir = Path(cache_dir) if cache_dir is not None else DEFAULT_CACHE_DIR

    def path_for(self, key: str) -> Path:
        return self.cache_dir / f"{key}.json"

    def load(self, key: str) -> Optional[Report]:
        """Load a cached report.

        Corrupt or unreadable entries are treated as misses.

        Args:
            key: Cache key

        Returns:
            The cached Report, or None
        """
        path = self.path_for(key)
        if not path.exists():
            logger.info("Cache miss for %s", key[:12])
            return None
        try:
            report = Report.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValueError, ValidationError) as e:
            logger.warning("Ignoring corrupt cache entry %s: %s", path, e)
            return None
        logger.info("Cache hit for %s", key[:12])
        return report

    def store(self, key: str, report: Report) -> None:
        """Write a report to the cache; failures are logged, never raised.

        Args:
            key: Cache key
            report: Report to store
        """
        path = self.path_for(key)
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(report.model_dump_json(), encoding="utf-8")
            tmp.replace(path)
        except OSError as e:
            logger.warning("Could not write cache entry %s: %s", path, e)
