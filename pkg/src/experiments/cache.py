"""
按配置摘要寻址的结果缓存

<cache_dir>/<digest[:2]>/<digest>.json；损坏条目被删除而不是返回，
读写失败只记警告并绕过缓存
"""
import json
import os
from pathlib import Path
from typing import Optional, Union

import logging

from ..config_manager import CACHE_DIR_ENV
from ..core.exceptions import LabError
from .exceptions import CacheError
from .output import atomic_write_text
from .types import RunReport

logger = logging.getLogger("experiments.cache")

DEFAULT_CACHE_DIR = ".divlab_cache"


def default_cache_dir() -> Path:
    return Path(os.getenv(CACHE_DIR_ENV) or DEFAULT_CACHE_DIR)


class ResultCache:
    """RunReport 的磁盘缓存"""

    def __init__(self, directory: Optional[Union[str, Path]] = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path_for(self, digest: str) -> Path:
        return self.directory / digest[:2] / f"{digest}.json"

    def _read(self, digest: str) -> Optional[RunReport]:
        path = self.path_for(digest)
        if not path.exists():
            return None
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise CacheError(f"cannot read cache entry {path}", str(path), e)
        try:
            data = json.loads(text)
            report = RunReport.from_dict(data)
            if report.config_digest != digest:
                raise ValueError(f"entry belongs to digest {report.config_digest}")
        except (ValueError, TypeError, KeyError, AttributeError, LabError) as e:
            logger.warning(f"evicting corrupted cache entry {path.name}: {e}")
            self.evict(digest)
            return None
        return report

    def lookup(self, digest: str) -> Optional[RunReport]:
        """命中返回报告（cache_hit=True），未命中或出错返回 None"""
        try:
            report = self._read(digest)
        except CacheError as e:
            logger.warning(f"cache bypassed: {e}")
            return None
        if report is None:
            logger.debug(f"cache miss {digest[:12]}")
            return None
        logger.info(f"cache hit {digest[:12]}")
        report.cache_hit = True
        return report

    def store(self, report: RunReport) -> Optional[Path]:
        """原子写入；失败时记警告并返回 None"""
        path = self.path_for(report.config_digest)
        data = report.to_dict()
        data['cache_hit'] = False
        try:
            atomic_write_text(path, json.dumps(data, sort_keys=True))
        except LabError as e:
            logger.warning(f"cache bypassed, could not store {path.name}: {e}")
            return None
        logger.debug(f"stored {report.config_digest[:12]} in cache")
        return path

    def evict(self, digest: str) -> None:
        try:
            self.path_for(digest).unlink()
        except FileNotFoundError:
            pass
        except OSError as e:
            logger.warning(f"could not evict cache entry {digest[:12]}: {e}")


def cache_lookup(digest: str, directory: Optional[Union[str, Path]] = None) -> Optional[RunReport]:
    return ResultCache(directory).lookup(digest)
