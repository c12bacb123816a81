"""
实验层异常定义
"""
from typing import List, Optional, Sequence

from ..core.exceptions import LabError, ParameterError


class ConfigError(ParameterError):
    """实验配置无效，problems 列出所有出错的键"""
    def __init__(self, problems: Sequence[str], source: Optional[str] = None):
        self.problems: List[str] = list(problems)
        self.source = source
        where = f" in {source}" if source else ""
        super().__init__(f"invalid experiment config{where}: " + "; ".join(self.problems))


class OutputError(LabError):
    """结果文件写入失败"""
    def __init__(self, message: str, path: Optional[str] = None, original_error: Optional[Exception] = None):
        self.path = path
        self.original_error = original_error
        super().__init__(message)


class CacheError(LabError):
    """缓存读写失败；运行层捕获后记警告并绕过缓存"""
    def __init__(self, message: str, path: Optional[str] = None, original_error: Optional[Exception] = None):
        self.path = path
        self.original_error = original_error
        super().__init__(message)
