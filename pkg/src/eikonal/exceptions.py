"""
程函模块异常定义
"""
from typing import Optional, Sequence

from ..core.exceptions import DivergenceError


class ContractionError(DivergenceError):
    """Picard 迭代的相邻差连续增大"""
    def __init__(self, message: str, norms: Optional[Sequence[float]] = None, partial=None):
        super().__init__(message, orders=norms, partial=partial)

    @property
    def norms(self):
        return self.orders
