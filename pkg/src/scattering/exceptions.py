"""
散射模块异常定义
"""
from typing import List, Optional, Sequence

from ..core.exceptions import LabError


class ExtractionError(LabError):
    """远场振幅外推不可靠（残差随半径不减）"""
    def __init__(self, message: str, residuals: Optional[Sequence[float]] = None):
        self.residuals: List[float] = list(residuals) if residuals is not None else []
        super().__init__(message)


class DegenerateSourceError(LabError):
    """三角形内部找不到振幅非零的点"""
    def __init__(self, message: str, sup_norm: float = 0.0):
        self.sup_norm = sup_norm
        super().__init__(message)
