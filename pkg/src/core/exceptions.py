"""
实验室统一异常定义

所有数值模块共享的异常层次
"""
from typing import List, Optional, Sequence


class LabError(Exception):
    """实验室基础异常"""
    pass


class ParameterError(LabError, ValueError):
    """参数/前置条件错误"""
    pass


class DomainError(ParameterError):
    """输入点不在允许的定义域内（零向量、奇点、区域外）"""
    pass


class InsufficientDataError(ParameterError):
    """样本不足以完成拟合或差分"""
    def __init__(self, message: str, required: int = 0, got: int = 0):
        self.required = required
        self.got = got
        super().__init__(f"{message} (required {required}, got {got})")


class AccuracyError(LabError):
    """求积未达到目标精度"""
    def __init__(self, message: str, estimate: float, tolerance: float, value: complex = None):
        self.estimate = estimate
        self.tolerance = tolerance
        self.value = value
        super().__init__(f"{message}: error estimate {estimate:.3e} > tol {tolerance:.3e}")


class DivergenceError(LabError):
    """级数或迭代发散（可报告的结果，而非程序错误）"""
    def __init__(self, message: str, orders: Optional[Sequence[float]] = None, partial=None):
        self.orders: List[float] = list(orders) if orders is not None else []
        self.partial = partial
        super().__init__(message)
