"""
场模块异常定义
"""
from ..core.exceptions import ParameterError


class SpecError(ParameterError):
    """随机势规格不合法（中心间距、振幅、符号分布）"""
    pass
