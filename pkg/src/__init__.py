"""
divlab 主模块

散度型势 Schrödinger 算子的数值实验
"""
