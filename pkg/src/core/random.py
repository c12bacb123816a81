"""
计数器型随机数流

每个流由 (seed, stream) 唯一确定，与求值顺序、线程数无关
"""
import numpy as np


def stream(seed: int, index: int) -> np.random.Generator:
    """
    返回 (seed, index) 对应的独立随机流

    Philox 的 128 位 key 直接由 seed 和流编号组成，不经过全局状态
    """
    if seed < 0 or index < 0:
        raise ValueError(f"seed and stream index must be non-negative, got ({seed}, {index})")
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
