"""
pytest 根配置：项目根目录加入 sys.path，测试中可 from src.… import
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))
