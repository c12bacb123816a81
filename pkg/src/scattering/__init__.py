"""
散射与谱模块

远场振幅、谱密度分解、三角形调和测度与熵证书
"""

from .exceptions import ExtractionError, DegenerateSourceError
from .types import (
    FarFieldAmplitude, SpectralDensitySample, TriangleDomain,
    HarmonicMeasureEstimate, EntropyCertificate
)
from .amplitude import (
    free_amplitude, free_amplitude_grid, extrapolate_radial, extract_amplitude,
    far_field_amplitude, spectral_density
)
from .harmonic import harmonic_measure, endpoint_exponent
from .entropy import (
    subharmonic_test, gap_error, entropy_lower_bound, pick_k0, boundary_nu,
    build_entropy_certificate, spectral_density_on_base
)

__all__ = [
    # 异常
    'ExtractionError',
    'DegenerateSourceError',

    # 类型
    'FarFieldAmplitude',
    'SpectralDensitySample',
    'TriangleDomain',
    'HarmonicMeasureEstimate',
    'EntropyCertificate',

    # 振幅
    'free_amplitude',
    'free_amplitude_grid',
    'extrapolate_radial',
    'extract_amplitude',
    'far_field_amplitude',
    'spectral_density',

    # 调和测度
    'harmonic_measure',
    'endpoint_exponent',

    # 熵证书
    'subharmonic_test',
    'gap_error',
    'entropy_lower_bound',
    'pick_k0',
    'boundary_nu',
    'build_entropy_certificate',
    'spectral_density_on_base',
]
