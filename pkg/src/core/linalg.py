import numpy as np

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)

for _matrix in (IDENTITY_2, SIGMA_1):
    _matrix.setflags(write=False)


def matrix2(a11, a12, a21, a22) -> np.ndarray:
    """按元素组装 (..., 2, 2) 复矩阵，各元素可广播"""
    a11, a12, a21, a22 = np.broadcast_arrays(
        *(np.asarray(v, dtype=complex) for v in (a11, a12, a21, a22))
    )
    out = np.empty(a11.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a11
    out[..., 0, 1] = a12
    out[..., 1, 0] = a21
    out[..., 1, 1] = a22
    return out


def trace2(a: np.ndarray):
    return np.trace(a, axis1=-2, axis2=-1)


def sigma1_sandwich_trace(a: np.ndarray, b: np.ndarray):
    """tr[σ₁ A σ₁ B]，对最后两个维度逐点计算"""
    return (
        a[..., 1, 1] * b[..., 0, 0]
        + a[..., 0, 0] * b[..., 1, 1]
        + a[..., 1, 0] * b[..., 1, 0]
        + a[..., 0, 1] * b[..., 0, 1]
    )


def is_hermitian(a: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(a, np.conj(np.swapaxes(a, -1, -2)), rtol=0, atol=atol))
