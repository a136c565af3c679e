"""Small dense linear algebra: 3-vectors, n<=6 matrices, finite differences.

Everything here is deliberately written out (no LAPACK dispatch) so results
are bit-reproducible across platforms and the singularity/error behaviour is
ours to specify.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SingularMatrixError

Vec3 = np.ndarray  # shape (3,), float64

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def vec3(x: float, y: float, z: float) -> Vec3:
    """Return a float 3-vector."""
    return np.array([float(x), float(y), float(z)])


def cross(a: Vec3, b: Vec3) -> Vec3:
    """Return the cross product a x b."""
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def dot(a: Vec3, b: Vec3) -> float:
    """Return the dot product of two 3-vectors."""
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


@dataclass
class SmallMatrix:
    """Dense n x n matrix, 2 <= n <= 6.

    ``antisymmetric`` is a construction tag: matrices carrying it were filled
    through :meth:`set_pair`, which writes both (i,j) and (j,i), so
    antisymmetry is exact by construction rather than checked after the fact.
    """

    data: np.ndarray
    antisymmetric: bool = False

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data, dtype=float)
        n = self.data.shape[0]
        if self.data.shape != (n, n) or not 2 <= n <= 6:
            raise ValueError(f"SmallMatrix must be square with 2 <= n <= 6, got {self.data.shape}")

    @classmethod
    def zeros(cls, n: int, antisymmetric: bool = False) -> "SmallMatrix":
        """Return an n x n zero matrix."""
        return cls(np.zeros((n, n)), antisymmetric=antisymmetric)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def set_pair(self, i: int, j: int, value: float) -> None:
        """Set entry (i, j) to value and (j, i) to -value."""
        if not self.antisymmetric:
            raise ValueError("set_pair is reserved for antisymmetric-tagged matrices")
        self.data[i, j] = value
        self.data[j, i] = -value

    def __matmul__(self, other):
        if isinstance(other, SmallMatrix):
            return SmallMatrix(self.data @ other.data)
        return self.data @ other


def invert_small(a: SmallMatrix | np.ndarray) -> np.ndarray:
    """Invert an n x n matrix (n <= 6) by Gaussian elimination with partial pivoting.

    Raises:
        SingularMatrixError: if |det| <= 1e-12 * ||A||_max^n. The message
            carries the condition estimate ||A||_max^n / |det|.
    """
    m = a.data if isinstance(a, SmallMatrix) else np.asarray(a, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n) or n > 6 or n < 1:
        raise ValueError(f"invert_small expects square n <= 6, got {m.shape}")
    work = np.concatenate([m.copy(), np.eye(n)], axis=1)
    det = 1.0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(work[col:, col])))
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
            det = -det
        p = work[col, col]
        det *= p
        if p == 0.0:
            break
        work[col] /= p
        for row in range(n):
            if row != col and work[row, col] != 0.0:
                work[row] -= work[row, col] * work[col]
    scale = float(np.max(np.abs(m))) or 1.0
    if abs(det) <= 1e-12 * scale**n:
        cond = np.inf if det == 0.0 else scale**n / abs(det)
        raise SingularMatrixError(f"matrix numerically singular (condition estimate {cond:.3e})")
    inv = work[:, n:]
    return inv


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of size h for y' = f(t, y).

    Fixed step, no adaptivity: every integration in this package is meant to
    be bit-reproducible for a given (dt, t_final).
    """
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + (0.5 * h) * k1)
    k3 = f(t + 0.5 * h, y + (0.5 * h) * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def grad_fd(f: Callable[[np.ndarray], float], x: np.ndarray, scale: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of f at x.

    Per-coordinate step h_i = scale * max(1, |x_i|); this keeps the step
    meaningful for both O(1) and large coordinates without ever collapsing
    to zero.
    """
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        h = scale * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (f(xp) - f(xm)) / (2.0 * h)
    return g
