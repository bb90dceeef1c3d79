"""Dense BFGS approximation of the model Hessian."""

from __future__ import annotations

import numpy as np

from .core import NumericFailure

CURVATURE_EPS = 1e-10


class HessianApprox:
    """Symmetric matrix ``B_k`` updated by the BFGS formula.

    Updates with ``s'y <= CURVATURE_EPS * ||s|| ||y||`` are skipped (and
    counted in ``skips``) so that B stays positive definite.
    """

    def __init__(self, n: int, B0=None):
        self.n = int(n)
        if B0 is None:
            self.B = np.eye(self.n)
        else:
            B0 = np.array(B0, dtype=np.float64)
            if B0.shape != (self.n, self.n):
                raise ValueError(f"B0 must be {self.n}x{self.n}")
            self.B = 0.5 * (B0 + B0.T)
        self.skips = 0
        self.updates = 0

    def matvec(self, v) -> np.ndarray:
        return self.B @ v

    def bfgs_update(self, s, y) -> bool:
        """Apply ``B + yy'/(s'y) - Bss'B/(s'Bs)`` in place.

        Returns True if the update was applied, False if it was skipped.
        """
        s = np.asarray(s, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(y))):
            raise NumericFailure("non-finite BFGS pair")
        sy = float(np.dot(s, y))
        Bs = self.B @ s
        sBs = float(np.dot(s, Bs))
        if sy <= CURVATURE_EPS * np.linalg.norm(s) * np.linalg.norm(y) or not sBs > 0.0:
            self.skips += 1
            return False
        B = self.B + np.outer(y, y) / sy - np.outer(Bs, Bs) / sBs
        self.B = 0.5 * (B + B.T)
        self.updates += 1
        return True

    def norm2(self) -> float:
        """Spectral norm (exact for n <= 500, else the max row-sum bound)."""
        if self.n <= 500:
            return float(np.max(np.abs(np.linalg.eigvalsh(self.B))))
        return float(np.max(np.sum(np.abs(self.B), axis=1)))

    def copy(self) -> "HessianApprox":
        other = HessianApprox(self.n, self.B)
        other.skips = self.skips
        other.updates = self.updates
        return other


def bfgs_update(H: HessianApprox, s, y) -> HessianApprox:
    """Functional form of :meth:`HessianApprox.bfgs_update`; ``H`` is untouched."""
    out = H.copy()
    out.bfgs_update(s, y)
    return out


def matvec(H: HessianApprox, v) -> np.ndarray:
    return H.matvec(v)
