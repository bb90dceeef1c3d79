"""Registry of analytic test problems with hand-coded gradients.

Two groups are registered:

* ``table1`` -- the 2-D curved-valley problems (Nesterov-Chebyshev-Rosenbrock,
  Maratos, NONDIA) with their customary starting points;
* ``classic`` -- standard CUTEst-named problems written out natively
  (no SIF decoding).  Scalable problems are evaluated in O(n).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import Problem

__all__ = ["ProblemSpec", "REGISTRY", "SUITES", "get_problem", "list_suite", "suite_json", "check_gradient"]


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    family: str  # "fixed" or "scalable"
    build: Callable[[int, Optional[str]], Problem] = field(repr=False)
    default_dim: int
    note: str = ""
    dim_multiple: int = 1
    min_dim: int = 1
    starts: tuple = ("default",)

    def check_dim(self, dim: int) -> int:
        dim = int(dim)
        if self.family == "fixed":
            if dim != self.default_dim:
                raise ValueError(f"{self.name} is fixed at dimension {self.default_dim}, got {dim}")
        elif dim < self.min_dim or dim % self.dim_multiple:
            raise ValueError(
                f"{self.name}: dimension must be >= {self.min_dim} and a multiple of {self.dim_multiple}"
            )
        return dim


REGISTRY: dict[str, ProblemSpec] = {}


def _register(name, family, default_dim, note="", dim_multiple=1, min_dim=1, starts=("default",)):
    def deco(fn):
        REGISTRY[name] = ProblemSpec(name, family, fn, default_dim, note, dim_multiple, min_dim, starts)
        return fn
    return deco


# ---------------------------------------------------------------------------
# curved narrow valleys
# ---------------------------------------------------------------------------

@_register("NCR", "fixed", 2, "Nesterov-Chebyshev-Rosenbrock, 2-D",
           starts=("standard", "alternate"))
def _ncr(n, start=None):
    def f(x):
        r = x[1] - 2.0 * x[0] ** 2 + 1.0
        return 0.25 * (x[0] - 1.0) ** 2 + r * r

    def g(x):
        r = x[1] - 2.0 * x[0] ** 2 + 1.0
        return np.array([0.5 * (x[0] - 1.0) - 8.0 * r * x[0], 2.0 * r])

    x0 = (-0.61, -1.0) if start == "alternate" else (-1.0, 1.5)
    return Problem("NCR", 2, f, g, x0, f_star=0.0, x_star=(1.0, 1.0))


@_register("MARATOS", "fixed", 2, "Maratos function, theta = 10")
def _maratos(n, start=None, theta=10.0):
    def f(x):
        s = x[0] ** 2 + x[1] ** 2 - 1.0
        return x[0] + theta * s * s

    def g(x):
        s = x[0] ** 2 + x[1] ** 2 - 1.0
        return np.array([1.0 + 4.0 * theta * s * x[0], 4.0 * theta * s * x[1]])

    return Problem("MARATOS", 2, f, g, (1.0, 0.95))


@_register("NONDIA", "fixed", 2, "NONDIA, 2-D form with theta = 100")
def _nondia(n, start=None, theta=100.0):
    def f(x):
        return (1.0 - x[1]) ** 2 + theta * (x[0] - x[1] ** 2) ** 2

    def g(x):
        u = x[0] - x[1] ** 2
        return np.array([2.0 * theta * u, -2.0 * (1.0 - x[1]) - 4.0 * theta * u * x[1]])

    return Problem("NONDIA", 2, f, g, (-0.9, 1.17), f_star=0.0, x_star=(1.0, 1.0))


# ---------------------------------------------------------------------------
# scalable problems
# ---------------------------------------------------------------------------

@_register("EXTROSEN", "scalable", 100, "extended Rosenbrock", dim_multiple=2, min_dim=2)
def _extrosen(n, start=None):
    def f(x):
        a, b = x[0::2], x[1::2]
        return float(np.sum(100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2))

    def g(x):
        a, b = x[0::2], x[1::2]
        u = b - a * a
        out = np.empty(n)
        out[0::2] = -400.0 * u * a - 2.0 * (1.0 - a)
        out[1::2] = 200.0 * u
        return out

    x0 = np.tile([-1.2, 1.0], n // 2)
    return Problem("EXTROSEN", n, f, g, x0, f_star=0.0, x_star=np.ones(n))


@_register("ARWHEAD", "scalable", 100, min_dim=2)
def _arwhead(n, start=None):
    def f(x):
        q = x[:-1] ** 2 + x[-1] ** 2
        return float(np.sum(q * q - 4.0 * x[:-1] + 3.0))

    def g(x):
        q = x[:-1] ** 2 + x[-1] ** 2
        out = np.empty(n)
        out[:-1] = 4.0 * q * x[:-1] - 4.0
        out[-1] = 4.0 * x[-1] * np.sum(q)
        return out

    xs = np.ones(n)
    xs[-1] = 0.0
    return Problem("ARWHEAD", n, f, g, np.ones(n), f_star=0.0, x_star=xs)


@_register("DQDRTIC", "scalable", 100, min_dim=3)
def _dqdrtic(n, start=None):
    def f(x):
        return float(np.sum(x[:-2] ** 2 + 100.0 * x[1:-1] ** 2 + 100.0 * x[2:] ** 2))

    def g(x):
        out = np.zeros(n)
        out[:-2] += 2.0 * x[:-2]
        out[1:-1] += 200.0 * x[1:-1]
        out[2:] += 200.0 * x[2:]
        return out

    return Problem("DQDRTIC", n, f, g, np.full(n, 3.0), f_star=0.0, x_star=np.zeros(n))


@_register("BDQRTIC", "scalable", 100, min_dim=5)
def _bdqrtic(n, start=None):
    def parts(x):
        a = -4.0 * x[:-4] + 3.0
        q = (x[:-4] ** 2 + 2.0 * x[1:-3] ** 2 + 3.0 * x[2:-2] ** 2
             + 4.0 * x[3:-1] ** 2 + 5.0 * x[-1] ** 2)
        return a, q

    def f(x):
        a, q = parts(x)
        return float(np.sum(a * a + q * q))

    def g(x):
        a, q = parts(x)
        out = np.zeros(n)
        out[:-4] += -8.0 * a + 4.0 * q * x[:-4]
        out[1:-3] += 8.0 * q * x[1:-3]
        out[2:-2] += 12.0 * q * x[2:-2]
        out[3:-1] += 16.0 * q * x[3:-1]
        out[-1] += 20.0 * x[-1] * np.sum(q)
        return out

    return Problem("BDQRTIC", n, f, g, np.ones(n))


@_register("ENGVAL1", "scalable", 100, min_dim=2)
def _engval1(n, start=None):
    def f(x):
        q = x[:-1] ** 2 + x[1:] ** 2
        return float(np.sum(q * q - 4.0 * x[:-1] + 3.0))

    def g(x):
        q = x[:-1] ** 2 + x[1:] ** 2
        out = np.zeros(n)
        out[:-1] += 4.0 * q * x[:-1] - 4.0
        out[1:] += 4.0 * q * x[1:]
        return out

    return Problem("ENGVAL1", n, f, g, np.full(n, 2.0))


@_register("EDENSCH", "scalable", 100, min_dim=2)
def _edensch(n, start=None):
    def f(x):
        a, b = x[:-1], x[1:]
        return float(16.0 + np.sum((a - 2.0) ** 4 + (b * (a - 2.0)) ** 2 + (b + 1.0) ** 2))

    def g(x):
        a, b = x[:-1], x[1:]
        w = b * (a - 2.0)
        out = np.zeros(n)
        out[:-1] += 4.0 * (a - 2.0) ** 3 + 2.0 * w * b
        out[1:] += 2.0 * w * (a - 2.0) + 2.0 * (b + 1.0)
        return out

    return Problem("EDENSCH", n, f, g, np.zeros(n))


@_register("LIARWHD", "scalable", 100, min_dim=2)
def _liarwhd(n, start=None):
    def f(x):
        return float(np.sum(4.0 * (x * x - x[0]) ** 2 + (x - 1.0) ** 2))

    def g(x):
        u = x * x - x[0]
        out = 16.0 * u * x + 2.0 * (x - 1.0)
        out[0] -= 8.0 * np.sum(u)
        return out

    return Problem("LIARWHD", n, f, g, np.full(n, 4.0), f_star=0.0, x_star=np.ones(n))


@_register("NONDQUAR", "scalable", 100, min_dim=3)
def _nondquar(n, start=None):
    def f(x):
        t = x[:-2] + x[1:-1] + x[-1]
        return float((x[0] - x[1]) ** 2 + np.sum(t ** 4) + (x[-2] + x[-1]) ** 2)

    def g(x):
        t3 = 4.0 * (x[:-2] + x[1:-1] + x[-1]) ** 3
        out = np.zeros(n)
        out[0] += 2.0 * (x[0] - x[1])
        out[1] -= 2.0 * (x[0] - x[1])
        out[:-2] += t3
        out[1:-1] += t3
        out[-1] += np.sum(t3)
        e = 2.0 * (x[-2] + x[-1])
        out[-2] += e
        out[-1] += e
        return out

    x0 = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return Problem("NONDQUAR", n, f, g, x0, f_star=0.0, x_star=np.zeros(n))


_DIXMAAN_PARAMS = {
    "A": (1.0, 0.0, 0.125, 0.125),
    "B": (1.0, 0.0625, 0.0625, 0.0625),
    "C": (1.0, 0.125, 0.125, 0.125),
    "D": (1.0, 0.26, 0.26, 0.26),
}


def _dixmaan(variant):
    alpha, beta, gamma, delta = _DIXMAAN_PARAMS[variant]
    name = "DIXMAAN" + variant

    def build(n, start=None):
        m = n // 3

        def f(x):
            u = x[1:] + x[1:] ** 2
            return float(1.0 + alpha * np.sum(x * x)
                         + beta * np.sum(x[:-1] ** 2 * u * u)
                         + gamma * np.sum(x[:2 * m] ** 2 * x[m:] ** 4)
                         + delta * np.sum(x[:m] * x[2 * m:]))

        def g(x):
            out = 2.0 * alpha * x
            u = x[1:] + x[1:] ** 2
            out[:-1] += 2.0 * beta * x[:-1] * u * u
            out[1:] += 2.0 * beta * x[:-1] ** 2 * u * (1.0 + 2.0 * x[1:])
            out[:2 * m] += 2.0 * gamma * x[:2 * m] * x[m:] ** 4
            out[m:] += 4.0 * gamma * x[:2 * m] ** 2 * x[m:] ** 3
            out[:m] += delta * x[2 * m:]
            out[2 * m:] += delta * x[:m]
            return out

        return Problem(name, n, f, g, np.full(n, 2.0), f_star=1.0, x_star=np.zeros(n))

    _register(name, "scalable", 99, f"Dixon-Maany, variant {variant}", dim_multiple=3, min_dim=3)(build)


for _v in "ABCD":
    _dixmaan(_v)


@_register("HILBERTB", "scalable", 10, "Hilbert matrix plus 5 I, quadratic", min_dim=1)
def _hilbertb(n, start=None):
    i = np.arange(1, n + 1)
    A = 1.0 / (i[:, None] + i[None, :] - 1.0) + 5.0 * np.eye(n)

    def f(x):
        return float(0.5 * x @ (A @ x))

    def g(x):
        return A @ x

    return Problem("HILBERTB", n, f, g, np.full(n, -3.0), f_star=0.0, x_star=np.zeros(n))


@_register("VARDIM", "scalable", 10, "variably dimensioned", min_dim=1)
def _vardim(n, start=None):
    i = np.arange(1, n + 1, dtype=np.float64)

    def f(x):
        d = x - 1.0
        r = float(np.dot(i, d))
        return float(np.dot(d, d) + r * r + r ** 4)

    def g(x):
        d = x - 1.0
        r = float(np.dot(i, d))
        return 2.0 * d + (2.0 * r + 4.0 * r ** 3) * i

    return Problem("VARDIM", n, f, g, 1.0 - i / n, f_star=0.0, x_star=np.ones(n))


# ---------------------------------------------------------------------------
# fixed-dimension classics
# ---------------------------------------------------------------------------

@_register("BEALE", "fixed", 2)
def _beale(n, start=None):
    y = np.array([1.5, 2.25, 2.625])
    j = np.arange(1, 4)

    def f(x):
        c = y - x[0] * (1.0 - x[1] ** j)
        return float(np.dot(c, c))

    def g(x):
        c = y - x[0] * (1.0 - x[1] ** j)
        return np.array([np.sum(-2.0 * c * (1.0 - x[1] ** j)),
                         np.sum(2.0 * c * x[0] * j * x[1] ** (j - 1))])

    return Problem("BEALE", 2, f, g, (1.0, 1.0), f_star=0.0, x_star=(3.0, 0.5))


@_register("BROWNDEN", "fixed", 4, "Brown and Dennis")
def _brownden(n, start=None):
    t = np.arange(1, 21) / 5.0
    et, st, ct = np.exp(t), np.sin(t), np.cos(t)

    def parts(x):
        a = x[0] + t * x[1] - et
        b = x[2] + x[3] * st - ct
        return a, b, a * a + b * b

    def f(x):
        return float(np.sum(parts(x)[2] ** 2))

    def g(x):
        a, b, s = parts(x)
        return np.array([np.sum(4 * s * a), np.sum(4 * s * a * t),
                         np.sum(4 * s * b), np.sum(4 * s * b * st)])

    return Problem("BROWNDEN", 4, f, g, (25.0, 5.0, -5.0, -1.0), f_star=85822.20162635628)


@_register("BRKMCC", "fixed", 2)
def _brkmcc(n, start=None):
    def f(x):
        h = -0.25 * x[0] ** 2 - x[1] ** 2 + 1.0
        w = x[0] - 2.0 * x[1] + 1.0
        return (x[0] - 2.0) ** 2 + (x[1] - 1.0) ** 2 + 0.04 / h + 5.0 * w * w

    def g(x):
        h = -0.25 * x[0] ** 2 - x[1] ** 2 + 1.0
        w = x[0] - 2.0 * x[1] + 1.0
        c = 0.04 / (h * h)
        return np.array([2.0 * (x[0] - 2.0) + 0.5 * c * x[0] + 10.0 * w,
                         2.0 * (x[1] - 1.0) + 2.0 * c * x[1] - 20.0 * w])

    return Problem("BRKMCC", 2, f, g, (2.0, 2.0), f_star=0.16904267919645)


@_register("SISSER", "fixed", 2)
def _sisser(n, start=None):
    def f(x):
        a, b = x[0] ** 2, x[1] ** 2
        return 3.0 * a * a - 2.0 * a * b + 3.0 * b * b

    def g(x):
        a, b = x[0] ** 2, x[1] ** 2
        return np.array([12.0 * a * x[0] - 4.0 * x[0] * b, -4.0 * a * x[1] + 12.0 * b * x[1]])

    return Problem("SISSER", 2, f, g, (1.0, 0.1), f_star=0.0, x_star=(0.0, 0.0))


@_register("DENSCHNA", "fixed", 2)
def _denschna(n, start=None):
    def f(x):
        return x[0] ** 4 + (x[0] + x[1]) ** 2 + (np.exp(x[1]) - 1.0) ** 2

    def g(x):
        e = np.exp(x[1])
        s = 2.0 * (x[0] + x[1])
        return np.array([4.0 * x[0] ** 3 + s, s + 2.0 * (e - 1.0) * e])

    return Problem("DENSCHNA", 2, f, g, (8.0, 9.0), f_star=0.0, x_star=(0.0, 0.0))


@_register("DENSCHNB", "fixed", 2)
def _denschnb(n, start=None):
    def f(x):
        a = x[0] - 2.0
        return a * a * (1.0 + x[1] ** 2) + (x[1] + 1.0) ** 2

    def g(x):
        a = x[0] - 2.0
        return np.array([2.0 * a * (1.0 + x[1] ** 2), 2.0 * a * a * x[1] + 2.0 * (x[1] + 1.0)])

    return Problem("DENSCHNB", 2, f, g, (1.0, 1.0), f_star=0.0, x_star=(2.0, -1.0))


@_register("DENSCHNC", "fixed", 2)
def _denschnc(n, start=None):
    def f(x):
        a = x[0] ** 2 + x[1] ** 2 - 2.0
        b = np.exp(x[0] - 1.0) + x[1] ** 3 - 2.0
        return a * a + b * b

    def g(x):
        a = x[0] ** 2 + x[1] ** 2 - 2.0
        e = np.exp(x[0] - 1.0)
        b = e + x[1] ** 3 - 2.0
        return np.array([4.0 * a * x[0] + 2.0 * b * e, 4.0 * a * x[1] + 6.0 * b * x[1] ** 2])

    return Problem("DENSCHNC", 2, f, g, (2.0, 3.0), f_star=0.0, x_star=(1.0, 1.0))


@_register("CUBE", "fixed", 2)
def _cube(n, start=None):
    def f(x):
        return (x[0] - 1.0) ** 2 + 100.0 * (x[1] - x[0] ** 3) ** 2

    def g(x):
        u = x[1] - x[0] ** 3
        return np.array([2.0 * (x[0] - 1.0) - 600.0 * u * x[0] ** 2, 200.0 * u])

    return Problem("CUBE", 2, f, g, (-1.2, 1.0), f_star=0.0, x_star=(1.0, 1.0))


# ---------------------------------------------------------------------------
# lookup
# ---------------------------------------------------------------------------

SUITES = {
    "table1": ("NCR", "MARATOS", "NONDIA"),
    "classic": (
        "EXTROSEN", "ARWHEAD", "DQDRTIC", "BDQRTIC", "ENGVAL1", "EDENSCH", "LIARWHD",
        "NONDQUAR", "DIXMAANA", "DIXMAANB", "DIXMAANC", "DIXMAAND", "BEALE", "BROWNDEN",
        "BRKMCC", "SISSER", "HILBERTB", "DENSCHNA", "DENSCHNB", "DENSCHNC", "CUBE", "VARDIM",
    ),
}
SUITES["all"] = SUITES["table1"] + SUITES["classic"]


def get_problem(name: str, dim: Optional[int] = None, start: Optional[str] = None) -> Problem:
    """Build a registered problem.

    ``start`` selects among alternative standard starts (``NCR`` has
    ``"standard"`` and ``"alternate"``); ``None`` picks the first.
    """
    try:
        spec = REGISTRY[name.upper()]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}") from None
    dim = spec.check_dim(spec.default_dim if dim is None else dim)
    if start is not None and start not in spec.starts:
        raise ValueError(f"{spec.name}: unknown start {start!r}, choose from {spec.starts}")
    return spec.build(dim, start)


def list_suite(tag: str, dim: Optional[int] = None) -> list[Problem]:
    """Problems of a suite in their canonical order.

    ``dim`` overrides the dimension of scalable problems (rounded down to a
    valid size where a problem needs a multiple).
    """
    if tag not in SUITES:
        raise KeyError(f"unknown suite {tag!r}, choose from {sorted(SUITES)}")
    out = []
    for name in SUITES[tag]:
        spec = REGISTRY[name]
        n = None
        if dim is not None and spec.family == "scalable":
            n = max(spec.min_dim, dim - dim % spec.dim_multiple)
        out.append(get_problem(name, n))
    return out


def suite_json(tag: str, dim: Optional[int] = None) -> str:
    """JSON listing of a suite: name, dim, start, known optimum."""
    rows = [
        {"name": p.name, "dim": p.dim, "start": p.x0.tolist(), "f_star": p.f_star}
        for p in list_suite(tag, dim)
    ]
    return json.dumps(rows, indent=2)


def check_gradient(problem: Problem, n_points: int = 10, seed: int = 0, f_cap: float = 1e8) -> float:
    """Worst relative error of ``eval_grad`` against central differences.

    Points are drawn uniformly in a unit box around the start (and around
    ``x_star`` when known); points with ``|f| > f_cap`` are pulled back
    toward the centre.  Step ``h_i = 1e-6 max(1, |x_i|)``; the error is
    ``||g - g_fd||_inf / max(1, ||g||_inf)``.
    """
    rng = np.random.default_rng(seed)
    centres = [problem.x0] if problem.x_star is None else [problem.x0, problem.x_star]
    worst = 0.0
    for i in range(n_points):
        c = centres[i % len(centres)]
        u = rng.uniform(-0.5, 0.5, problem.dim)
        x = c + u
        for _ in range(30):
            if abs(problem.eval_f(x)) <= f_cap:
                break
            u = 0.5 * u
            x = c + u
        g = np.asarray(problem.eval_grad(x), dtype=np.float64)
        h = 1e-6 * np.maximum(1.0, np.abs(x))
        fd = np.empty(problem.dim)
        for j in range(problem.dim):
            e = np.zeros(problem.dim)
            e[j] = h[j]
            fd[j] = (problem.eval_f(x + e) - problem.eval_f(x - e)) / (2.0 * h[j])
        err = np.max(np.abs(g - fd)) / max(1.0, float(np.max(np.abs(g))))
        worst = max(worst, float(err))
    return worst
