"""Spatial grids and sampled potentials.

All potentials live on uniform grids. Designed potentials are even-symmetric
on grids centered at zero; scattering apparatuses built by concatenation keep
the uniform spacing but drop the symmetry flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Grid", "PotentialGrid", "default_grid"]


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid with x=0 on a node (odd point count)."""

    half_width: float
    points: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.points < 3 or self.points % 2 == 0:
            raise ValueError("points must be an odd integer >= 3")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        # mirror the right half so x[i] == -x[-1-i] bitwise; even functions
        # then sample to exactly even arrays
        right = self.spacing * np.arange(self.points // 2 + 1)
        return np.concatenate([-right[:0:-1], right])

    @property
    def center_index(self) -> int:
        return self.points // 2

    def right_half(self) -> np.ndarray:
        """Nodes x >= 0, center included."""
        return self.x[self.center_index :]


def default_grid(half_width: float = 12.0, spacing: float = 0.005) -> Grid:
    """Production grid: wide enough for the shallowest gap state at N <= 15."""
    points = int(round(2.0 * half_width / spacing)) + 1
    if points % 2 == 0:
        points += 1
    return Grid(half_width=half_width, points=points)


@dataclass
class PotentialGrid:
    """Sampled potential with its declared asymptotic value.

    `energy_shift` records any re-referencing applied when a potential is
    prepared for scattering (original frame = values + energy_shift).
    """

    grid: Grid
    values: np.ndarray
    asymptote: float
    even_symmetric: bool = True
    energy_shift: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.points,):
            raise ValueError(
                f"values has shape {self.values.shape}, grid expects ({self.grid.points},)"
            )
        if self.even_symmetric and not np.array_equal(self.values, self.values[::-1]):
            raise ValueError("values are not mirror-symmetric but even_symmetric is set")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def depth(self) -> float:
        return self.asymptote - self.min()

    def boundary_mean(self) -> float:
        return 0.5 * (float(self.values[0]) + float(self.values[-1]))

    @classmethod
    def from_even_half(cls, grid: Grid, right_values: np.ndarray, asymptote: float) -> "PotentialGrid":
        """Build an even potential from samples on x >= 0 (center first)."""
        right = np.asarray(right_values, dtype=np.float64)
        if right.shape != (grid.center_index + 1,):
            raise ValueError("right_values must cover the center node through x=+half_width")
        full = np.concatenate([right[:0:-1], right])
        return cls(grid=grid, values=full, asymptote=float(asymptote), even_symmetric=True)

    @classmethod
    def from_callable(cls, grid: Grid, func, asymptote: float | None = None) -> "PotentialGrid":
        values = np.asarray(func(grid.x), dtype=np.float64)
        asym = float(values[-1]) if asymptote is None else float(asymptote)
        even = bool(np.array_equal(values, values[::-1]))
        return cls(grid=grid, values=values, asymptote=asym, even_symmetric=even)

    def resampled(self, factor: int) -> "PotentialGrid":
        """Same potential on a grid `factor` times finer (cubic spline)."""
        if factor < 1:
            raise ValueError("factor must be >= 1")
        if factor == 1:
            return self
        from scipy.interpolate import CubicSpline

        fine = Grid(half_width=self.grid.half_width, points=factor * (self.grid.points - 1) + 1)
        spline = CubicSpline(self.grid.x, self.values)
        values = spline(fine.x)
        if self.even_symmetric:
            values = 0.5 * (values + values[::-1])
        return PotentialGrid(
            grid=fine,
            values=values,
            asymptote=self.asymptote,
            even_symmetric=self.even_symmetric,
            energy_shift=self.energy_shift,
        )

    def write_csv(self, path, metadata: dict | None = None) -> None:
        """Write `x,V` rows in decimal text, optional `# key=value` header lines."""
        with open(path, "w") as fh:
            if metadata:
                for key, value in metadata.items():
                    fh.write(f"# {key}={value!r}\n")
            fh.write(f"# asymptote={self.asymptote!r}\n")
            fh.write(f"# energy_shift={self.energy_shift!r}\n")
            fh.write("x,V\n")
            for xi, vi in zip(self.grid.x, self.values):
                fh.write(f"{float(xi)!r},{float(vi)!r}\n")

    @classmethod
    def read_csv(cls, path) -> "PotentialGrid":
        meta = {}
        xs, vs = [], []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    meta[key.strip()] = value
                    continue
                if line.lower().startswith("x,"):
                    continue
                sx, _, sv = line.partition(",")
                xs.append(float(sx))
                vs.append(float(sv))
        x = np.asarray(xs)
        values = np.asarray(vs)
        if x.size < 3:
            raise ValueError(f"{path}: expected at least 3 rows")
        spacing = np.diff(x)
        if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=1e-12):
            raise ValueError(f"{path}: grid is not uniform")
        if abs(x[0] + x[-1]) > 1e-9 * max(1.0, abs(x[-1])):
            raise ValueError(f"{path}: grid is not symmetric about zero")
        points = x.size if x.size % 2 else x.size - 1
        if points != x.size:
            raise ValueError(f"{path}: grid must have an odd number of nodes")
        grid = Grid(half_width=float(x[-1]), points=x.size)
        asym = float(meta.get("asymptote", values[-1]))
        shift = float(meta.get("energy_shift", 0.0))
        even = bool(np.array_equal(values, values[::-1]))
        return cls(grid=grid, values=values, asymptote=asym, even_symmetric=even, energy_shift=shift)
