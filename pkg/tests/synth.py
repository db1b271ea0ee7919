"""Deterministic synthetic test images."""

import numpy as np

from blockpursuit import IntensityImage


def gaussian_image(n=64, s1=1.5, s2=20.0, theta=0.5):
    """Anisotropic 2D Gaussian ridge on a dark background."""
    y, x = np.mgrid[0:n, 0:n].astype(np.float64)
    xc, yc = x - 0.47 * n, y - 0.53 * n
    u = xc * np.cos(theta) + yc * np.sin(theta)
    v = -xc * np.sin(theta) + yc * np.cos(theta)
    g = 225.0 * np.exp(-(u ** 2 / (2 * s1 ** 2) + v ** 2 / (2 * s2 ** 2))) + 16.0
    return IntensityImage(g)


def piecewise_constant_image(n=64, seed=5, n_rects=14):
    """Overlapping random-gray rectangles: flat regions separated by edges."""
    rng = np.random.default_rng(seed)
    m = np.full((n, n), 40.0)
    for _ in range(n_rects):
        r0, c0 = rng.integers(0, n - 8, 2)
        h, w = rng.integers(6, n // 2, 2)
        m[r0 : min(r0 + h, n), c0 : min(c0 + w, n)] = float(rng.integers(10, 246))
    return IntensityImage(m)


def sinusoid_mix_image(n=64):
    """Sum of five low-frequency plane waves, rescaled to [10, 245]."""
    y, x = np.mgrid[0:n, 0:n].astype(np.float64) / n
    m = np.zeros((n, n))
    for fx, fy, amp, phase in [
        (3, 1, 60, 0.3),
        (1, 4, 50, 1.1),
        (5, 2, 35, 2.0),
        (2, 6, 25, 0.7),
        (7, 3, 18, 1.9),
    ]:
        m += amp * np.sin(2 * np.pi * (fx * x + fy * y) + phase)
    m = (m - m.min()) / (m.max() - m.min()) * 235.0 + 10.0
    return IntensityImage(m)


def textured_image(n=64, seed=11, noise_sigma=8.0):
    """Sinusoid mix plus seeded noise; energy spread across all blocks."""
    base = sinusoid_mix_image(n).pixels
    noise = np.random.default_rng(seed).normal(0.0, noise_sigma, (n, n))
    return IntensityImage(np.clip(base + noise, 0.0, 255.0))


def random_image(rows, cols, seed):
    """Uniform noise in [0, 255]."""
    rng = np.random.default_rng(seed)
    return IntensityImage(rng.uniform(0.0, 255.0, (rows, cols)))
