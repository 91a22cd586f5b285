"""Independent reference computations used by several test modules.

Everything here is deliberately computed by a different route than the
library: direct quadrature where the library has closed forms, closed
forms where the library integrates.
"""

import numpy as np


def quad_fourier_two_point(k1, k2, normalization=1.0, nodes=96, half_width=9.5):
    """Transform of the two-point kernel by per-component Gauss-Legendre.

    On the constraint surface x2 = -x1 the integral factorizes into four
    identical 1d integrals Int dx exp(-x^2 + i (k1c - k2c) x).
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = half_width * x
    w = half_width * w
    value = normalization
    for c in range(4):
        delta = k1[c] - k2[c]
        value *= np.sum(w * np.exp(-x ** 2) * np.exp(1j * delta * x)).real
    return value


def quad_fourier_three_point(k1, k2, k3, normalization=1.0, nodes=80,
                             half_width=8.5):
    """Transform of the three-point kernel by per-component 2d quadrature.

    Surface coordinates (x1, x2) with x3 = -(x1 + x2); the Gaussian and
    the phase factorize over the four components, each a 2d integral
    Int dx dy exp(-(x^2 + y^2 + x y)) exp(i(a x + b y)) with
    a = k1c - k3c, b = k2c - k3c.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = half_width * x
    w = half_width * w
    xx, yy = np.meshgrid(x, x, indexing="ij")
    ww = np.outer(w, w)
    base = np.exp(-(xx ** 2 + yy ** 2 + xx * yy))
    value = normalization
    for c in range(4):
        a = k1[c] - k3[c]
        b = k2[c] - k3[c]
        value *= np.sum(ww * base * np.exp(1j * (a * xx + b * yy))).real
    return value


def massless_commutator_closed_form(t, r, char_width):
    """Gaussian-difference closed form of the damped massless commutator.

    Radial reduction of the momentum integral: with beta = 2*char_width,
    C(t, r) = -i/(2 pi^2 r) * sqrt(pi/beta)/4
              * (exp(-(r-t)^2/(4 beta)) - exp(-(r+t)^2/(4 beta))).
    """
    beta = 2.0 * char_width
    amp = np.sqrt(np.pi / beta) / 4.0
    gauss = np.exp(-(r - t) ** 2 / (4 * beta)) - np.exp(-(r + t) ** 2 / (4 * beta))
    return -1j / (2.0 * np.pi ** 2 * r) * amp * gauss
