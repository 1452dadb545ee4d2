"""
Closed-form solutions used as references for the CN solvers.
"""
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import norm


def gaussian_heat_kernel(k: float, t0: float, x: ArrayLike, t: ArrayLike):
    """Heat kernel exp(-x^2/(4k(t+t0))) / sqrt(4 pi k (t+t0)); solves V_t = k V_xx."""
    s = 4.0 * k * (np.asarray(t, dtype=float) + t0)
    xs = np.asarray(x, dtype=float)
    return np.exp(-xs * xs / s) / np.sqrt(math.pi * s)


def power_growth_rate(r: float, sigma: float, p: float) -> float:
    """kappa with x^p exp(kappa (T - t)) solving the rcd equation."""
    return (p - 1.0) * (r + 0.5 * sigma * sigma * p)


def rcd_power_solution(r: float, sigma: float, p: float, T: float, x: ArrayLike, t: ArrayLike):
    """x^p exp(kappa (T - t)), terminal data x^p at t = T."""
    kappa = power_growth_rate(r, sigma, p)
    return np.asarray(x, dtype=float) ** p * np.exp(kappa * (T - np.asarray(t, dtype=float)))


def black_scholes_call(r: float, sigma: float, strike: float, T: float, x: ArrayLike, t: ArrayLike):
    """European call value; equals the payoff max(x - K, 0) at t = T."""
    xs = np.asarray(x, dtype=float)
    tau = T - np.asarray(t, dtype=float)
    xs, tau = np.broadcast_arrays(xs, tau)
    out = np.maximum(xs - strike, 0.0).astype(float)
    live = tau > 0.0
    if np.any(live):
        xl, tl = xs[live], tau[live]
        vol = sigma * np.sqrt(tl)
        d1 = (np.log(xl / strike) + (r + 0.5 * sigma * sigma) * tl) / vol
        d2 = d1 - vol
        out[live] = xl * norm.cdf(d1) - strike * np.exp(-r * tl) * norm.cdf(d2)
    return out
