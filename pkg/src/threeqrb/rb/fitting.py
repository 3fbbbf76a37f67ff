"""Weighted least-squares fits of ``A * alpha**m + B`` to survival curves."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

STDERR_FLOOR = 1e-7
FLAT_TOL = 1e-9


class FitError(RuntimeError):
    """Decay fit failed; ``curve`` holds the raw ``(m, mean, stderr)`` data."""

    def __init__(self, message: str, curve=None):
        super().__init__(message)
        self.curve = curve


@dataclass(frozen=True)
class DecayFit:
    A: float
    alpha: float
    B: float
    sigma_A: float
    sigma_alpha: float
    sigma_B: float
    residual: float
    status: str = "ok"          # "ok" or "degenerate"
    reduced_chi2: float = 0.0

    def model(self, m) -> np.ndarray:
        return self.A * self.alpha ** np.asarray(m, dtype=float) + self.B

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("A", "alpha", "B", "sigma_A", "sigma_alpha", "sigma_B", "residual", "status", "reduced_chi2")}


@dataclass(frozen=True)
class RBCurve:
    """Survival probabilities indexed ``[seed, length]``."""

    lengths: tuple
    survival: np.ndarray

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.survival, dtype=float))
        if s.shape[1] != len(self.lengths):
            raise ValueError("survival columns must match lengths")
        object.__setattr__(self, "survival", s)
        object.__setattr__(self, "lengths", tuple(int(m) for m in self.lengths))

    @property
    def mean(self) -> np.ndarray:
        return self.survival.mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        k = self.survival.shape[0]
        if k < 2:
            return np.zeros(len(self.lengths))
        return self.survival.std(axis=0, ddof=1) / np.sqrt(k)


def initial_guess(m, y, b0: float) -> tuple:
    """``B0`` fixed by the observable, ``A0`` from the first point, alpha0 by log-linear regression."""
    m = np.asarray(m, dtype=float)
    y = np.asarray(y, dtype=float)
    a0 = y[0] - b0
    ok = (y - b0) > 1e-12
    alpha0 = 0.9
    if ok.sum() >= 2:
        slope = np.polyfit(m[ok], np.log(y[ok] - b0), 1)[0]
        alpha0 = float(np.exp(slope))
    alpha0 = float(np.clip(alpha0, 1e-3, 1 - 1e-9))
    if abs(a0) < 1e-12:
        a0 = 1 - b0
    return a0, alpha0, b0


def _model(m, a, alpha, b):
    return a * alpha**m + b


def fit_decay(m, mean, stderr=None, n_qubits: int = 1, mode: str = "joint") -> DecayFit:
    """Fit ``A alpha^m + B`` with weights ``1/stderr``.

    Parameter errors come from the curvature of the weighted residual, inflated
    by the reduced chi-square when the scatter exceeds the quoted errors.
    """
    m = np.asarray(m, dtype=float)
    y = np.asarray(mean, dtype=float)
    if m.shape != y.shape or m.ndim != 1:
        raise ValueError("m and mean must be 1-D arrays of equal length")
    curve = (m.copy(), y.copy(), None if stderr is None else np.asarray(stderr, dtype=float).copy())
    if len(np.unique(m)) < 3:
        raise FitError("need at least 3 distinct lengths", curve)
    if mode not in ("joint", "marginal"):
        raise ValueError(f"unknown observable mode {mode!r}")
    if np.ptp(y) <= FLAT_TOL:
        if abs(y.mean() - 1.0) <= FLAT_TOL:
            return DecayFit(0.0, 1.0, float(y.mean()), 0.0, 0.0, 0.0, float(np.sum((y - 1) ** 2)), "degenerate")
        raise FitError(f"constant survival {y.mean():.6g} carries no decay information", curve)
    sigma = np.full_like(y, 1.0) if stderr is None else np.maximum(np.asarray(stderr, dtype=float), STDERR_FLOOR)
    b0 = 0.5 ** n_qubits if mode == "joint" else 0.5
    p0 = initial_guess(m, y, b0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(
                _model, m, y, p0=p0, sigma=sigma, absolute_sigma=True,
                bounds=([-np.inf, 0.0, -np.inf], [np.inf, 1.0, np.inf]), maxfev=20000,
                x_scale=[1.0, 0.1, 1.0],
            )
    except (RuntimeError, ValueError) as exc:
        raise FitError(f"fit did not converge: {exc}", curve) from None
    resid = (y - _model(m, *popt)) / sigma
    chi2 = float(resid @ resid)
    dof = max(len(m) - 3, 1)
    red = chi2 / dof
    if stderr is None:
        pcov = pcov * red
    elif red > 1:
        pcov = pcov * red
    if not np.all(np.isfinite(pcov)):
        raise FitError("singular covariance: parameters not identifiable", curve)
    err = np.sqrt(np.clip(np.diag(pcov), 0, None))
    ssr = float(np.sum((y - _model(m, *popt)) ** 2))
    return DecayFit(float(popt[0]), float(popt[1]), float(popt[2]), float(err[0]), float(err[1]), float(err[2]),
                    ssr, "ok", red)


def fit_curve(curve: RBCurve, n_qubits: int = 1, mode: str = "joint", bootstrap: int = 0,
              rng: np.random.Generator | None = None) -> DecayFit:
    """Fit the seed-averaged curve; ``bootstrap > 0`` replaces sigma_alpha by a resample-over-seeds estimate."""
    fit = fit_decay(curve.lengths, curve.mean, curve.stderr, n_qubits, mode)
    if bootstrap <= 0 or fit.status == "degenerate":
        return fit
    rng = rng or np.random.default_rng(0)
    k = curve.survival.shape[0]
    alphas = []
    for _ in range(bootstrap):
        sample = RBCurve(curve.lengths, curve.survival[rng.integers(0, k, k)])
        try:
            alphas.append(fit_decay(sample.lengths, sample.mean, sample.stderr, n_qubits, mode).alpha)
        except FitError:
            continue
    if len(alphas) < 2:
        raise FitError("bootstrap produced too few successful fits", (curve.lengths, curve.mean, curve.stderr))
    return DecayFit(fit.A, fit.alpha, fit.B, fit.sigma_A, float(np.std(alphas, ddof=1)), fit.sigma_B,
                    fit.residual, "bootstrap", fit.reduced_chi2)
