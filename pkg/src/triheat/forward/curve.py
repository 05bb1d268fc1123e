"""Sampled heat content curves and their CSV form ``t,H,err,method``."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

METHODS = ("fem", "montecarlo", "rectangle_series", "asymptotic")


@dataclass
class HeatCurve:
    times: np.ndarray
    values: np.ndarray
    method: str
    error_estimates: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float).ravel()
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.error_estimates is None:
            self.error_estimates = np.zeros_like(self.values)
        self.error_estimates = np.asarray(self.error_estimates, dtype=float).ravel()
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not (len(self.times) == len(self.values) == len(self.error_estimates)):
            raise DomainError("times, values and error estimates differ in length")
        if len(self.times) == 0:
            raise DomainError("empty heat curve")
        if np.any(self.times <= 0) or np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be positive and strictly increasing")
        if np.any(self.error_estimates < 0):
            raise DomainError("error estimates must be nonnegative")

    def __len__(self):
        return len(self.times)

    def window(self, t0: float, t1: float) -> "HeatCurve":
        keep = (self.times >= t0) & (self.times <= t1)
        return HeatCurve(self.times[keep], self.values[keep], self.method,
                         self.error_estimates[keep], dict(self.meta))

    def is_monotone(self, slack: float = 0.0) -> bool:
        """Nonincreasing in t up to the error estimates (plus ``slack``)."""
        room = self.error_estimates[:-1] + self.error_estimates[1:] + slack
        return bool(np.all(np.diff(self.values) <= room))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "H", "err", "method"])
        for t, h, e in zip(self.times, self.values, self.error_estimates):
            w.writerow([repr(float(t)), repr(float(h)), repr(float(e)), self.method])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "HeatCurve":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise DomainError("CSV holds no samples")
        missing = {"t", "H", "err", "method"} - set(rows[0])
        if missing:
            raise DomainError(f"CSV lacks columns {sorted(missing)}")
        methods = {r["method"] for r in rows}
        if len(methods) != 1:
            raise DomainError(f"CSV mixes methods {sorted(methods)}")
        return cls([float(r["t"]) for r in rows], [float(r["H"]) for r in rows],
                   methods.pop(), [float(r["err"]) for r in rows])
