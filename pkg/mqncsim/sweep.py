# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Error-rate sweeps and the critical error rate at which S falls to 2."""

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.optimize

from .analysis import bell_transform, chsh_s, concurrence, fidelity, pair_metrics, sample_tomography_counts, tomography, werner_s
from .exception import QnetError
from .noise import NoiseModel
from .protocols import run_instance
from .quantum import with_current_limits
from .util import standardError

__all__ = ["CritReport", "SweepPoint", "SweepResult", "SWEEP_CSV_COLUMNS", "epsilon_crit", "epsilon_sweep", "load_sweep_csv"]

log = logging.getLogger(__name__)

CLASSICAL_BOUND = 2.0
SWEEP_CSV_COLUMNS = ("epsilon", "pair", "F", "F_stderr", "S", "S_stderr", "seed")


@dataclass(frozen=True)
class SweepPoint:
    epsilon: float
    pair: str
    F: float
    F_stderr: float
    S: float
    S_stderr: float
    C: Optional[float] = None
    werner_deviation: Optional[float] = None


@dataclass(frozen=True)
class CritReport:
    """Root of S(eps) = 2. `interval` is swept by S -/+ one standard error;
    `smoothed` marks a non-monotone input that was made monotone first.
    """

    value: Optional[float]
    interval: Optional[Tuple[Optional[float], Optional[float]]] = None
    reason: Optional[str] = None
    smoothed: bool = False


@dataclass
class SweepResult:
    points: List[SweepPoint]
    estimator: str = "exact"
    seed: int = 0
    crit: Dict[str, CritReport] = field(default_factory=dict)

    @property
    def pairs(self):
        return sorted(set(p.pair for p in self.points))

    @property
    def epsilons(self):
        return sorted(set(p.epsilon for p in self.points))

    def series(self, pair):
        pts = sorted((p for p in self.points if p.pair == pair), key=lambda p: p.epsilon)
        return pts

    @property
    def epsilon_crit(self):
        """Lowest critical rate over the pairs, or None"""
        values = [r.value for r in self.crit.values() if r.value is not None]
        return min(values) if values else None

    def toDict(self):
        return dict(
            (
                ("estimator", self.estimator),
                ("seed", self.seed),
                ("points", self.points),
                ("epsilon_crit", self.epsilon_crit),
                ("crit", self.crit),
            )
        )


## sweep
def _checkGrid(grid):
    grid = [float(e) for e in grid]
    if not grid:
        raise QnetError("an error-rate sweep needs a non-empty grid.")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise QnetError("sweep grid must be strictly increasing.", grid=grid)
    if grid[0] < 0 or grid[-1] > 1:
        raise QnetError("sweep grid must lie within [0, 1].", grid=grid)
    return grid


def _subSeed(seed, index, repeat):
    return int(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, index, repeat]).generate_state(1, np.uint64)[0])


def _exactPoint(p, epsilon, noisy_measurement):
    run = run_instance(p, NoiseModel(epsilon, noisy_measurement), "exact")
    points = []
    for pair in p.pairs:
        m = pair_metrics(run.pair_state(pair), pair.target, pair.bell_transform)
        points.append(SweepPoint(epsilon, pair.label, m["F"], 0.0, m["S"], 0.0, m["C"], m["werner_deviation"]))
    return points


def _sampledPoint(p, epsilon, noisy_measurement, index, shots, repeats, seed):
    samples = dict((pair.label, ([], [], [])) for pair in p.pairs)
    for r in range(repeats):
        subSeed = _subSeed(seed, index, r)
        run = run_instance(p, NoiseModel(epsilon, noisy_measurement), "shot-sampled", shots=shots, seed=subSeed)
        rng = np.random.default_rng(subSeed)
        for pair in p.pairs:
            est = tomography(sample_tomography_counts(run.pair_state(pair), shots, rng)).rho
            Fs, Ss, Cs = samples[pair.label]
            Fs.append(fidelity(est, pair.target))
            Ss.append(chsh_s(bell_transform(est) if pair.bell_transform else est))
            Cs.append(concurrence(est))

    points = []
    for pair in p.pairs:
        Fs, Ss, Cs = samples[pair.label]
        F, S = float(np.mean(Fs)), float(np.mean(Ss))
        points.append(SweepPoint(epsilon, pair.label, F, standardError(Fs), S, standardError(Ss), float(np.mean(Cs)), abs(S - werner_s(max(F, 0.25)))))
    return points


def epsilon_sweep(p, grid, estimator="exact", shots=1024, repeats=10, seed=0, noisy_measurement=False, workers=1):
    """Pair fidelity, CHSH value and concurrence of p over an error-rate grid.

    exact evaluates density matrices; shot-sampled runs `repeats` trajectory
    batches of `shots` shots per point, reconstructs each pair by tomography and
    reports mean and standard error.
    """
    grid = _checkGrid(grid)
    if estimator not in ("exact", "shot-sampled"):
        raise QnetError("unknown estimator.", estimator=estimator)

    def work(item):
        index, epsilon = item
        if estimator == "exact":
            return _exactPoint(p, epsilon, noisy_measurement)
        return _sampledPoint(p, epsilon, noisy_measurement, index, shots, repeats, seed)

    items = list(enumerate(grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(with_current_limits(work), items))
    else:
        results = [work(item) for item in items]

    result = SweepResult([pt for pts in results for pt in pts], estimator, seed)
    result.crit = dict((pair, epsilon_crit(result, pair)) for pair in result.pairs)
    return result


## critical error rate
def _crossing(eps, S, threshold):
    for i in range(1, len(S)):
        if S[i - 1] > threshold >= S[i]:
            span = S[i - 1] - S[i]
            return float(eps[i - 1] + (S[i - 1] - threshold) / span * (eps[i] - eps[i - 1]))
    return None


def epsilon_crit(sweep, pair=None, threshold=CLASSICAL_BOUND):
    """Piecewise-linear root of S(eps) = threshold for one pair.

    `sweep` is a SweepResult (pair defaults to its first pair) or a sequence of
    (epsilon, S, S_stderr) rows. A non-monotone S beyond its standard errors is
    flagged and replaced by its decreasing isotonic fit before interpolation.
    """
    if isinstance(sweep, SweepResult):
        pair = pair or (sweep.pairs[0] if sweep.pairs else None)
        rows = [(pt.epsilon, pt.S, pt.S_stderr) for pt in sweep.series(pair)]
    else:
        rows = sorted(tuple(r) for r in sweep)

    if not rows:
        return CritReport(None, reason="empty sweep")

    eps = np.array([r[0] for r in rows])
    S = np.array([r[1] for r in rows])
    err = np.array([r[2] for r in rows])

    smoothed = False
    tolerance = max(float(err.max()), 1e-9)
    if np.any(np.diff(S) > tolerance):
        log.warning("S is not monotone in epsilon for pair %s; using its isotonic fit", pair)
        S = scipy.optimize.isotonic_regression(S, increasing=False).x
        smoothed = True

    if S[-1] > threshold:
        return CritReport(None, reason="S stays above the threshold over the whole grid", smoothed=smoothed)
    if S[0] <= threshold:
        return CritReport(None, reason="S starts at or below the threshold", smoothed=smoothed)

    value = _crossing(eps, S, threshold)
    interval = (_crossing(eps, S - err, threshold), _crossing(eps, S + err, threshold))
    return CritReport(value, interval, None, smoothed)


## csv re-ingestion
def load_sweep_csv(path):
    points = []
    seed = 0
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        missing = set(SWEEP_CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise QnetError("sweep CSV is missing columns.", path=path, missing=sorted(missing))
        for row in reader:
            seed = int(row["seed"])
            points.append(SweepPoint(float(row["epsilon"]), row["pair"], float(row["F"]), float(row["F_stderr"]), float(row["S"]), float(row["S_stderr"])))

    result = SweepResult(points, seed=seed)
    result.crit = dict((pair, epsilon_crit(result, pair)) for pair in result.pairs)
    return result
