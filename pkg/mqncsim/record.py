# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import csv
import datetime
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import h5py
import numpy as np
import simplejson

from ._version import __version__
from .exception import QnetError
from .scaling import SCALING_CSV_COLUMNS, ScalingResult
from .sweep import SWEEP_CSV_COLUMNS, SweepResult
from .util import jsonize

__all__ = ["ResultRecord", "emit", "toJson"]

FORMATS = ("json", "csv", "hdf5")


@dataclass
class ResultRecord:
    """Outcome of one experiment. Every metric is a dict with at least "value"
    and "estimator"; "stderr" is present for sampled estimates.
    """

    kind: str
    config: Dict[str, Any]
    seed: int
    metrics: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    sweep: Optional[SweepResult] = None
    scaling: Optional[ScalingResult] = None
    timestamp: Optional[str] = None
    version: str = __version__

    def add_metric(self, name, value, estimator, stderr=None, **extra):
        metric = dict((("value", value), ("estimator", estimator)))
        if stderr is not None:
            metric["stderr"] = stderr
        metric.update(extra)
        self.metrics[name] = metric

    def stamp(self):
        self.timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        return self

    def toDict(self):
        provenance = dict((("seed", self.seed), ("version", self.version)))
        if self.timestamp is not None:
            provenance["timestamp"] = self.timestamp
        return dict(
            (
                ("kind", self.kind),
                ("config", self.config),
                ("provenance", provenance),
                ("metrics", self.metrics),
                ("details", self.details),
                ("sweep", self.sweep),
                ("scaling", self.scaling),
            )
        )


def toJson(record):
    return simplejson.dumps(jsonize(record), ignore_nan=True, sort_keys=True, indent=2)


## writers
def _writeJson(record, path):
    with open(path, "w") as f:
        f.write(toJson(record))
        f.write("\n")


def _writeCsv(record, path):
    with open(path, "w", newline="") as f:
        if record.kind == "sweep":
            w = csv.DictWriter(f, fieldnames=SWEEP_CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            for pt in record.sweep.points if record.sweep is not None else ():
                w.writerow(dict((("epsilon", pt.epsilon), ("pair", pt.pair), ("F", pt.F), ("F_stderr", pt.F_stderr), ("S", pt.S), ("S_stderr", pt.S_stderr), ("seed", record.seed))))
            return
        if record.kind == "scaling":
            w = csv.DictWriter(f, fieldnames=SCALING_CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            for pt in record.scaling.points if record.scaling is not None else ():
                w.writerow(dict((("n", pt.n), ("epsilon", pt.epsilon), ("F", pt.F), ("F_stderr", pt.F_stderr), ("seed", record.seed))))
            return

        w = csv.DictWriter(f, fieldnames=("metric", "value", "stderr", "estimator", "seed"), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for name, metric in sorted(record.metrics.items()):
            w.writerow(dict((("metric", name), ("value", metric["value"]), ("stderr", metric.get("stderr", "")), ("estimator", metric["estimator"]), ("seed", record.seed))))


# no object timestamps anywhere in the file
def _untimed(kind):
    plist = h5py.h5p.create(kind)
    plist.set_obj_track_times(False)
    return plist


def _createHdf5(path):
    fid = h5py.h5f.create(os.fsencode(path), h5py.h5f.ACC_TRUNC, fcpl=_untimed(h5py.h5p.FILE_CREATE))
    return h5py.File(fid)


def _group(parent, name):
    return h5py.Group(h5py.h5g.create(parent.id, name.encode(), gcpl=_untimed(h5py.h5p.GROUP_CREATE)))


def _dataset(parent, name, data):
    return parent.create_dataset(name, data=data, track_times=False)


def _writeHdf5(record, path):
    with _createHdf5(path) as f:
        f.attrs["kind"] = record.kind
        f.attrs["seed"] = record.seed
        f.attrs["version"] = record.version
        f.attrs["config"] = simplejson.dumps(jsonize(record.config), sort_keys=True)
        if record.timestamp is not None:
            f.attrs["timestamp"] = record.timestamp

        metrics = _group(f, "metrics")
        for name, metric in sorted(record.metrics.items()):
            dset = _dataset(metrics, name, np.asarray(np.nan if metric["value"] is None else metric["value"]))
            dset.attrs["estimator"] = metric["estimator"]
            if "stderr" in metric:
                dset.attrs["stderr"] = metric["stderr"]

        details = _group(f, "details")
        for name, value in sorted(record.details.items()):
            if isinstance(value, np.ndarray):
                _dataset(details, name, value)
            else:
                details.attrs[name] = simplejson.dumps(jsonize(value), ignore_nan=True, sort_keys=True)

        if record.sweep is not None:
            sweep = _group(f, "sweep")
            sweep.attrs["estimator"] = record.sweep.estimator
            for pair in record.sweep.pairs:
                pts = record.sweep.series(pair)
                grp = _group(sweep, pair)
                for column in ("epsilon", "F", "F_stderr", "S", "S_stderr"):
                    _dataset(grp, column, np.array([getattr(pt, column) for pt in pts], dtype=float))
                crit = record.sweep.crit.get(pair)
                grp.attrs["epsilon_crit"] = np.nan if crit is None or crit.value is None else crit.value

        if record.scaling is not None:
            scaling = _group(f, "scaling")
            scaling.attrs["estimator"] = record.scaling.estimator
            for n in record.scaling.lengths:
                pts = record.scaling.series(n)
                grp = _group(scaling, f"G{n}")
                grp.attrs["n"] = n
                for column in ("epsilon", "F", "F_stderr"):
                    _dataset(grp, column, np.array([getattr(pt, column) for pt in pts], dtype=float))


_WRITERS = dict((("json", _writeJson), ("csv", _writeCsv), ("hdf5", _writeHdf5)))


def emit(record, fmt, path):
    if fmt not in _WRITERS:
        raise QnetError("unknown output format.", format=fmt, formats=FORMATS)

    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise QnetError("output path is not writable.", path=path)
    try:
        _WRITERS[fmt](record, path)
    except OSError as e:
        raise QnetError("could not write output file.", path=path, error=str(e)) from e
    return path
