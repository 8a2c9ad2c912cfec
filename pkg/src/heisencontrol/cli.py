"""Command-line front end: scenario configs in, CSV/JSON artifacts out.

Every run is a single JSON config document plus an output path.  Bulk
numbers go to CSV (floats with 17 significant digits), verdicts to JSON
with stable key order, so outputs diff cleanly and serve as golden
files.  Exit codes: 0 ok, 2 config or precondition error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, core, subgroups, systems

GENERIC_POINTS = ((0.37, 0.21), (1.5, 0.8), (-2.3, 0.43), (7.7, 0.9), (0.11, 0.05))


class CliError(Exception):
    """Configuration or precondition problem; maps to exit code 2."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# config parsing: strict dicts -> plain frozen specs (JSON-native fields)
# ---------------------------------------------------------------------------

class _Reader:
    """Dict reader that records consumed keys and rejects leftovers."""

    def __init__(self, data, ctx: str):
        if not isinstance(data, dict):
            raise CliError(f"{ctx}: expected an object")
        self.data = data
        self.ctx = ctx
        self.seen = set()

    def req(self, key, conv):
        if key not in self.data:
            raise CliError(f"{self.ctx}: missing required key '{key}'")
        self.seen.add(key)
        return conv(self.data[key], f"{self.ctx}.{key}")

    def opt(self, key, conv, default):
        if key not in self.data:
            return default
        self.seen.add(key)
        return conv(self.data[key], f"{self.ctx}.{key}")

    def done(self):
        unknown = sorted(set(self.data) - self.seen)
        if unknown:
            raise CliError(f"{self.ctx}: unknown keys {unknown}")


def _float(x, ctx):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise CliError(f"{ctx}: expected a number")
    return float(x)


def _int(x, ctx):
    if isinstance(x, bool) or not isinstance(x, int):
        raise CliError(f"{ctx}: expected an integer")
    return int(x)


def _str(x, ctx):
    if not isinstance(x, str):
        raise CliError(f"{ctx}: expected a string")
    return x


def _floats(n):
    def conv(x, ctx):
        if not isinstance(x, list) or len(x) != n:
            raise CliError(f"{ctx}: expected a list of {n} numbers")
        return tuple(_float(v, ctx) for v in x)
    return conv


def _float_list(x, ctx):
    if not isinstance(x, list) or not x:
        raise CliError(f"{ctx}: expected a nonempty list of numbers")
    return tuple(_float(v, ctx) for v in x)


def _mat2(x, ctx):
    if not isinstance(x, list) or len(x) != 2:
        raise CliError(f"{ctx}: expected a 2x2 matrix as nested lists")
    return tuple(_floats(2)(row, ctx) for row in x)


@dataclass(frozen=True)
class FieldSpec:
    A: tuple
    eta: tuple

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        spec = cls(A=r.req("A", _mat2), eta=r.req("eta", _floats(2)))
        r.done()
        return spec

    def to_dict(self):
        return {"A": [list(self.A[0]), list(self.A[1])], "eta": list(self.eta)}

    def build(self) -> core.LinearField:
        return core.LinearField(np.array(self.A), np.array(self.eta))


@dataclass(frozen=True)
class PointSpec:
    v: tuple
    z: float

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        spec = cls(v=r.req("v", _floats(2)), z=r.req("z", _float))
        r.done()
        return spec

    def to_dict(self):
        return {"v": list(self.v), "z": self.z}

    def build(self) -> core.GroupElement:
        return core.GroupElement(np.array(self.v), self.z)


_KINDS_WITH_P = {"dim2", "line_times_lattice", "discrete_line", "full_lattice"}


@dataclass(frozen=True)
class SubgroupSpec:
    kind: str
    param: int = 0

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        kind = r.req("kind", _str)
        if kind in _KINDS_WITH_P:
            param = r.req("p", _int)
        elif kind == "lattice_cylinder":
            param = r.req("k", _int)
        elif kind == "center_lattice":
            param = 0
        else:
            raise CliError(f"{ctx}: unknown subgroup kind '{kind}'")
        r.done()
        return cls(kind=kind, param=param)

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind in _KINDS_WITH_P:
            out["p"] = self.param
        elif self.kind == "lattice_cylinder":
            out["k"] = self.param
        return out

    def build(self) -> subgroups.Subgroup:
        try:
            return subgroups.Subgroup(subgroups.SubgroupFamily(self.kind), self.param)
        except ValueError as exc:
            raise CliError(str(exc)) from exc


@dataclass(frozen=True)
class Sigma11Spec:
    lam: float
    b: float
    a: float = 0.0
    c: float = 0.0
    alpha: float = 0.0
    gamma: float = 0.0

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        spec = cls(lam=r.req("lam", _float), b=r.req("b", _float),
                   a=r.opt("a", _float, 0.0), c=r.opt("c", _float, 0.0),
                   alpha=r.opt("alpha", _float, 0.0),
                   gamma=r.opt("gamma", _float, 0.0))
        r.done()
        return spec

    def to_dict(self):
        return {"lam": self.lam, "b": self.b, "a": self.a, "c": self.c,
                "alpha": self.alpha, "gamma": self.gamma}

    def build(self) -> systems.Sigma11Params:
        try:
            return systems.Sigma11Params(lam=self.lam, b=self.b, a=self.a,
                                         c=self.c, alpha=self.alpha, gamma=self.gamma)
        except ValueError as exc:
            raise CliError(str(exc)) from exc


@dataclass(frozen=True)
class Sigma10Spec:
    lam: float
    beta: float
    alpha: float = 0.0
    gamma: float = 0.0
    a: tuple = (0.0, 0.0, 0.0)
    b: tuple = (0.0, 0.0, 0.0)
    c: tuple = (0.0, 0.0, 0.0)

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        zero3 = (0.0, 0.0, 0.0)
        spec = cls(lam=r.req("lam", _float), beta=r.req("beta", _float),
                   alpha=r.opt("alpha", _float, 0.0), gamma=r.opt("gamma", _float, 0.0),
                   a=r.opt("a", _floats(3), zero3), b=r.opt("b", _floats(3), zero3),
                   c=r.opt("c", _floats(3), zero3))
        r.done()
        return spec

    def to_dict(self):
        return {"lam": self.lam, "beta": self.beta, "alpha": self.alpha,
                "gamma": self.gamma, "a": list(self.a), "b": list(self.b),
                "c": list(self.c)}

    def build(self) -> systems.Sigma10Params:
        try:
            return systems.Sigma10Params(lam=self.lam, beta=self.beta,
                                         alpha=self.alpha, gamma=self.gamma,
                                         a=self.a, b=self.b, c=self.c)
        except ValueError as exc:
            raise CliError(str(exc)) from exc


@dataclass(frozen=True)
class Sigma0pSpec:
    p: int
    beta: float
    alpha: float = 0.0
    gamma: float = 0.0
    a: tuple = (0.0, 0.0, 0.0)
    b: tuple = (0.0, 0.0, 0.0)
    c: tuple = (0.0, 0.0, 0.0)

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        zero3 = (0.0, 0.0, 0.0)
        spec = cls(p=r.req("p", _int), beta=r.req("beta", _float),
                   alpha=r.opt("alpha", _float, 0.0), gamma=r.opt("gamma", _float, 0.0),
                   a=r.opt("a", _floats(3), zero3), b=r.opt("b", _floats(3), zero3),
                   c=r.opt("c", _floats(3), zero3))
        r.done()
        return spec

    def to_dict(self):
        return {"p": self.p, "beta": self.beta, "alpha": self.alpha,
                "gamma": self.gamma, "a": list(self.a), "b": list(self.b),
                "c": list(self.c)}

    def build(self) -> systems.Sigma0pParams:
        try:
            return systems.Sigma0pParams(p=self.p, beta=self.beta,
                                         alpha=self.alpha, gamma=self.gamma,
                                         a=self.a, b=self.b, c=self.c)
        except ValueError as exc:
            raise CliError(str(exc)) from exc


@dataclass(frozen=True)
class BoxSpec:
    lower: tuple
    upper: tuple

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        spec = cls(lower=r.req("lower", _float_list), upper=r.req("upper", _float_list))
        r.done()
        return spec

    def to_dict(self):
        return {"lower": list(self.lower), "upper": list(self.upper)}

    def build(self) -> systems.ControlBox:
        try:
            return systems.ControlBox(np.array(self.lower), np.array(self.upper))
        except ValueError as exc:
            raise CliError(str(exc)) from exc


@dataclass(frozen=True)
class SignalSpec:
    pieces: tuple  # of (duration, values tuple)

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        raw = r.req("pieces", lambda x, c: x)
        r.done()
        if not isinstance(raw, list) or not raw:
            raise CliError(f"{ctx}.pieces: expected a nonempty list")
        pieces = []
        for i, piece in enumerate(raw):
            pr = _Reader(piece, f"{ctx}.pieces[{i}]")
            dur = pr.req("duration", _float)
            val = pr.req("value", _float_list)
            pr.done()
            pieces.append((dur, val))
        return cls(pieces=tuple(pieces))

    def to_dict(self):
        return {"pieces": [{"duration": d, "value": list(v)} for d, v in self.pieces]}

    def build(self) -> systems.ControlSignal:
        try:
            return systems.ControlSignal(tuple((d, np.array(v)) for d, v in self.pieces))
        except ValueError as exc:
            raise CliError(str(exc)) from exc


@dataclass(frozen=True)
class GridSpec:
    s_lo: float
    s_hi: float
    s_cells: int = 200
    t_cells: int = 200
    control_levels: int = 9
    dwell: float = 0.05
    expansion_time: float = 1.0

    @classmethod
    def parse(cls, data, ctx):
        r = _Reader(data, ctx)
        spec = cls(s_lo=r.req("s_lo", _float), s_hi=r.req("s_hi", _float),
                   s_cells=r.opt("s_cells", _int, 200),
                   t_cells=r.opt("t_cells", _int, 200),
                   control_levels=r.opt("control_levels", _int, 9),
                   dwell=r.opt("dwell", _float, 0.05),
                   expansion_time=r.opt("expansion_time", _float, 1.0))
        r.done()
        return spec

    def to_dict(self):
        return {"s_lo": self.s_lo, "s_hi": self.s_hi, "s_cells": self.s_cells,
                "t_cells": self.t_cells, "control_levels": self.control_levels,
                "dwell": self.dwell, "expansion_time": self.expansion_time}

    def build(self) -> analysis.GridConfig:
        try:
            return analysis.GridConfig(**self.to_dict())
        except ValueError as exc:
            raise CliError(str(exc)) from exc


# ---------------------------------------------------------------------------
# per-command configs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlowConfig:
    field: FieldSpec
    g0: PointSpec
    t_min: float
    t_max: float
    samples: int
    seed: int = 0

    @classmethod
    def parse(cls, data):
        r = _Reader(data, "config")
        cfg = cls(field=r.req("field", FieldSpec.parse),
                  g0=r.req("g0", PointSpec.parse),
                  t_min=r.req("t_min", _float), t_max=r.req("t_max", _float),
                  samples=r.req("samples", _int), seed=r.opt("seed", _int, 0))
        r.done()
        if cfg.samples < 2 or cfg.t_min >= cfg.t_max:
            raise CliError("flow needs samples >= 2 and t_min < t_max")
        return cfg

    def to_dict(self):
        return {"field": self.field.to_dict(), "g0": self.g0.to_dict(),
                "t_min": self.t_min, "t_max": self.t_max,
                "samples": self.samples, "seed": self.seed}


@dataclass(frozen=True)
class InvarianceConfig:
    subgroup: SubgroupSpec
    field: FieldSpec
    tol: float = 1e-9
    samples: int = 40
    times: tuple = subgroups.DEFAULT_TIMES
    seed: int = 0

    @classmethod
    def parse(cls, data):
        r = _Reader(data, "config")
        cfg = cls(subgroup=r.req("subgroup", SubgroupSpec.parse),
                  field=r.req("field", FieldSpec.parse),
                  tol=r.opt("tol", _float, 1e-9),
                  samples=r.opt("samples", _int, 40),
                  times=r.opt("times", _float_list, subgroups.DEFAULT_TIMES),
                  seed=r.opt("seed", _int, 0))
        r.done()
        if cfg.tol <= 0 or cfg.samples < 1:
            raise CliError("invariance needs tol > 0 and samples >= 1")
        return cfg

    def to_dict(self):
        return {"subgroup": self.subgroup.to_dict(), "field": self.field.to_dict(),
                "tol": self.tol, "samples": self.samples,
                "times": list(self.times), "seed": self.seed}


_SYSTEM_SPECS = {"sigma_11": Sigma11Spec, "sigma_10": Sigma10Spec, "sigma_0p": Sigma0pSpec}


@dataclass(frozen=True)
class SimulateConfig:
    system: str
    params: object
    initial: tuple
    signal: SignalSpec
    dt: float = 1e-3
    stride: int = 1
    box: BoxSpec | None = None
    seed: int = 0

    @classmethod
    def parse(cls, data):
        r = _Reader(data, "config")
        system = r.req("system", _str)
        if system not in _SYSTEM_SPECS:
            raise CliError(f"config.system: expected one of {sorted(_SYSTEM_SPECS)}")
        cfg = cls(system=system,
                  params=r.req("params", _SYSTEM_SPECS[system].parse),
                  initial=r.req("initial", _float_list),
                  signal=r.req("signal", SignalSpec.parse),
                  dt=r.opt("dt", _float, 1e-3),
                  stride=r.opt("stride", _int, 1),
                  box=r.opt("box", BoxSpec.parse, None),
                  seed=r.opt("seed", _int, 0))
        r.done()
        dim = 3 if system == "sigma_0p" else 2
        if len(cfg.initial) != dim:
            raise CliError(f"config.initial: {system} needs {dim} coordinates")
        if cfg.dt <= 0 or cfg.stride < 1:
            raise CliError("simulate needs dt > 0 and stride >= 1")
        return cfg

    def to_dict(self):
        out = {"system": self.system, "params": self.params.to_dict(),
               "initial": list(self.initial), "signal": self.signal.to_dict(),
               "dt": self.dt, "stride": self.stride}
        if self.box is not None:
            out["box"] = self.box.to_dict()
        out["seed"] = self.seed
        return out


@dataclass(frozen=True)
class ControlsetConfig:
    params: Sigma11Spec
    box: BoxSpec
    grid: GridSpec | None = None
    horizon: float = 20.0
    seed_state: tuple | None = None
    seed: int = 0

    @classmethod
    def parse(cls, data):
        r = _Reader(data, "config")
        cfg = cls(params=r.req("params", Sigma11Spec.parse),
                  box=r.req("box", BoxSpec.parse),
                  grid=r.opt("grid", GridSpec.parse, None),
                  horizon=r.opt("horizon", _float, 20.0),
                  seed_state=r.opt("seed_state", _floats(2), None),
                  seed=r.opt("seed", _int, 0))
        r.done()
        if cfg.horizon <= 0:
            raise CliError("controlset needs horizon > 0")
        return cfg

    def to_dict(self):
        out = {"params": self.params.to_dict(), "box": self.box.to_dict()}
        if self.grid is not None:
            out["grid"] = self.grid.to_dict()
        out["horizon"] = self.horizon
        if self.seed_state is not None:
            out["seed_state"] = list(self.seed_state)
        out["seed"] = self.seed
        return out


@dataclass(frozen=True)
class LarcConfig:
    params: Sigma11Spec
    points: tuple = GENERIC_POINTS
    depth: int = 3
    seed: int = 0

    @classmethod
    def parse(cls, data):
        r = _Reader(data, "config")
        raw_points = r.opt("points", lambda x, c: x, None)
        cfg = cls(params=r.req("params", Sigma11Spec.parse),
                  depth=r.opt("depth", _int, 3),
                  seed=r.opt("seed", _int, 0),
                  points=GENERIC_POINTS if raw_points is None
                  else tuple(_floats(2)(pt, "config.points") for pt in raw_points))
        r.done()
        if cfg.depth < 2:
            raise CliError("larc needs depth >= 2")
        return cfg

    def to_dict(self):
        return {"params": self.params.to_dict(),
                "points": [list(p) for p in self.points],
                "depth": self.depth, "seed": self.seed}


CONFIG_PARSERS = {
    "flow": FlowConfig.parse,
    "invariance": InvarianceConfig.parse,
    "simulate": SimulateConfig.parse,
    "controlset": ControlsetConfig.parse,
    "larc": LarcConfig.parse,
}


def parse_config(command: str, data: dict):
    """Parse and validate one command's config document."""
    if command not in CONFIG_PARSERS:
        raise CliError(f"unknown command '{command}'")
    return CONFIG_PARSERS[command](data)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit_report(report: dict, out: Path | None) -> None:
    text = _json_text(report)
    if out is not None:
        _write_text(out, text)
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_flow(cfg: FlowConfig, out: Path) -> int:
    field = cfg.field.build()
    g0 = cfg.g0.build().as_vector()
    rows = []
    for t in np.linspace(cfg.t_min, cfg.t_max, cfg.samples):
        state = core.flow_matrix(field, float(t)) @ g0
        rows.append((t, state[0], state[1], state[2]))
    _write_text(out, _csv("t,x,y,z", rows))
    return 0


def cmd_invariance(cfg: InvarianceConfig, out: Path | None) -> int:
    field = cfg.field.build()
    sub = cfg.subgroup.build()
    try:
        predicate = subgroups.is_invariant(sub, field, cfg.tol)
        violated = subgroups.violated_conditions(sub, field, cfg.tol)
    except subgroups.UnsupportedSubgroupError as exc:
        raise CliError(str(exc)) from exc
    witness = subgroups.find_invariance_violation(
        sub, field, samples=cfg.samples, times=cfg.times, tol=cfg.tol, seed=cfg.seed)
    report = {
        "subgroup": sub.label,
        "predicate": predicate,
        "bruteforce": witness is None,
        "violated": violated,
    }
    if witness is not None:
        member, t, image = witness
        report["violation_witness"] = {
            "member": list(member.as_vector()),
            "time": t,
            "image": list(image.as_vector()),
        }
    _emit_report(report, out)
    return 0


def cmd_simulate(cfg: SimulateConfig, out: Path) -> int:
    params = cfg.params.build()
    signal = cfg.signal.build()
    if cfg.box is not None:
        box = cfg.box.build()
        for _, value in signal.pieces:
            if not box.contains(value):
                raise CliError("signal value outside the control box")
    control_dim = 1 if cfg.system == "sigma_11" else 3
    for _, value in signal.pieces:
        if value.size != control_dim:
            raise CliError(f"{cfg.system} takes {control_dim}-component controls")
    if cfg.system == "sigma_11":
        def rhs(state, omega):
            return systems.sigma_11_rhs(params, float(omega[0]), state)
        header, wrap = "time,s,t", (1,)
    elif cfg.system == "sigma_10":
        def rhs(state, omega):
            return systems.sigma_10_rhs(params, omega, state)
        header, wrap = "time,s,t", ()
    else:
        def rhs(state, omega):
            return systems.sigma_0p_rhs(params, omega, state)
        header = "time,u,s,t"
        wrap = (0, 2) if params.p == 1 else (0,)
    try:
        traj = systems.integrate(rhs, np.array(cfg.initial), signal, cfg.dt, wrap=wrap)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    idx = list(range(0, traj.times.size, cfg.stride))
    if idx[-1] != traj.times.size - 1:
        idx.append(traj.times.size - 1)
    rows = [(traj.times[i], *traj.states[i]) for i in idx]
    _write_text(out, _csv(header, rows))
    return 0


def _interval_dict(iv: analysis.IntervalSet) -> dict:
    return {"whole_line": iv.whole_line, "lo": iv.lo, "hi": iv.hi,
            "closed_lo": iv.closed_lo, "closed_hi": iv.closed_hi}


def cmd_controlset(cfg: ControlsetConfig, out: Path, summary_out: Path | None) -> int:
    params = cfg.params.build()
    box = cfg.box.build()
    if box.m != 1:
        raise CliError("controlset takes a one-input box")
    if params.b == 0.0:
        raise CliError("b must be nonzero (scalar-system hypothesis)")
    grid = (cfg.grid.build() if cfg.grid is not None
            else analysis.default_grid_config(params, box))
    try:
        estimate, diagnostics = analysis.control_set_estimate(
            params, box, config=grid, horizon=cfg.horizon, seed_state=cfg.seed_state)
    except ValueError as exc:
        raise CliError(str(exc)) from exc

    occ = estimate.occupancy
    rows = []
    for i in range(grid.s_cells):
        for j in range(grid.t_cells):
            rows.append((i, j, int(occ[i, j])))
    _write_text(out, _csv("s_index,t_index,occupied", rows))

    larc = analysis.larc_predicate(params)
    summary = {"larc": larc}
    if larc:
        described = analysis.control_set_sigma_11(params, box)
        base = described.base
        summary["closed_form"] = {**_interval_dict(base), "times_torus": True}
        target = (analysis.IntervalSet.closed(grid.s_lo, grid.s_hi)
                  if base.whole_line else base)
        summary["symmetric_difference_cells"] = analysis.symmetric_difference_cells(
            estimate, target)
        summary["perimeter_cell_count"] = analysis.perimeter_cell_count(grid, target)
    summary["bounding_box"] = estimate.bounding_box()
    summary["controllable_at_window_scale"] = bool(occ.all())
    summary["diagnostics"] = {k: (list(v) if isinstance(v, tuple) else v)
                              for k, v in diagnostics.items()}
    if summary_out is None:
        summary_out = out.with_suffix(".summary.json")
    _write_text(summary_out, _json_text(summary))
    return 0


def cmd_larc(cfg: LarcConfig, out: Path | None) -> int:
    params = cfg.params.build()
    t1, t2 = analysis.larc_terms(params)
    ranks = [analysis.larc_numeric_rank(params, pt, cfg.depth) for pt in cfg.points]
    report = {
        "larc": analysis.larc_predicate(params),
        "terms": [t1, t2],
        "points": [list(p) for p in cfg.points],
        "ranks": ranks,
        "rank_full_at_all_points": all(r == 2 for r in ranks),
    }
    _emit_report(report, out)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisencontrol",
        description="Simulate and analyze linear control systems on the "
                    "Heisenberg group and its quotient charts.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_out in (("flow", True), ("invariance", False),
                            ("simulate", True), ("controlset", True),
                            ("larc", False)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", required=needs_out, default=None,
                       help="output file path")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config RNG seed")
        if name == "controlset":
            p.add_argument("--summary", default=None,
                           help="summary JSON path (default: <out>.summary.json)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliError(f"config is not valid JSON: {exc}") from exc
        if args.seed is not None:
            if not isinstance(data, dict):
                raise CliError("config: expected an object")
            data = dict(data)
            data["seed"] = args.seed
        cfg = parse_config(args.command, data)
        out = Path(args.out) if args.out else None
        if args.command == "flow":
            return cmd_flow(cfg, out)
        if args.command == "invariance":
            return cmd_invariance(cfg, out)
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        if args.command == "controlset":
            summary = Path(args.summary) if args.summary else None
            return cmd_controlset(cfg, out, summary)
        return cmd_larc(cfg, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except systems.IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
