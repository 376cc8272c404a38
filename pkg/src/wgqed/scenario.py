"""JSON scenario documents: schema, defaults and conversion to solver objects.

A scenario states parameters the way a lab notebook would: SI units for the
device, dimensionless ratios for everything else.  ``resolve`` fills every
default so the resolved document reproduces the run on its own.
"""

import copy
from dataclasses import dataclass

import jsonschema
import numpy as np

from .analysis import default_grid
from .dynamics import TimeGrid
from .errors import ConfigurationError
from .kernels import ChainConfig
from .pulse import PulseSpec
from .quadrature import FrequencyGrid

MODES = ("spectra_exact", "spectra_approx", "spectra_both", "dynamics", "poles", "delta_transfer")
SPACING_KEYS = ("k0d", "k0d_over_pi", "d_m", "positions_m")

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "required": ["chain", "pulse", "mode"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "mode": {"enum": list(MODES)},
        "chain": {
            "type": "object",
            "required": ["omega_q_over_2pi_hz", "vg_m_per_s", "gamma_over_omega"],
            "additionalProperties": False,
            "properties": {
                "omega_q_over_2pi_hz": _pos,
                "vg_m_per_s": _pos,
                "gamma_over_omega": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "coupling_mode": {"enum": ["ww", "linear"]},
                "n_qubits": {"type": "integer", "minimum": 1},
                "k0d": _pos,
                "k0d_over_pi": _pos,
                "d_m": _pos,
                "positions_m": {"type": "array", "items": _num, "minItems": 1},
            },
        },
        "pulse": {
            "type": "object",
            "required": ["shape", "omega_s_over_omega"],
            "additionalProperties": False,
            "properties": {
                "shape": {"enum": ["gaussian", "delta"]},
                "omega_s_over_omega": _pos,
                "delta_over_omega": _pos,
                "x0_m": {"type": "number", "minimum": 0},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "omega_lo_over_omega": {"type": "number", "minimum": 0},
                "omega_hi_over_omega": _pos,
                "n_points": {"type": "integer", "minimum": 3},
                "refine": {"type": "array", "items": {"type": "array", "items": _num,
                                                        "minItems": 2, "maxItems": 2}},
                "refine_points": {"type": "integer", "minimum": 3},
            },
        },
        "time_grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["t_max_gamma"],
            "properties": {"t_max_gamma": _pos, "n_points": {"type": "integer", "minimum": 2}},
        },
        "sweep": {
            "type": "object",
            "required": ["path", "values"],
            "additionalProperties": False,
            "properties": {"path": {"type": "string"}, "values": {"type": "array"}},
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "markovian": {"type": "boolean"},
                "include_pv": {"type": "boolean"},
                "norm_tolerance": _pos,
            },
        },
    },
}


@dataclass(frozen=True)
class Scenario:
    """A resolved, single (non-sweep) run."""

    doc: dict
    chain: ChainConfig
    pulse: PulseSpec
    grid: FrequencyGrid
    mode: str
    time_grid: TimeGrid = None

    @property
    def options(self):
        return self.doc["options"]


def validate(doc):
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigurationError(f"config invalid at {where}: {exc.message}") from None
    spacing = [k for k in SPACING_KEYS if k in doc["chain"]]
    if len(spacing) > 1:
        raise ConfigurationError(f"give exactly one of {SPACING_KEYS}, got {spacing}")
    if doc["pulse"]["shape"] == "gaussian" and "delta_over_omega" not in doc["pulse"]:
        raise ConfigurationError("a Gaussian pulse needs delta_over_omega")
    if doc["mode"] == "dynamics" and "time_grid" not in doc:
        raise ConfigurationError("dynamics mode needs a time_grid")


def _set_path(doc, path, value):
    keys = path.split(".")
    node = doc
    for k in keys[:-1]:
        if not isinstance(node, dict) or k not in node:
            raise ConfigurationError(f"sweep path {path!r} does not exist")
        node = node[k]
    if not isinstance(node, dict) or keys[-1] not in node:
        raise ConfigurationError(f"sweep path {path!r} does not exist")
    node[keys[-1]] = value


def expand(doc):
    """Split a document into one document per sweep value (sweep removed)."""
    validate(doc)
    sweep = doc.get("sweep")
    base = {k: v for k, v in doc.items() if k != "sweep"}
    if not sweep or not sweep["values"]:
        return [copy.deepcopy(base)]
    out = []
    for v in sweep["values"]:
        d = copy.deepcopy(base)
        _set_path(d, sweep["path"], v)
        validate(d)
        out.append(d)
    return out


def _chain(c):
    omega_q = 2 * np.pi * c["omega_q_over_2pi_hz"]
    vg = c["vg_m_per_s"]
    k0 = omega_q / vg
    if "positions_m" in c:
        pos = k0 * np.asarray(c["positions_m"], dtype=float)
        if "n_qubits" in c and c["n_qubits"] != pos.size:
            raise ConfigurationError("n_qubits disagrees with positions_m")
    else:
        if "k0d" in c:
            k0d = c["k0d"]
        elif "k0d_over_pi" in c:
            k0d = np.pi * c["k0d_over_pi"]
        elif "d_m" in c:
            k0d = k0 * c["d_m"]
        else:
            k0d = None
        n = c.get("n_qubits", 1 if k0d is None else 2)
        if n > 1 and k0d is None:
            raise ConfigurationError("several qubits need a spacing (k0d, k0d_over_pi, d_m or positions_m)")
        pos = np.arange(n) * (k0d or 0.0)
    return ChainConfig(c["gamma_over_omega"], tuple(pos), c.get("coupling_mode", "ww"), omega_q, vg)


def _pulse(p, chain):
    if p["shape"] == "delta":
        return PulseSpec.delta_limit(p["omega_s_over_omega"])
    return PulseSpec.gaussian(p["delta_over_omega"], p["omega_s_over_omega"], p.get("x0_m", 0.0),
                              chain.omega_q, chain.vg)


def resolve(doc, grid_points=None, markovian=None, include_pv=None):
    """Resolve a single-run document (no sweep) into a Scenario.

    Command-line overrides are folded into the returned ``doc`` so that it
    alone reproduces the run.
    """
    validate(doc)
    if doc.get("sweep", {}).get("values"):
        raise ConfigurationError("resolve takes a single run; expand the sweep first")
    doc = copy.deepcopy({k: v for k, v in doc.items() if k != "sweep"})
    chain = _chain(doc["chain"])
    pulse = _pulse(doc["pulse"], chain)
    opts = {"markovian": False, "include_pv": True, "norm_tolerance": 0.05}
    opts.update(doc.get("options", {}))
    if markovian is not None:
        opts["markovian"] = bool(markovian)
    if include_pv is not None:
        opts["include_pv"] = bool(include_pv)
    doc["options"] = opts

    g = doc.get("grid", {})
    if "omega_lo_over_omega" in g or "omega_hi_over_omega" in g:
        if not ("omega_lo_over_omega" in g and "omega_hi_over_omega" in g):
            raise ConfigurationError("grid needs both omega_lo_over_omega and omega_hi_over_omega")
        refine = tuple(tuple(r) for r in g.get("refine", ()))
        grid = FrequencyGrid(g["omega_lo_over_omega"], g["omega_hi_over_omega"], g.get("n_points", 2001),
                             "refined" if refine else "uniform", refine, g.get("refine_points", 401))
    else:
        grid = default_grid(chain, pulse, n_points=g.get("n_points", 2001))
    if grid_points is not None:
        grid = grid.refined(int(grid_points))
    doc["grid"] = {"omega_lo_over_omega": grid.lo, "omega_hi_over_omega": grid.hi,
                   "n_points": grid.n_points, "refine": [list(r) for r in grid.refine],
                   "refine_points": grid.refine_points}

    tgrid = None
    if "time_grid" in doc:
        tg = doc["time_grid"]
        tg.setdefault("n_points", 401)
        tgrid = TimeGrid.in_decay_times(tg["t_max_gamma"], chain.gamma_ratio, tg["n_points"])
    return Scenario(doc, chain, pulse, grid, doc["mode"], tgrid)
