# Scenario configuration: JSON documents describing a field, a network and
# an experiment. Field elements are integers in little-endian base-p
# packing; dense complex matrices are nested lists of [re, im] pairs.

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np

from . import fq_linalg as la
from .constructions import RankTriple
from .errors import ConfigError, QncError
from .finite_field import FieldSpec
from .network import DagEdge, DagNetwork, DagNode, Layer, LayeredNetwork

EXPERIMENTS = ("construct", "simulate", "verify-direct", "verify-converse", "verify-classical", "verify-eb", "gen")
CORRUPTION_MODES = ("individual", "adaptive", "mix", "none")


#
# --- Domain Types ---
#

@dataclass
class CorruptionSettings:
    """How simulate sweeps sample Eve."""

    mode: str = "adaptive"
    memory_dim: int = 2
    pure_memory: bool = True
    kraus_count: int = 2


@dataclass
class ScenarioConfig:
    """
    Validated scenario.

    Attributes:
        spec: field of the registers
        network: layered or DAG network, when the experiment needs one
        experiment: default command for the scenario
        seed, samples: sweep parameters
        generator: parameters for gen ({'triple': [l1, l2, l3]} or {'worst_case': true}, plus m0, m1)
        classical: parameters for verify-classical
        direct: parameters for verify-direct sweeps over random networks
        eb: parameters for verify-eb
        raw: the parsed JSON document
    """

    spec: FieldSpec
    network: Optional[Union[LayeredNetwork, DagNetwork]] = None
    corruption: CorruptionSettings = field(default_factory=CorruptionSettings)
    experiment: Optional[str] = None
    seed: int = 0
    samples: int = 10
    rho0: str = "mixed"
    generator: Optional[Dict[str, Any]] = None
    classical: Optional[Dict[str, Any]] = None
    direct: Optional[Dict[str, Any]] = None
    eb: Optional[Dict[str, Any]] = None
    raw: Dict[str, Any] = field(default_factory=dict)


#
# --- Helper Function: Typed Lookups ---
#

def _require(data: dict, key: str, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    if key not in data:
        raise ConfigError(f"{path}.{key}: missing")
    return data[key]


def as_int(value, path: str, minimum: Optional[int] = None) -> int:
    """Integer config value at `path`, optionally bounded below."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {value}")
    return value


def _int_matrix(rows, path: str, spec: FieldSpec):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ConfigError(f"{path}: expected a non-empty list of rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ConfigError(f"{path}[{i}]: row of length {len(r)}, expected {width}")
        for j, x in enumerate(r):
            as_int(x, f"{path}[{i}][{j}]", 0)
            if x >= spec.q:
                raise ConfigError(f"{path}[{i}][{j}]: {x} is not an element of {spec}")
    return la.from_int_rows(rows, spec.GF)


def _complex_matrix(rows, path: str) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}: expected rows of [re, im] pairs")
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ConfigError(f"{path}: expected a square matrix of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _complex_rows(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


#
# --- Parsing ---
#

def parse_field(data: dict, path: str = "field") -> FieldSpec:
    p = as_int(_require(data, "p", path), f"{path}.p", 2)
    degree = as_int(data.get("degree", 1), f"{path}.degree", 1)
    modulus = data.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list):
            raise ConfigError(f"{path}.modulus: expected a list of coefficients")
        modulus = tuple(as_int(c, f"{path}.modulus[{i}]", 0) for i, c in enumerate(modulus))
    try:
        return FieldSpec(p, degree, modulus)
    except QncError as e:
        raise ConfigError(f"{path}: {e}")


def _parse_layer(entry, path: str, spec: FieldSpec) -> Layer:
    if not isinstance(entry, dict) or len(entry) != 1:
        raise ConfigError(f"{path}: expected one of basis_linear / symplectic / dense")
    kind, value = next(iter(entry.items()))
    if kind == "basis_linear":
        return Layer.basis_linear(_int_matrix(value, f"{path}.basis_linear", spec))
    if kind == "symplectic":
        return Layer.symplectic(_int_matrix(value, f"{path}.symplectic", spec))
    if kind == "dense":
        return Layer.dense(_complex_matrix(value, f"{path}.dense"))
    raise ConfigError(f"{path}: unknown layer kind '{kind}'")


def _parse_dag(data: dict, path: str, spec: FieldSpec) -> DagNetwork:
    nodes = []
    for i, entry in enumerate(_require(data, "nodes", path)):
        npath = f"{path}.nodes[{i}]"
        name = _require(entry, "name", npath)
        kind = entry.get("kind", "identity")
        matrix = entry.get("matrix")
        if kind in ("basis_linear", "symplectic"):
            matrix = _int_matrix(matrix, f"{npath}.matrix", spec)
        elif kind == "dense":
            matrix = _complex_matrix(matrix, f"{npath}.matrix")
        elif kind != "identity":
            raise ConfigError(f"{npath}.kind: unknown node kind '{kind}'")
        nodes.append(DagNode(str(name), kind, matrix))

    edges = []
    for i, entry in enumerate(_require(data, "edges", path)):
        epath = f"{path}.edges[{i}]"
        edges.append(DagEdge(as_int(_require(entry, "id", epath), f"{epath}.id"),
                             str(_require(entry, "tail", epath)), str(_require(entry, "head", epath))))
    corrupted = [as_int(c, f"{path}.corrupted[{i}]") for i, c in enumerate(_require(data, "corrupted", path))]
    return DagNetwork(spec, str(data.get("sender", "src")), str(data.get("receiver", "recv")), nodes, edges, corrupted)


def network_from_config(data: dict, spec: FieldSpec, path: str = "network") -> Union[LayeredNetwork, DagNetwork]:
    """
    Builds a LayeredNetwork ({m0, m1, layers}) or a DagNetwork ({dag: {...}}).

    Raises:
        ConfigError: schema violation, with the key path
    """
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    if "dag" in data:
        return _parse_dag(data["dag"], f"{path}.dag", spec)

    m0 = as_int(_require(data, "m0", path), f"{path}.m0", 1)
    m1 = as_int(_require(data, "m1", path), f"{path}.m1", 0)
    entries = _require(data, "layers", path)
    if not isinstance(entries, list):
        raise ConfigError(f"{path}.layers: expected a list")
    layers = [_parse_layer(entry, f"{path}.layers[{i}]", spec) for i, entry in enumerate(entries)]
    try:
        return LayeredNetwork(spec, m0, m1, layers)
    except QncError as e:
        raise ConfigError(f"{path}: {e}")


def network_to_config(net: Union[LayeredNetwork, DagNetwork]) -> dict:
    """Inverse of network_from_config."""
    if isinstance(net, DagNetwork):
        nodes = []
        for n in net.nodes:
            entry = {"name": n.name, "kind": n.kind}
            if n.kind in ("basis_linear", "symplectic"):
                entry["matrix"] = la.to_int_rows(n.matrix)
            elif n.kind == "dense":
                entry["matrix"] = _complex_rows(n.matrix)
            nodes.append(entry)
        return {"dag": {
            "sender": net.sender,
            "receiver": net.receiver,
            "nodes": nodes,
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in net.edges],
            "corrupted": list(net.corrupted),
        }}

    layers = []
    for layer in net.layers:
        if layer.kind == "dense":
            layers.append({"dense": _complex_rows(layer.matrix)})
        else:
            layers.append({layer.kind: la.to_int_rows(layer.matrix)})
    return {"m0": net.m0, "m1": net.m1, "layers": layers}


def _parse_corruption(data, path: str = "corruption") -> CorruptionSettings:
    if data is None:
        return CorruptionSettings()
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    mode = data.get("mode", "adaptive")
    if mode not in CORRUPTION_MODES:
        raise ConfigError(f"{path}.mode: unknown mode '{mode}'")
    pure = data.get("pure_memory", True)
    if not isinstance(pure, bool):
        raise ConfigError(f"{path}.pure_memory: expected true or false")
    return CorruptionSettings(
        mode=mode,
        memory_dim=as_int(data.get("memory_dim", 2), f"{path}.memory_dim", 1),
        pure_memory=pure,
        kraus_count=as_int(data.get("kraus_count", 2), f"{path}.kraus_count", 1),
    )


def _optional_section(data: dict, key: str) -> Optional[dict]:
    value = data.get(key)
    if value is not None and not isinstance(value, dict):
        raise ConfigError(f"{key}: expected an object")
    return value


def parse_config(data: dict) -> ScenarioConfig:
    """
    Validates a parsed JSON document.

    Raises:
        ConfigError: schema violation, with the key path
    """
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    spec = parse_field(_require(data, "field", "config"))

    experiment = data.get("experiment")
    if experiment is not None and experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: unknown experiment '{experiment}'")
    rho0 = data.get("rho0", "mixed")
    if rho0 not in ("mixed", "pure"):
        raise ConfigError(f"rho0: expected 'mixed' or 'pure', got {rho0!r}")

    network = network_from_config(data["network"], spec) if data.get("network") is not None else None
    return ScenarioConfig(
        spec=spec,
        network=network,
        corruption=_parse_corruption(data.get("corruption")),
        experiment=experiment,
        seed=as_int(data.get("seed", 0), "seed", 0),
        samples=as_int(data.get("samples", 10), "samples", 1),
        rho0=rho0,
        generator=_optional_section(data, "generator"),
        classical=_optional_section(data, "classical"),
        direct=_optional_section(data, "direct"),
        eb=_optional_section(data, "eb"),
        raw=data,
    )


def load_config(path: str) -> ScenarioConfig:
    """
    Reads and validates a JSON scenario file.

    Raises:
        ConfigError: unreadable file, invalid JSON or schema violation
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"{path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    return parse_config(data)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data: dict) -> str:
    """SHA-256 of the canonical JSON form."""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def triple_from_generator(gen: dict, path: str = "generator"):
    """RankTriple from a generator section (explicit triple or worst case)."""
    m0 = as_int(_require(gen, "m0", path), f"{path}.m0", 1)
    m1 = as_int(_require(gen, "m1", path), f"{path}.m1", 0)
    if gen.get("worst_case"):
        return RankTriple(m1, m1, 1, m0, m1)
    triple = _require(gen, "triple", path)
    if not isinstance(triple, list) or len(triple) != 3:
        raise ConfigError(f"{path}.triple: expected [l1, l2, l3]")
    l1, l2, l3 = (as_int(x, f"{path}.triple[{i}]") for i, x in enumerate(triple))
    return RankTriple(l1, l2, l3, m0, m1)
