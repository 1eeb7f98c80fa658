"""File formats: graph JSON and edge lists, dense symmetric dumps, spectra,
factor checkpoints and witness exports."""

import json
from pathlib import Path
import struct

import numpy as np

from .graphs import Labels, SparseGraph
from .matrices import Spectrum
from .solver import SphereFactor
from .witness import WitnessParts


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


# -- graphs -------------------------------------------------------------------

def save_graph_json(path, g, model="", params=None, seed=None, labels=None):
    doc = {"n": g.n, "model": model, "params": params or {}, "seed": seed,
           "edges": g.edges.tolist()}
    if labels is not None:
        doc["labels"] = {"r": labels.r, "assignment": labels.assignment.tolist()}
    Path(path).write_text(json.dumps(doc, default=_jsonable))


def load_graph_json(path, strip_labels=False):
    """Returns ``(graph, header, labels)``; labels is None when absent or
    stripped."""
    doc = json.loads(Path(path).read_text())
    g = SparseGraph(doc["n"], np.array(doc["edges"], dtype=np.int64).reshape(-1, 2))
    labels = None
    if "labels" in doc and not strip_labels:
        lab = doc["labels"]
        labels = Labels(np.array(lab["assignment"], dtype=np.int64), lab["r"])
    header = {key: doc.get(key) for key in ("n", "model", "params", "seed")}
    return g, header, labels


def write_edgelist(path, g):
    lines = [f"# n={g.n}"] + [f"{u} {v}" for u, v in g.edges.tolist()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edgelist(path):
    n = None
    edges = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                n = int(body[2:])
            continue
        u, v = line.split()[:2]
        edges.append((int(u), int(v)))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return SparseGraph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


# -- dense matrices and spectra ----------------------------------------------

def symdense_to_bytes(m):
    """u64 little-endian n, then the upper triangle (row-major, diagonal
    included) as little-endian f64."""
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    return struct.pack("<Q", n) + m[np.triu_indices(n)].astype("<f8").tobytes()


def symdense_from_bytes(buf):
    (n,) = struct.unpack_from("<Q", buf, 0)
    upper = np.frombuffer(buf, dtype="<f8", offset=8, count=n * (n + 1) // 2)
    m = np.zeros((n, n))
    m[np.triu_indices(n)] = upper
    return m + np.triu(m, 1).T


def save_symdense(path, m):
    Path(path).write_bytes(symdense_to_bytes(m))


def load_symdense(path):
    return symdense_from_bytes(Path(path).read_bytes())


def save_spectrum_json(path, spec):
    Path(path).write_text(json.dumps({"eigenvalues": spec.eigenvalues.tolist()}))


def load_spectrum_json(path):
    vals = np.array(json.loads(Path(path).read_text())["eigenvalues"])
    return Spectrum(vals, np.zeros((len(vals), 0)))


# -- factors and witnesses ------------------------------------------------------

def save_factor(stem, f, seed=None, objective=None):
    """Writes ``<stem>.json`` and the row-major f64 block ``<stem>.bin``."""
    stem = Path(stem)
    meta = {"n": f.n, "k": f.k, "seed": seed, "objective": objective,
            "data_file": stem.name + ".bin"}
    stem.with_name(stem.name + ".json").write_text(json.dumps(meta, default=_jsonable))
    stem.with_name(stem.name + ".bin").write_bytes(f.sigma.astype("<f8").tobytes())


def load_factor(stem):
    stem = Path(stem)
    meta = json.loads(stem.with_name(stem.name + ".json").read_text())
    raw = np.frombuffer(stem.with_name(meta["data_file"]).read_bytes(), dtype="<f8")
    return SphereFactor(raw.reshape(meta["n"], meta["k"]).copy()), meta


def save_witness(stem, w):
    """``<stem>.json`` metadata plus ``<stem>.phi.bin``, ``.D.bin``, ``.U.bin``."""
    stem = Path(stem)
    blocks = {"phi": w.phi, "D": w.D, "U": w.U}
    meta = {"mode": w.mode, "params": w.params, "n": w.n,
            "shapes": {k: list(v.shape) for k, v in blocks.items()}}
    stem.with_name(stem.name + ".json").write_text(json.dumps(meta, default=_jsonable))
    for key, arr in blocks.items():
        stem.with_name(f"{stem.name}.{key}.bin").write_bytes(
            np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_witness(stem):
    stem = Path(stem)
    meta = json.loads(stem.with_name(stem.name + ".json").read_text())
    arrs = {}
    for key, shape in meta["shapes"].items():
        raw = np.frombuffer(stem.with_name(f"{stem.name}.{key}.bin").read_bytes(), dtype="<f8")
        arrs[key] = raw.reshape(shape).copy()
    return WitnessParts(arrs["phi"], arrs["D"], arrs["U"], meta["mode"], meta["params"])
