"""File formats: witness JSON, zero-set JSON, and binary constraint dumps.

Witness JSON stores the complex matrix as separate real and imaginary
row-major nested lists plus the factor dimensions; an optional
"decomposition" block carries the two positive parts of a decomposable
witness.  Real witnesses use the same container with "kind": "real" and
no imaginary part.  Constraint matrices are dumped as two little-endian
uint64 (rows, cols) followed by row-major float64 data.
"""

from __future__ import annotations

import json
import struct
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .decomposable import DecompWitness
from .hilbert import Dims, HermitianOp, ProductVector
from .realform import RealWitness


def _matrix_to_json(m: np.ndarray, real_only: bool = False) -> dict:
    out = {"re": np.real(m).tolist()}
    if not real_only:
        out["im"] = np.imag(m).tolist()
    return out


def _matrix_from_json(d: dict) -> np.ndarray:
    re = np.array(d["re"], dtype=float)
    if "im" in d:
        return re + 1j * np.array(d["im"], dtype=float)
    return re


def witness_to_dict(omega: HermitianOp,
                    decomposition: Optional[DecompWitness] = None) -> dict:
    doc = {"na": omega.dims.na, "nb": omega.dims.nb}
    doc.update(_matrix_to_json(omega.entries))
    if decomposition is not None:
        doc["decomposition"] = {
            "rho": _matrix_to_json(decomposition.rho.entries),
            "sigma": _matrix_to_json(decomposition.sigma.entries),
        }
    return doc


def witness_from_dict(doc: dict):
    """Parse a witness document; returns (op, decomposition-or-None) for
    complex witnesses and a RealWitness for 'kind': 'real' documents."""
    dims = Dims(int(doc["na"]), int(doc["nb"]))
    if doc.get("kind") == "real":
        return RealWitness(matrix=np.array(doc["re"], dtype=float),
                           source_dims=dims)
    omega = HermitianOp(dims, _matrix_from_json(doc))
    decomp = None
    if "decomposition" in doc:
        d = doc["decomposition"]
        decomp = DecompWitness(
            rho=HermitianOp(dims, _matrix_from_json(d["rho"])),
            sigma=HermitianOp(dims, _matrix_from_json(d["sigma"])))
    return omega, decomp


def save_witness(path, omega: HermitianOp,
                 decomposition: Optional[DecompWitness] = None) -> None:
    with open(path, "w") as fh:
        json.dump(witness_to_dict(omega, decomposition), fh, indent=1)


def load_witness(path):
    with open(path) as fh:
        return witness_from_dict(json.load(fh))


def real_witness_to_dict(w: RealWitness) -> dict:
    doc = {"kind": "real", "na": w.source_dims.na, "nb": w.source_dims.nb}
    doc.update(_matrix_to_json(w.matrix, real_only=True))
    return doc


def save_real_witness(path, w: RealWitness) -> None:
    with open(path, "w") as fh:
        json.dump(real_witness_to_dict(w), fh, indent=1)


def zeros_to_dict(dims: Dims, points: Sequence[ProductVector]) -> dict:
    return {
        "na": dims.na, "nb": dims.nb,
        "zeros": [{
            "phi_re": p.phi.real.tolist(), "phi_im": p.phi.imag.tolist(),
            "chi_re": p.chi.real.tolist(), "chi_im": p.chi.imag.tolist(),
        } for p in points],
    }


def zeros_from_dict(doc: dict) -> Tuple[Dims, List[ProductVector]]:
    dims = Dims(int(doc["na"]), int(doc["nb"]))
    pts = []
    for z in doc["zeros"]:
        phi = np.array(z["phi_re"], dtype=float) \
            + 1j * np.array(z["phi_im"], dtype=float)
        chi = np.array(z["chi_re"], dtype=float) \
            + 1j * np.array(z["chi_im"], dtype=float)
        pts.append(ProductVector(phi, chi))
    return dims, pts


def save_zeros(path, dims: Dims, points: Sequence[ProductVector]) -> None:
    with open(path, "w") as fh:
        json.dump(zeros_to_dict(dims, points), fh, indent=1)


def load_zeros(path) -> Tuple[Dims, List[ProductVector]]:
    with open(path) as fh:
        return zeros_from_dict(json.load(fh))


def save_constraint_matrix(path, matrix: np.ndarray) -> None:
    """Binary dump: rows, cols as little-endian uint64, then row-major
    float64 entries."""
    m = np.ascontiguousarray(matrix, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<QQ", m.shape[0], m.shape[1]))
        fh.write(m.tobytes())


def load_constraint_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        rows, cols = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
    return data.reshape(rows, cols).astype(float)
