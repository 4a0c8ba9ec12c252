"""Structured input documents and report serialization for the CLI.

Input documents are JSON with every complex entry written as a two-element
``[re, im]`` pair. Extended-real report fields serialize as a finite number
or one of the strings ``"inf"``, ``"-inf"``, ``"undefined"``; undefined
fields carry a companion ``<field>_reason`` entry. Numbers round-trip at
full double precision (shortest-repr JSON floats).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import __version__
from .correlation import BipartiteSystem, CorrelationReport
from .exceptions import ValidationError
from .linalg import DensityMatrix, HermitianOperator
from .models import TwoQubitXYParams
from .relation import RelationCoefficients
from .thermometry import TemperatureReport

__all__ = [
    "CONVENTION_NOTE",
    "InputDocument",
    "parse_input_document",
    "load_input_document",
    "matrix_from_pairs",
    "matrix_to_pairs",
    "extended_real",
    "temperature_report_dict",
    "correlation_report_dict",
    "relation_dict",
    "report_document",
]

CONVENTION_NOTE = (
    "S is the left tensor factor; sigma_pm = (sigma_x +/- i sigma_y)/2; "
    "natural log, k_B = 1"
)


def matrix_from_pairs(rows: Any) -> np.ndarray:
    """Build a complex matrix from nested lists of [re, im] pairs."""
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix entries: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValidationError(
            "matrix entries must be two-element [re, im] pairs in nested rows"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_pairs(m: np.ndarray) -> list:
    """Inverse of matrix_from_pairs."""
    a = np.asarray(m)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


@dataclass(frozen=True)
class InputDocument:
    """Parsed CLI input: kind, dims, named matrices, options."""

    kind: str
    dims: tuple[int, ...]
    matrices: dict[str, np.ndarray]
    model_params: TwoQubitXYParams | None
    clip: float
    tol: float
    raw: dict


def parse_input_document(doc: dict) -> InputDocument:
    """Validate and parse a JSON-shaped input document."""
    if not isinstance(doc, dict):
        raise ValidationError("input document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("single", "bipartite", "model"):
        raise ValidationError(f"kind must be one of single/bipartite/model, got {kind!r}")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise ValidationError("options must be an object")
    clip = float(options.get("clip", 1e-300))
    tol = float(options.get("tol", 1e-10))
    if clip <= 0 or tol <= 0:
        raise ValidationError("clip and tol must be positive")

    matrices: dict[str, np.ndarray] = {}
    model_params = None
    if kind == "model":
        params = doc.get("model_params")
        if not isinstance(params, dict):
            raise ValidationError("model kind requires model_params")
        try:
            model_params = TwoQubitXYParams(
                omega_S=float(params["omega_S"]),
                omega_B=float(params["omega_B"]),
                lam=float(params["lam"]),
                beta=float(params["beta"]),
            )
        except KeyError as exc:
            raise ValidationError(f"model_params missing key {exc}") from exc
        dims = (2, 2)
    elif kind == "single":
        dims_raw = doc.get("dims")
        if not isinstance(dims_raw, int):
            raise ValidationError("single kind requires integer dims")
        dims = (dims_raw,)
        for name in ("H", "rho"):
            if name not in doc.get("matrices", {}):
                raise ValidationError(f"single kind requires matrix {name!r}")
            m = matrix_from_pairs(doc["matrices"][name])
            if m.shape != (dims_raw, dims_raw):
                raise ValidationError(f"matrix {name!r} shape {m.shape} does not match dims {dims_raw}")
            matrices[name] = m
    else:
        dims_raw = doc.get("dims")
        if not (isinstance(dims_raw, (list, tuple)) and len(dims_raw) == 2):
            raise ValidationError("bipartite kind requires dims = [d_S, d_B]")
        d_s, d_b = int(dims_raw[0]), int(dims_raw[1])
        dims = (d_s, d_b)
        shapes = {"H_S": d_s, "H_B": d_b, "H_I": d_s * d_b, "rho_SB": d_s * d_b}
        for name, d in shapes.items():
            if name not in doc.get("matrices", {}):
                raise ValidationError(f"bipartite kind requires matrix {name!r}")
            m = matrix_from_pairs(doc["matrices"][name])
            if m.shape != (d, d):
                raise ValidationError(f"matrix {name!r} shape {m.shape} does not match dims {dims}")
            matrices[name] = m
    return InputDocument(
        kind=kind, dims=dims, matrices=matrices,
        model_params=model_params, clip=clip, tol=tol, raw=doc,
    )


def load_input_document(path: str) -> InputDocument:
    """Read a JSON input document from a file ('-' for stdin)."""
    import sys

    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc}") from exc
    return parse_input_document(doc)


def build_bipartite_system(doc: InputDocument) -> BipartiteSystem:
    """Assemble a BipartiteSystem from a parsed bipartite or model document."""
    if doc.kind == "model":
        from .models import build_two_qubit_xy

        return build_two_qubit_xy(doc.model_params)
    d_s, d_b = doc.dims
    return BipartiteSystem(
        d_s, d_b,
        HermitianOperator(doc.matrices["H_S"], tol_herm=doc.tol),
        HermitianOperator(doc.matrices["H_B"], tol_herm=doc.tol),
        HermitianOperator(doc.matrices["H_I"], tol_herm=doc.tol),
        DensityMatrix(doc.matrices["rho_SB"]),
    )


def extended_real(x: float, reason: str | None = None):
    """Serialize an extended real: finite float, 'inf', '-inf' or 'undefined'."""
    if math.isnan(x):
        return "undefined"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def _put_extended(out: dict, name: str, value: float, undefined_reason: str) -> None:
    out[name] = extended_real(value)
    if isinstance(out[name], str) and out[name] == "undefined":
        out[name + "_reason"] = undefined_reason


def temperature_report_dict(r: TemperatureReport) -> dict:
    out: dict = {}
    _put_extended(out, "beta", r.beta, "")
    _put_extended(out, "temperature", r.temperature, "")
    out["h"] = r.h
    out["covariance"] = r.covariance
    out["variance"] = r.variance
    out["entropy"] = r.entropy
    out["internal_energy"] = r.internal_energy
    _put_extended(out, "free_energy", r.free_energy,
                  "free energy undefined at beta = 0 or T = 0")
    out["rank_deficient"] = r.rank_deficient
    out["clipped"] = r.clipped
    return out


def correlation_report_dict(r: CorrelationReport) -> dict:
    out: dict = {
        "U_chi": r.U_chi,
        "S_chi": r.S_chi,
        "h_I": r.h_I,
        "h_chi": r.h_chi,
        "clipped": r.clipped,
    }
    _put_extended(out, "beta_chi", r.beta_chi, "")
    return out


def relation_dict(r: RelationCoefficients) -> dict:
    out: dict = {
        "C_S": r.C_S, "C_B": r.C_B, "C_chi": r.C_chi,
        "K_SB": r.K_SB, "b_S": r.b_S, "b_B": r.b_B, "K_chi": r.K_chi,
        "h_SB": r.h_SB,
        "interaction_degenerate": r.interaction_degenerate,
    }
    _put_extended(out, "beta_SB", r.beta_SB, "not evaluated")
    _put_extended(out, "beta_tilde_S", r.beta_tilde_S, "not evaluated")
    _put_extended(out, "beta_tilde_B", r.beta_tilde_B, "not evaluated")
    _put_extended(out, "beta_chi", r.beta_chi,
                  "correlation direction undefined without interaction")
    _put_extended(out, "residual", r.residual, "not evaluated")
    return out


def report_document(doc: InputDocument, body: dict) -> str:
    """Assemble the final JSON report: echoed input, body, version, note."""
    payload = {
        "input": doc.raw,
        "report": body,
        "tool_version": __version__,
        "convention": CONVENTION_NOTE,
    }
    return json.dumps(payload, indent=2) + "\n"
