"""Reading and writing instance files (text and JSON) and certificates.

Text format: the first non-comment line is ``n m d`` (variable count, term
count, domain tag ``spin`` or ``binary``), followed by m term lines with
1-based indices.  Quadratic files use ``i j v`` lines where ``i == j`` means
a linear term (Ising field / QUBO diagonal).  HUBO files use the extended
``k i1 ... ik v`` form, where k is the term order (k = 0 holds a constant).
``#`` starts a comment.  Writers emit ``# format:`` and ``# offset:`` comment
lines so files are self-describing; readers fall back to a field-count
heuristic when the format comment is missing.

The JSON mirror carries the same schema:
``{"format", "n", "domain", "offset", "terms"}`` with 1-based indices.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ValidationError
from .model import BINARY_DOMAIN, SPIN_DOMAIN, HuboModel, IsingModel, QuboModel

Model = Union[IsingModel, QuboModel, HuboModel]

FORMAT_QUADRATIC = "quadratic"
FORMAT_HUBO = "hubo"


def model_to_dict(model: Model) -> dict:
    """JSON-ready dict mirror of the text schema (1-based indices)."""
    if isinstance(model, IsingModel):
        terms = [[int(i) + 1, int(i) + 1, float(v)] for i, v in enumerate(model.h) if v != 0.0]
        terms += [[int(i) + 1, int(j) + 1, float(v)]
                  for i, j, v in zip(model.rows, model.cols, model.values)]
        return {"format": FORMAT_QUADRATIC, "n": model.n, "domain": SPIN_DOMAIN,
                "offset": model.offset, "terms": terms}
    if isinstance(model, QuboModel):
        terms = [[int(i) + 1, int(j) + 1, float(v)]
                 for i, j, v in zip(model.rows, model.cols, model.values)]
        return {"format": FORMAT_QUADRATIC, "n": model.n, "domain": BINARY_DOMAIN,
                "offset": model.offset, "terms": terms}
    if isinstance(model, HuboModel):
        terms = [[[int(i) + 1 for i in t], float(c)] for t, c in model.terms()]
        return {"format": FORMAT_HUBO, "n": model.n, "domain": model.domain,
                "max_order": model.max_order, "terms": terms}
    raise ValidationError(f"unsupported model type {type(model).__name__}")


def model_from_dict(data: dict) -> Model:
    fmt = data.get("format")
    n = int(data["n"])
    domain = data["domain"]
    if fmt == FORMAT_QUADRATIC:
        offset = float(data.get("offset", 0.0))
        pairs = [(int(i) - 1, int(j) - 1, float(v)) for i, j, v in data["terms"]]
        return _quadratic_model(n, domain, pairs, offset)
    if fmt == FORMAT_HUBO:
        terms = [([int(i) - 1 for i in idx], float(c)) for idx, c in data["terms"]]
        return HuboModel.from_terms(n, domain, terms, max_order=data.get("max_order"))
    raise ValidationError(f"unknown instance format {fmt!r}")


def _quadratic_model(n: int, domain: str, pairs, offset: float) -> Model:
    if domain == SPIN_DOMAIN:
        h = np.zeros(n)
        couplings = []
        for i, j, v in pairs:
            if i == j:
                h[i] += v
            else:
                couplings.append((i, j, v))
        return IsingModel.from_terms(n, h=h, couplings=couplings, offset=offset)
    if domain == BINARY_DOMAIN:
        return QuboModel.from_terms(n, terms=pairs, offset=offset)
    raise ValidationError(f"unknown domain tag {domain!r}")


def write_instance(path, model: Model) -> Path:
    """Write a model to ``path``; ``.json`` suffix selects the JSON mirror."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(model_to_dict(model), indent=2) + "\n")
        return path

    data = model_to_dict(model)
    lines = [f"# format: {data['format']}"]
    if data["format"] == FORMAT_QUADRATIC and data.get("offset", 0.0) != 0.0:
        lines.append(f"# offset: {data['offset']!r}")
    lines.append(f"{data['n']} {len(data['terms'])} {data['domain']}")
    if data["format"] == FORMAT_QUADRATIC:
        for i, j, v in data["terms"]:
            lines.append(f"{i} {j} {v!r}")
    else:
        for idx, c in data["terms"]:
            lines.append(" ".join([str(len(idx))] + [str(i) for i in idx] + [repr(c)]))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_instance(path) -> Model:
    """Read a model written by :func:`write_instance` (text or JSON)."""
    path = Path(path)
    if path.suffix == ".json":
        return model_from_dict(json.loads(path.read_text()))

    fmt = None
    offset = 0.0
    header = None
    body: list[list[str]] = []
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("format:"):
                fmt = comment.split(":", 1)[1].strip()
            elif comment.startswith("offset:"):
                offset = float(comment.split(":", 1)[1])
            continue
        fields = line.split()
        if header is None:
            header = fields
        else:
            body.append(fields)
    if header is None or len(header) != 3:
        raise ValidationError(f"{path}: missing or malformed 'n m d' header line")
    n, m, domain = int(header[0]), int(header[1]), header[2]
    if len(body) != m:
        raise ValidationError(f"{path}: header declares {m} terms, found {len(body)}")
    if fmt is None:
        fmt = FORMAT_QUADRATIC if all(len(f) == 3 for f in body) else FORMAT_HUBO

    if fmt == FORMAT_QUADRATIC:
        pairs = []
        for f in body:
            if len(f) != 3:
                raise ValidationError(f"{path}: quadratic line needs 'i j v', got {f}")
            pairs.append((int(f[0]) - 1, int(f[1]) - 1, float(f[2])))
        return _quadratic_model(n, domain, pairs, offset)

    terms = []
    for f in body:
        k = int(f[0])
        if len(f) != k + 2:
            raise ValidationError(f"{path}: HUBO line of order {k} needs {k + 2} fields, got {len(f)}")
        terms.append(([int(i) - 1 for i in f[1:1 + k]], float(f[-1])))
    return HuboModel.from_terms(n, domain, terms)


def write_certificate(path, planted_energy: float, planted_state, family: str,
                      hardness: dict, seed) -> Path:
    """Write the sidecar certificate carried by planted instances."""
    path = Path(path)
    payload = {
        "planted_energy": float(planted_energy),
        "planted_state": [int(s) for s in np.asarray(planted_state)],
        "family": family,
        "hardness": hardness,
        "seed": seed,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def read_certificate(path) -> dict:
    data = json.loads(Path(path).read_text())
    for key in ("planted_energy", "planted_state", "family"):
        if key not in data:
            raise ValidationError(f"{path}: certificate missing field {key!r}")
    data["planted_state"] = np.asarray(data["planted_state"], dtype=np.int8)
    return data
