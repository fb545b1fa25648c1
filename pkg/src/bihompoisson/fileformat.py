"""The JSON algebra-description format and its loader/saver.

Rationals travel as canonical strings ("p", "p/q" with q > 1 and the
fraction fully reduced), so files round-trip byte-stably and loading is
exact.  Omitted basis pairs mean a zero product; duplicate pairs are an
error.  Grading problems do not abort a load: they come back as
diagnostics so the verifier commands can point at them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .algebra import BilinearTable, GradedBasis, SuperAlgebra
from .errors import BadRational, DuplicateEntry, ParseError, UnknownLabel
from .linalg import Matrix
from .scalar import Scalar

SCHEMA_VERSION = 1

_RATIONAL_RE = re.compile(r"^-?(?:0|[1-9][0-9]*)(?:/[1-9][0-9]*)?$")


def parse_rational(text: Any, where: str = "") -> Scalar:
    """Parse a canonical rational string; reject anything that would not round-trip."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise BadRational(f"{text!r} is not a canonical rational string", where)
    value = Scalar(text)
    if str(value) != text:
        raise BadRational(f"{text!r} is not reduced; write {str(value)!r}", where)
    return value


def format_rational(value: Scalar) -> str:
    return str(value)


@dataclass(frozen=True)
class LoadedAlgebra:
    """An algebra read from disk plus its load-time diagnostics."""

    name: str
    description: str
    algebra: SuperAlgebra
    diagnostics: tuple[str, ...]


def _expect(condition: bool, message: str, where: str) -> None:
    if not condition:
        raise ParseError(message, where)


def _parse_matrix(doc: Any, dim: int, where: str) -> Matrix:
    _expect(isinstance(doc, list) and len(doc) == dim,
            f"expected {dim} rows", where)
    rows = []
    for i, row in enumerate(doc):
        _expect(isinstance(row, list) and len(row) == dim,
                f"expected {dim} entries", f"{where}[{i}]")
        rows.append(tuple(parse_rational(e, f"{where}[{i}][{j}]")
                          for j, e in enumerate(row)))
    return Matrix(tuple(rows), dim)


def _parse_table(doc: Any, basis: GradedBasis, where: str) -> BilinearTable:
    _expect(isinstance(doc, list), "expected a list of triples", where)
    seen: set[tuple[int, int]] = set()
    mapping: dict[tuple[int, int], list[tuple[int, Scalar]]] = {}
    for t, triple in enumerate(doc):
        spot = f"{where}[{t}]"
        _expect(isinstance(triple, list) and len(triple) == 3,
                "expected [left, right, coefficients]", spot)
        left, right, coeffs = triple
        for label in (left, right):
            if not isinstance(label, str) or label not in basis.labels:
                raise UnknownLabel(f"unknown basis label {label!r}", spot)
        key = (basis.index(left), basis.index(right))
        if key in seen:
            raise DuplicateEntry(f"pair ({left}, {right}) appears twice", spot)
        seen.add(key)
        _expect(isinstance(coeffs, list), "expected a coefficient list", spot)
        entry: list[tuple[int, Scalar]] = []
        targets: set[int] = set()
        for c, pair in enumerate(coeffs):
            cspot = f"{spot}[{c}]"
            _expect(isinstance(pair, list) and len(pair) == 2,
                    "expected [label, rational]", cspot)
            label, text = pair
            if not isinstance(label, str) or label not in basis.labels:
                raise UnknownLabel(f"unknown basis label {label!r}", cspot)
            k = basis.index(label)
            if k in targets:
                raise DuplicateEntry(f"label {label!r} appears twice in one value", cspot)
            targets.add(k)
            entry.append((k, parse_rational(text, cspot)))
        mapping[key] = entry
    return BilinearTable.from_map(basis.dim, mapping)


def _grading_diagnostics(alg: SuperAlgebra) -> tuple[str, ...]:
    out: list[str] = []
    for tname, table in (("bracket", alg.bracket), ("product", alg.product)):
        for (i, j), _ in table.entries:
            value = table.basis_value(i, j)
            expected = (alg.parities[i] + alg.parities[j]) % 2
            projected = alg.basis.parity_projection(value, expected)
            if value != projected:
                out.append(
                    f"{tname}({alg.labels[i]}, {alg.labels[j]}) = "
                    f"{alg.format_vector(value)} leaves parity {expected}")
    for mname, m in (("phi", alg.phi), ("psi", alg.psi)):
        for i in range(alg.dim):
            image = m.apply(alg.basis_vector(i))
            projected = alg.basis.parity_projection(image, alg.parities[i])
            if image != projected:
                out.append(f"{mname}({alg.labels[i]}) = {alg.format_vector(image)} "
                           "changes parity")
    return tuple(out)


def parse_algebra_document(doc: Any, where: str = "") -> LoadedAlgebra:
    """Validate a parsed JSON document and build the algebra it describes."""
    _expect(isinstance(doc, dict), "top level must be an object", where)
    _expect(doc.get("schema") == SCHEMA_VERSION,
            f"unsupported schema {doc.get('schema')!r}; this build reads "
            f"{SCHEMA_VERSION}", where or "schema")
    _expect(doc.get("field") == "Q",
            f"unsupported base field {doc.get('field')!r}; only Q is implemented",
            "field")
    name = doc.get("name")
    _expect(isinstance(name, str) and bool(name), "missing algebra name", "name")
    description = doc.get("description", "")
    _expect(isinstance(description, str), "description must be a string", "description")

    raw_basis = doc.get("basis")
    _expect(isinstance(raw_basis, list) and raw_basis, "missing basis", "basis")
    labels: list[str] = []
    parities: list[int] = []
    for b, item in enumerate(raw_basis):
        spot = f"basis[{b}]"
        _expect(isinstance(item, dict), "expected an object", spot)
        label = item.get("label")
        parity = item.get("parity")
        _expect(isinstance(label, str) and bool(label), "missing label", spot)
        _expect(parity in (0, 1), "parity must be 0 or 1", spot)
        _expect(label not in labels, f"duplicate basis label {label!r}", spot)
        labels.append(label)
        parities.append(parity)
    basis = GradedBasis(tuple(labels), tuple(parities))

    bracket = _parse_table(doc.get("bracket", []), basis, "bracket")
    product = _parse_table(doc.get("product", []), basis, "product")
    phi = _parse_matrix(doc.get("phi"), basis.dim, "phi")
    psi = _parse_matrix(doc.get("psi"), basis.dim, "psi")

    algebra = SuperAlgebra(basis=basis, bracket=bracket, product=product,
                           phi=phi, psi=psi)
    return LoadedAlgebra(name=name, description=description, algebra=algebra,
                         diagnostics=_grading_diagnostics(algebra))


def load(path: str | Path) -> LoadedAlgebra:
    """Read an algebra description file, attaching grading diagnostics."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"line {e.lineno}") from None
    return parse_algebra_document(doc, where=str(path))


def algebra_document(alg: SuperAlgebra, name: str, description: str = "") -> dict:
    """Serialize an algebra to the canonical document structure."""

    def table_doc(table: BilinearTable) -> list:
        out = []
        for (i, j), entry in table.entries:
            out.append([
                alg.labels[i],
                alg.labels[j],
                [[alg.labels[k], format_rational(c)] for k, c in entry],
            ])
        return out

    def matrix_doc(m: Matrix) -> list:
        return [[format_rational(e) for e in row] for row in m.rows]

    doc: dict = {
        "schema": SCHEMA_VERSION,
        "name": name,
        "field": "Q",
        "basis": [{"label": lab, "parity": par}
                  for lab, par in zip(alg.labels, alg.parities)],
        "bracket": table_doc(alg.bracket),
        "product": table_doc(alg.product),
        "phi": matrix_doc(alg.phi),
        "psi": matrix_doc(alg.psi),
    }
    if description:
        doc["description"] = description
    return doc


def save(alg: SuperAlgebra, name: str, path: str | Path,
         description: str = "") -> None:
    Path(path).write_text(
        json.dumps(algebra_document(alg, name, description), indent=2) + "\n",
        encoding="utf-8")


def load_map(path: str | Path) -> Matrix:
    """Read a square-matrix map file ({"schema": 1, "matrix": rows})."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", f"line {e.lineno}") from None
    _expect(isinstance(doc, dict), "top level must be an object", str(path))
    _expect(doc.get("schema") == SCHEMA_VERSION,
            f"unsupported schema {doc.get('schema')!r}", "schema")
    raw = doc.get("matrix")
    _expect(isinstance(raw, list) and raw, "missing matrix rows", "matrix")
    dim = len(raw)
    return _parse_matrix(raw, dim, "matrix")


def save_map(m: Matrix, path: str | Path) -> None:
    doc = {"schema": SCHEMA_VERSION,
           "matrix": [[format_rational(e) for e in row] for row in m.rows]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
