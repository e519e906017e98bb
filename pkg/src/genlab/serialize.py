"""JSON file formats and atomic writes.

Rationals travel as decimal-free "p/q" strings (plain integers also accepted);
anything with a dot or exponent is rejected so exactness can never silently
degrade. Writers stage to a temp file in the target directory and rename, so
partial files are never left behind.
"""
from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import (
    Atom,
    DomainFamily,
    GenlabError,
    HypothesisClass,
    Hypothesis,
    LabeledDistribution,
    LabeledSample,
    MetaDistribution,
)
from .dimensions import ShatteringCertificate, CertificateError
from .divergence import Cover, DivergenceQuery
from .learner import ErrorTable, TrainingSet

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class FormatError(GenlabError):
    """A file or string does not match the expected format."""


def rational_to_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(text: str) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise FormatError(
            f"expected a decimal-free rational like '3/10' or '7', got {text!r}"
        )
    try:
        return Fraction(text.strip())
    except ZeroDivisionError as exc:
        raise FormatError(f"zero denominator in rational {text!r}") from exc


def domain_to_dict(d: LabeledDistribution) -> dict[str, Any]:
    return {
        "space": d.space,
        "atoms": [
            {"x": a.x, "y": a.y, "mass": rational_to_str(a.mass)} for a in d.atoms
        ],
    }


def domain_from_dict(obj: dict[str, Any]) -> LabeledDistribution:
    try:
        atoms = tuple(
            Atom(int(a["x"]), int(a["y"]), rational_from_str(a["mass"]))
            for a in obj["atoms"]
        )
        return LabeledDistribution(int(obj["space"]), atoms)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed domain object: {exc}") from exc


def hypothesis_class_to_dict(hc: HypothesisClass) -> dict[str, Any]:
    return {"space": hc.space, "hypotheses": [list(h.labels) for h in hc.members]}


def hypothesis_class_from_dict(obj: dict[str, Any]) -> HypothesisClass:
    try:
        members = tuple(
            Hypothesis(tuple(int(v) for v in row)) for row in obj["hypotheses"]
        )
        return HypothesisClass(int(obj["space"]), members)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed hypothesis class object: {exc}") from exc


def _domains_from_entries(entries: list[Any], base_dir: Path | None) -> tuple[LabeledDistribution, ...]:
    domains = []
    for entry in entries:
        if isinstance(entry, str):
            path = Path(entry)
            if not path.is_absolute() and base_dir is not None:
                path = base_dir / path
            domains.append(domain_from_dict(_read_json(path)))
        else:
            domains.append(domain_from_dict(entry))
    return tuple(domains)


def family_to_dict(g: DomainFamily) -> dict[str, Any]:
    return {"domains": [domain_to_dict(d) for d in g.domains]}


def family_from_dict(obj: dict[str, Any], base_dir: Path | None = None) -> DomainFamily:
    """Accepts both plain families and meta files (weights ignored)."""
    try:
        domains = _domains_from_entries(obj["domains"], base_dir)
    except KeyError as exc:
        raise FormatError("family object needs a 'domains' list") from exc
    if not domains:
        raise FormatError("family object lists no domains")
    return DomainFamily(domains[0].space, domains)


def meta_to_dict(p: MetaDistribution) -> dict[str, Any]:
    return {
        "domains": [domain_to_dict(d) for d in p.family.domains],
        "weights": [rational_to_str(w) for w in p.weights],
    }


def meta_from_dict(obj: dict[str, Any], base_dir: Path | None = None) -> MetaDistribution:
    try:
        domains = _domains_from_entries(obj["domains"], base_dir)
        weights = tuple(rational_from_str(w) for w in obj["weights"])
    except KeyError as exc:
        raise FormatError(f"meta object needs 'domains' and 'weights': {exc}") from exc
    if not domains:
        raise FormatError("meta object lists no domains")
    return MetaDistribution(DomainFamily(domains[0].space, domains), weights)


def certificate_to_dict(cert: ShatteringCertificate) -> dict[str, Any]:
    return {
        "S": list(cert.domain_indices),
        "witnesses": {str(mask): w for mask, w in enumerate(cert.witnesses)},
    }


def certificate_from_dict(obj: dict[str, Any]) -> ShatteringCertificate:
    try:
        indices = tuple(int(i) for i in obj["S"])
        table = {int(k): int(v) for k, v in obj["witnesses"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed certificate object: {exc}") from exc
    size = 1 << len(indices)
    if sorted(table) != list(range(size)):
        raise CertificateError(
            f"certificate needs witnesses for all {size} subset bitmasks"
        )
    return ShatteringCertificate(indices, tuple(table[m] for m in range(size)))


def cover_to_dict(cover: Cover) -> dict[str, Any]:
    return {
        "centers": list(cover.center_indices),
        "radius": rational_to_str(cover.radius),
        "tau": None if cover.query.tau is None else rational_to_str(cover.query.tau),
    }


def cover_from_dict(obj: dict[str, Any]) -> Cover:
    try:
        tau = obj["tau"]
        return Cover(
            tuple(int(c) for c in obj["centers"]),
            rational_from_str(obj["radius"]),
            DivergenceQuery(None if tau is None else rational_from_str(tau)),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed cover object: {exc}") from exc


def training_set_to_dict(t: TrainingSet) -> dict[str, Any]:
    return {
        "domain_indices": list(t.domain_indices),
        "samples": [[[x, y] for (x, y) in s.points] for s in t.samples],
        "master_seed": t.master_seed,
        "draw_seeds": list(t.draw_seeds),
    }


def training_set_from_dict(obj: dict[str, Any]) -> TrainingSet:
    try:
        samples = tuple(
            LabeledSample(tuple((int(x), int(y)) for x, y in rows))
            for rows in obj["samples"]
        )
        return TrainingSet(
            tuple(int(i) for i in obj["domain_indices"]),
            samples,
            int(obj["master_seed"]),
            tuple(int(s) for s in obj["draw_seeds"]),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed training set object: {exc}") from exc


def error_table_to_dict(t: ErrorTable) -> dict[str, Any]:
    return {
        "mode": t.mode,
        "entries": [[rational_to_str(v) for v in row] for row in t.entries],
    }


def error_table_from_dict(obj: dict[str, Any]) -> ErrorTable:
    try:
        rows = tuple(
            tuple(rational_from_str(v) for v in row) for row in obj["entries"]
        )
        return ErrorTable(rows, str(obj["mode"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed error table object: {exc}") from exc


def _read_json(path: Path | str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_domain(path: Path | str) -> LabeledDistribution:
    return domain_from_dict(_read_json(path))


def load_hypothesis_class(path: Path | str) -> HypothesisClass:
    return hypothesis_class_from_dict(_read_json(path))


def load_family(path: Path | str) -> DomainFamily:
    return family_from_dict(_read_json(path), Path(path).parent)


def load_meta(path: Path | str) -> MetaDistribution:
    return meta_from_dict(_read_json(path), Path(path).parent)


def load_certificate(path: Path | str) -> ShatteringCertificate:
    return certificate_from_dict(_read_json(path))


def write_text_atomic(path: Path | str, text: str) -> None:
    """Stage to a sibling temp file and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: Path | str, obj: Any) -> None:
    write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
