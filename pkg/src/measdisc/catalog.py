"""String tags for catalog ensembles and shared states.

Ensemble tags: ``table1``, ``trine``, ``ic:<d>``, ``dplus1:<d>``,
``weyl:<d>:<basis>`` with basis ``magic`` (d = 2^r), ``ic``, ``sarkar``,
``dplus1`` or ``computational``; or a path to an ensemble JSON file.

State tags: ``maxent:<d>``, ``werner:<p>``, ``pure2q:<alpha>``, or a path to
a state JSON file ``{"dim_A", "dim_B", "matrix"}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import constructions as C
from .entangled import BipartiteDensity, max_entangled, pure_two_qubit, werner_state
from .measurements import MeasurementEnsemble, Povm, ensemble_from_dict


class TagError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    tag: str
    kind: str  # "projective" | "weyl" | "dplus1" | "file"
    ensemble: MeasurementEnsemble
    basis: C.Basis | None = None
    bases: tuple[C.Basis, ...] | None = None

    def proof_bob(self) -> list[Povm]:
        if self.kind == "projective":
            return C.proof_bob_measurements("projective", self.bases)
        if self.kind in ("weyl", "dplus1"):
            return C.proof_bob_measurements(self.kind, self.basis)
        raise TagError(f"no proof measurements are known for {self.tag!r}")

    def conditions(self) -> dict[str, C.ConditionReport]:
        """Overlap conditions relevant to this construction; the first is decisive."""
        if self.kind == "projective":
            return {"theorem2": C.check_theorem2_conditions(self.bases)}
        if self.kind == "weyl":
            out = {"cond": C.check_cond(self.basis), "ic": C.check_ic_condition(self.basis)}
            if self.tag.startswith("ic:"):
                out = {"ic": out["ic"], "cond": out["cond"]}
            return out
        if self.kind == "dplus1":
            return {"condd1": C.check_condd1(self.basis)}
        return {}


def _int(text: str, tag: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise TagError(f"bad integer {text!r} in tag {tag!r}") from None


def _weyl_basis(d: int, name: str, tag: str) -> C.Basis:
    if name == "magic":
        r = int(round(np.log2(d)))
        if 2 ** r != d:
            raise TagError(f"magic basis needs d = 2^r, got {d}")
        return C.tensor_power_basis(C.magic_qubit_basis(), r)
    if name == "ic":
        return C.ic_basis(d)
    if name == "sarkar":
        return C.sarkar_basis(d)
    if name == "dplus1":
        return C.example_basis_dplus1(d)
    if name == "computational":
        return C.Basis.computational(d)
    raise TagError(f"unknown basis {name!r} in tag {tag!r}")


def ensemble_entry(tag: str) -> CatalogEntry:
    if tag.endswith(".json"):
        path = Path(tag)
        if not path.exists():
            raise TagError(f"ensemble file {tag} not found")
        return CatalogEntry(tag, "file", ensemble_from_dict(json.loads(path.read_text())))
    parts = tag.split(":")
    head = parts[0]
    try:
        if head == "table1" and len(parts) == 1:
            bases = tuple(C.table1_bases())
            return CatalogEntry(tag, "projective", C.projective_ensemble(bases), bases=bases)
        if head == "trine" and len(parts) == 1:
            basis = C.example_basis_dplus1(2)
            return CatalogEntry(tag, "dplus1", C.trine_pair_ensemble(), basis=basis)
        if head == "ic" and len(parts) == 2:
            basis = C.ic_basis(_int(parts[1], tag))
            return CatalogEntry(tag, "weyl", C.weyl_covariant_povm_ensemble(basis), basis=basis)
        if head == "dplus1" and len(parts) == 2:
            basis = C.example_basis_dplus1(_int(parts[1], tag))
            return CatalogEntry(tag, "dplus1", C.dplus1_povm_ensemble(basis), basis=basis)
        if head == "weyl" and len(parts) == 3:
            basis = _weyl_basis(_int(parts[1], tag), parts[2], tag)
            return CatalogEntry(tag, "weyl", C.weyl_covariant_povm_ensemble(basis), basis=basis)
    except TagError:
        raise
    except ValueError as exc:
        raise TagError(f"{tag!r}: {exc}") from None
    raise TagError(f"unknown ensemble tag {tag!r}")


def parse_state(spec: str) -> BipartiteDensity:
    if spec.endswith(".json"):
        path = Path(spec)
        if not path.exists():
            raise TagError(f"state file {spec} not found")
        return BipartiteDensity.from_dict(json.loads(path.read_text()))
    head, _, arg = spec.partition(":")
    try:
        if head == "maxent":
            return max_entangled(int(arg))
        if head == "werner":
            return werner_state(float(arg))
        if head == "pure2q":
            return pure_two_qubit(float(arg))
    except ValueError as exc:
        raise TagError(f"bad state spec {spec!r}: {exc}") from None
    raise TagError(f"unknown state spec {spec!r}; expected maxent:d, werner:p, pure2q:alpha or a .json file")
