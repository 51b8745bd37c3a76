"""Ready-made interaction operators and experimentally motivated regimes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .operators import HermitianOperator, site_sum, spin_x


def rabi_interaction(n_sites: int = 1) -> HermitianOperator:
    """sigma_x summed over an array of two-level systems (one by default)."""
    return site_sum(spin_x(1, pauli=True), n_sites)


def dicke_interaction(n_atoms: int) -> HermitianOperator:
    """Collective J_x of n_atoms two-level atoms, symmetric sector only.

    Built in the (n_atoms + 1)-dimensional spin-(n/2) representation, not
    the full 2**n product space.
    """
    if n_atoms < 1:
        raise ValueError("need at least one atom")
    return spin_x(n_atoms)


@dataclass(frozen=True)
class RegimePreset:
    name: str
    g_tau: float
    note: str


def regime_presets() -> list[RegimePreset]:
    """Coupling-time products reported for current experimental platforms."""
    return [
        RegimePreset("circuit_qed", 200.0,
                     "superconducting qubit + nanomechanical resonator, "
                     "protocol run for the resonator lifetime"),
        RegimePreset("cavity_qed", 40.0,
                     "atom + cavity field, protocol run for the cavity lifetime"),
        RegimePreset("dicke_cold_atoms_lower", 1e-3,
                     "atomic ensemble in an optical cavity, lower bound"),
        RegimePreset("dicke_cold_atoms_upper", 1e-2,
                     "atomic ensemble in an optical cavity, upper bound"),
    ]


def preset_by_name(name: str) -> RegimePreset:
    for preset in regime_presets():
        if preset.name == name:
            return preset
    raise KeyError(f"unknown regime preset {name!r}")


@dataclass(frozen=True)
class ParamFamily:
    """Coupling-parameterized Hamiltonian family for criticality scans."""

    name: str
    build: Callable[[float], HermitianOperator]
    lambda_c: float | None = None


def linear_family(name: str, base: HermitianOperator, coupling: HermitianOperator,
                  lambda_c: float | None = None) -> ParamFamily:
    """Family H(lambda) = base + lambda * coupling."""
    if base.dim != coupling.dim:
        raise ValueError(f"dimension mismatch: {base.dim} vs {coupling.dim}")

    def build(lam: float) -> HermitianOperator:
        return HermitianOperator(base.entries + lam * coupling.entries)

    return ParamFamily(name=name, build=build, lambda_c=lambda_c)


def dicke_family(n_atoms: int, lambda_c: float = 1.0) -> ParamFamily:
    """Collective J_x scaled by a coupling lambda.

    The critical coupling default is illustrative only; it is not fixed
    by the probe protocol itself.
    """
    base = dicke_interaction(n_atoms)

    def build(lam: float) -> HermitianOperator:
        return HermitianOperator(lam * base.entries)

    return ParamFamily(name=f"dicke_{n_atoms}", build=build, lambda_c=lambda_c)
