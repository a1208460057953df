"""Shared fixtures: the 1 mm driven-cavity operating point used throughout."""

import math

import pytest

from chiralcp import DriveSpec, molecule_preset, symmetric_cavity
from chiralcp.dynamics import force_field_pair


@pytest.fixture(scope="session")
def mol_3mcp():
    return molecule_preset("3MCP-eq")


@pytest.fixture(scope="session")
def mol_propylene():
    return molecule_preset("propylene-oxide")


@pytest.fixture(scope="session")
def cavity_1mm():
    return symmetric_cavity(1e-3, 0.05, 0.8)


@pytest.fixture(scope="session")
def drive_ref():
    """5 W/cm^2 drive, 2 pi x 0.1 MHz blue detuning, zero temperature."""
    return DriveSpec(detuning_delta=2.0 * math.pi * 1e5, intensity=5e4)


@pytest.fixture(scope="session")
def field_pair(mol_3mcp, cavity_1mm, drive_ref):
    """Force-field pair for both enantiomers; built once, it costs seconds."""
    return force_field_pair(mol_3mcp, cavity_1mm, drive_ref)
