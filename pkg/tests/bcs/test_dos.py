"""Tests for the Dynes density of states and the Fermi occupation."""

import numpy as np
import pytest

from junctionlab.bcs import (
    DosProfile,
    cell_averaged_dos,
    default_dynes,
    dos,
    dos_scalar,
    fermi,
    log_fermi,
    simulation_profile,
)
from junctionlab.exceptions import DegenerateProfileError
from junctionlab.models import Electrode
from junctionlab.units import CONSTANTS

PROFILE = DosProfile(gap=190, dynes=0.19)


def test_dos_is_even():
    """Test that the DOS is exactly even in energy."""
    energy = np.linspace(0, 1000, 2001)
    assert np.array_equal(dos(energy, PROFILE), dos(-energy, PROFILE))


def test_dos_far_from_gap():
    """Test that the DOS tends to the normal-state value."""
    assert dos(1e5, PROFILE) == pytest.approx(1.0, rel=1e-5)


def test_dos_hard_gap():
    """Test that an unbroadened DOS vanishes inside the gap."""
    hard = DosProfile(gap=190, dynes=0)
    assert dos(100.0, hard) == 0.0
    assert dos(300.0, hard) == pytest.approx(300 / np.sqrt(300**2 - 190**2))


def test_dos_normal_metal():
    """Test that a vanishing gap gives a flat DOS."""
    assert np.all(dos(np.array([-5.0, 0.0, 5.0]), DosProfile(gap=0, dynes=0.1)) == 1.0)


def test_dos_degenerate():
    """Test that the indeterminate point of a bare normal metal is rejected."""
    with pytest.raises(DegenerateProfileError):
        dos(0.0, DosProfile(gap=0, dynes=0))


@pytest.mark.parametrize("energy", [-400.0, -190.1, 50.0, 189.0, 250.0])
def test_dos_scalar_matches_vector(energy: float):
    """Test that the scalar form used in quadrature agrees with the vector form."""
    assert dos_scalar(energy, PROFILE.gap, PROFILE.dynes) == pytest.approx(dos(energy, PROFILE), rel=1e-12)


@pytest.mark.parametrize("energy", [-600.0, 150.0, 300.0])
def test_cell_average_matches_point_value(energy: float):
    """Test that the exact cell average converges to the DOS for a narrow cell."""
    assert cell_averaged_dos(energy, 1e-3, PROFILE) == pytest.approx(dos(energy, PROFILE), rel=1e-5)


def test_cell_average_preserves_weight():
    """Test that cell averages integrate to the same number of states as the antiderivative."""
    step = 0.5
    energy = np.arange(-1000, 1000, step) + step / 2
    total = np.sum(cell_averaged_dos(energy, step, PROFILE)) * step
    assert total == pytest.approx(2 * np.sqrt(1000**2 - 190**2), rel=1e-4)


def test_fermi():
    """Test the Fermi function at and far from the Fermi level."""
    assert fermi(0.0, 0.02) == 0.5
    assert fermi(1e6, 0.02) == 0.0
    assert fermi(-1e6, 0.02) == 1.0


def test_log_fermi_deep_tail():
    """Test that the log occupation stays accurate where the occupation underflows."""
    kt = CONSTANTS.k_b * 0.02
    assert log_fermi(1e4, 0.02) == pytest.approx(-1e4 / kt, rel=1e-12)


def test_default_dynes():
    """Test the default broadening ratio."""
    assert default_dynes(190) == pytest.approx(0.19)


def test_simulation_profile_floor():
    """Test that the simulation profile never drops below the broadening floor."""
    profile = simulation_profile(Electrode(gap0=190, dynes=0), 0.02)
    assert profile.dynes == pytest.approx(0.019)
    assert profile.gap == pytest.approx(190)
