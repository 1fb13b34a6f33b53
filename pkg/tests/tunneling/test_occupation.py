"""Tests for occupation models and the nonequilibrium density split."""

import math

import pytest
from pydantic import ValidationError

from junctionlab.bcs import thermal_qp_density
from junctionlab.exceptions import NonNormalizableError
from junctionlab.models import Electrode, Junction
from junctionlab.tunneling import (
    OccupationMode,
    OccupationModel,
    occupation_at,
    occupation_scale,
    partition_nonequilibrium,
    resolve_state,
    vacancy_at,
)


def test_nonequilibrium_needs_densities():
    """Test that nonequilibrium occupation without densities is rejected."""
    with pytest.raises(ValidationError, match="density for both"):
        OccupationModel(mode=OccupationMode.NONEQUILIBRIUM, n1=1.0)


def test_thermal_has_no_density():
    """Test that a thermal model refuses to report a density."""
    with pytest.raises(ValueError, match="no target density"):
        OccupationModel.thermal().density(1)


def test_thermal_density_gives_unit_scale():
    """Test that the thermal density is reproduced with a scale close to 1."""
    electrode = Electrode(gap0=190)
    density = thermal_qp_density(electrode, 0.1)
    assert abs(occupation_scale(electrode, 0.1, density)) < 0.1


def test_doubling_density_adds_log_two():
    """Test that the scale is proportional to the target density."""
    electrode = Electrode(gap0=190, dynes=0.19)
    single = occupation_scale(electrode, 0.05, 10.0)
    double = occupation_scale(electrode, 0.05, 20.0)
    assert double - single == pytest.approx(math.log(2), abs=1e-9)


def test_zero_density_scale():
    """Test that an empty electrode has a scale of zero."""
    assert occupation_scale(Electrode(gap0=190), 0.05, 0.0) == -math.inf


def test_overfilled_gap_edge_is_rejected():
    """Test that a density needing an occupation above 1 raises."""
    with pytest.raises(NonNormalizableError, match="gap edge"):
        occupation_scale(Electrode(gap0=190, dynes=0.19), 0.02, 1e12)


@pytest.mark.parametrize("energy", [-400.0, -195.0, -50.0, 0.0, 120.0, 191.0, 300.0])
@pytest.mark.parametrize("occ", [OccupationModel.thermal(), OccupationModel.nonequilibrium(50.0, 5.0)])
def test_occupation_and_vacancy_add_to_one(al_ti_junction: Junction, energy: float, occ: OccupationModel):
    """Test that occupation and vacancy are complementary at every energy."""
    for index in (1, 2):
        total = occupation_at(al_ti_junction, index, energy, 0.05, occ) + vacancy_at(
            al_ti_junction, index, energy, 0.05, occ
        )
        assert total == pytest.approx(1.0, abs=1e-12)


def test_excess_occupation_above_gap(al_ti_junction: Junction):
    """Test that a nonequilibrium density populates states above the gap and keeps the gap thermal."""
    # Setup
    thermal = OccupationModel.thermal()
    excess = OccupationModel.nonequilibrium(50.0, 50.0)

    # Execute
    above = occupation_at(al_ti_junction, 1, 200.0, 0.02, excess)
    above_thermal = occupation_at(al_ti_junction, 1, 200.0, 0.02, thermal)
    inside = occupation_at(al_ti_junction, 1, 100.0, 0.02, excess)

    # Verify
    assert above > above_thermal
    assert inside == occupation_at(al_ti_junction, 1, 100.0, 0.02, thermal)


def test_symmetric_partition(al_junction: Junction):
    """Test that identical electrodes share the density equally."""
    n1, n2 = partition_nonequilibrium(al_junction, 3.0, 0.05)
    assert n1 == pytest.approx(1.5)
    assert n2 == pytest.approx(1.5)


@pytest.mark.parametrize("temperature", [0.02, 0.1, 0.3])
def test_lower_gap_collects_more(al_ti_junction: Junction, temperature: float):
    """Test that the lower-gap electrode holds the larger share and the shares add up."""
    n1, n2 = partition_nonequilibrium(al_ti_junction, 7.0, temperature)
    assert n2 > n1 >= 0
    assert n1 + n2 == pytest.approx(7.0, rel=1e-12)


def test_partition_of_nothing(al_ti_junction: Junction):
    """Test that a zero density splits into zeros."""
    assert partition_nonequilibrium(al_ti_junction, 0.0, 0.05) == (0.0, 0.0)


def test_partition_rejects_negative_density(al_ti_junction: Junction):
    """Test that a negative density is rejected."""
    with pytest.raises(ValueError, match="non-negative"):
        partition_nonequilibrium(al_ti_junction, -1.0, 0.05)


def test_resolve_state(al_ti_junction: Junction):
    """Test that the resolved densities are thermal plus the nonequilibrium share."""
    # Setup
    share1, share2 = partition_nonequilibrium(al_ti_junction, 2.0, 0.15)

    # Execute
    state = resolve_state(al_ti_junction, 0.15, 2.0)

    # Verify
    assert state.n_neq_total == 2.0
    assert state.n1 == pytest.approx(thermal_qp_density(al_ti_junction.electrode1, 0.15) + share1)
    assert state.n2 == pytest.approx(thermal_qp_density(al_ti_junction.electrode2, 0.15) + share2)
    assert OccupationModel.from_state(state, OccupationMode.THERMAL) == OccupationModel.thermal()
    assert OccupationModel.from_state(state, OccupationMode.NONEQUILIBRIUM).n2 == state.n2
