import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bandgap_delay import (
    Layer,
    LayerStack,
    ValidationError,
    air_reference,
    build_quarter_wave_stack,
    perturb_thicknesses,
    stack_from_dict,
    stack_to_dict,
)

from conftest import DESIGN_NM, N_HIGH, N_LOW


class TestQuarterWaveBuilder:
    def test_paper_mirror_thicknesses(self, mirror):
        assert len(mirror.layers) == 11
        d_high = DESIGN_NM / (4 * N_HIGH)
        d_low = DESIGN_NM / (4 * N_LOW)
        assert mirror.layers[0].thickness == pytest.approx(d_high, abs=1e-12)
        assert mirror.layers[1].thickness == pytest.approx(d_low, abs=1e-12)
        assert d_high == pytest.approx(77.93, abs=0.005)
        assert d_low == pytest.approx(122.70, abs=0.005)
        # the 1.1 um barrier
        assert mirror.total_thickness == pytest.approx(1081.042744872532, rel=1e-12)
        assert mirror.incident_medium == 1.0
        assert mirror.exit_medium == 1.0

    def test_indices_alternate_from_first_layer(self):
        high_first = build_quarter_wave_stack(692, N_HIGH, N_LOW, 5, "high")
        assert [l.refractive_index.real for l in high_first.layers] == [N_HIGH, N_LOW, N_HIGH, N_LOW, N_HIGH]
        low_first = build_quarter_wave_stack(692, N_HIGH, N_LOW, 5, "low")
        assert [l.refractive_index.real for l in low_first.layers] == [N_LOW, N_HIGH, N_LOW, N_HIGH, N_LOW]

    def test_single_layer_is_plain_slab(self):
        slab = build_quarter_wave_stack(600.0, 1.7, 1.7, 1, "high")
        assert len(slab.layers) == 1
        assert slab.layers[0].thickness == pytest.approx(600.0 / (4 * 1.7), rel=1e-15)

    def test_two_layer_total(self):
        stack = build_quarter_wave_stack(692, N_HIGH, N_LOW, 2, "high")
        assert stack.total_thickness == pytest.approx(200.6229633889208, rel=1e-12)
        assert stack.total_thickness == pytest.approx(77.93 + 122.70, abs=0.01)

    @pytest.mark.parametrize(
        "kwargs,field",
        [
            (dict(design_wavelength=-1.0), "design_wavelength"),
            (dict(design_wavelength=0.0), "design_wavelength"),
            (dict(n_high=0.0), "n_high"),
            (dict(n_low=-2.0), "n_low"),
            (dict(layer_count=0), "layer_count"),
            (dict(first_layer="middle"), "first_layer"),
        ],
    )
    def test_invalid_inputs_name_the_field(self, kwargs, field):
        base = dict(design_wavelength=692.0, n_high=N_HIGH, n_low=N_LOW, layer_count=11, first_layer="high")
        base.update(kwargs)
        with pytest.raises(ValidationError, match=field):
            build_quarter_wave_stack(**base)

    @given(
        lam=st.floats(200.0, 2000.0),
        nh=st.floats(1.2, 4.0),
        nl=st.floats(1.01, 1.19),
        count=st.integers(1, 25),
    )
    @settings(max_examples=60)
    def test_quarter_wave_identity(self, lam, nh, nl, count):
        stack = build_quarter_wave_stack(lam, nh, nl, count, "high")
        for layer in stack.layers:
            assert layer.refractive_index.real * layer.thickness == pytest.approx(lam / 4.0, rel=1e-12)


class TestLayerValidation:
    def test_negative_thickness_rejected(self):
        with pytest.raises(ValidationError, match="thickness"):
            Layer(refractive_index=1.5, thickness=-1.0)

    def test_nonpositive_index_rejected(self):
        with pytest.raises(ValidationError, match="refractive_index"):
            Layer(refractive_index=-1.5, thickness=10.0)

    def test_gain_medium_rejected(self):
        with pytest.raises(ValidationError, match="refractive_index"):
            Layer(refractive_index=1.5 - 0.1j, thickness=10.0)

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            Layer(refractive_index=float("nan"), thickness=10.0)


class TestPerturbation:
    def test_zero_sigma_returns_stack_unchanged(self, mirror):
        assert perturb_thicknesses(mirror, 0.0, seed=123) == mirror

    def test_deterministic_for_fixed_seed(self, mirror):
        a = perturb_thicknesses(mirror, 0.02, seed=1)
        b = perturb_thicknesses(mirror, 0.02, seed=1)
        assert a == b
        c = perturb_thicknesses(mirror, 0.02, seed=2)
        assert a != c

    def test_indices_unchanged(self, mirror):
        perturbed = perturb_thicknesses(mirror, 0.05, seed=9)
        assert [l.refractive_index for l in perturbed.layers] == [l.refractive_index for l in mirror.layers]

    def test_sigma_out_of_range(self, mirror):
        for bad in (-0.01, 0.5, 0.7):
            with pytest.raises(ValidationError, match="relative_sigma"):
                perturb_thicknesses(mirror, bad, seed=0)

    def test_thickness_floor_holds_at_large_sigma(self, mirror):
        for seed in range(50):
            perturbed = perturb_thicknesses(mirror, 0.49, seed=seed)
            for nominal, layer in zip(mirror.layers, perturbed.layers):
                assert layer.thickness >= 0.01 * nominal.thickness - 1e-15

    def test_ensemble_mean_preserves_total_thickness(self, mirror):
        # Monte-Carlo check of the sampler itself: E[total] = nominal total.
        totals = np.array(
            [perturb_thicknesses(mirror, 0.02, seed=seed).total_thickness for seed in range(10_000)]
        )
        assert abs(totals.mean() - mirror.total_thickness) / mirror.total_thickness < 0.005


class TestAirReference:
    def test_reference_length_of_paper_mirror(self, mirror):
        ref = air_reference(mirror)
        assert ref.layers == ()
        assert ref.reference_length == pytest.approx(1081.042744872532, rel=1e-12)
        assert ref.traversal_length == mirror.total_thickness
        assert ref.total_thickness == 0.0

    def test_empty_stack_maps_to_zero(self):
        ref = air_reference(LayerStack())
        assert ref.layers == () and ref.reference_length == 0.0

    def test_single_slab(self):
        stack = LayerStack(layers=(Layer(1.5, 100.0),))
        assert air_reference(stack).reference_length == 100.0

    def test_idempotent_reference_length(self, mirror):
        once = air_reference(mirror)
        twice = air_reference(once)
        assert twice.reference_length == once.reference_length


# ---------------------------------------------------------------------------
# JSON stack descriptions.
# ---------------------------------------------------------------------------

_index = st.one_of(
    st.floats(1.0, 4.0),
    st.builds(complex, st.floats(1.0, 4.0), st.floats(0.0, 0.5)),
)
_layer = st.builds(Layer, refractive_index=_index, thickness=st.floats(0.0, 5000.0))
_stack = st.builds(
    LayerStack,
    layers=st.lists(_layer, min_size=0, max_size=12).map(tuple),
    incident_medium=_index,
    exit_medium=_index,
    label=st.text(max_size=20),
    reference_length=st.floats(0.0, 5000.0),
)


class TestStackJson:
    @given(stack=_stack)
    @settings(max_examples=80)
    def test_round_trip_is_lossless(self, stack):
        assert stack_from_dict(json.loads(json.dumps(stack_to_dict(stack)))) == stack

    def test_explicit_form_parses(self):
        data = {
            "incident_medium": 1.0,
            "exit_medium": 1.0,
            "layers": [{"n": 2.22, "d_nm": 77.93}, {"n": [1.41, 0.001], "d_nm": 122.70}],
        }
        stack = stack_from_dict(data)
        assert stack.layers[0].refractive_index == 2.22
        assert stack.layers[1].refractive_index == 1.41 + 0.001j

    def test_shorthand_form_parses(self, mirror):
        data = {
            "quarter_wave": {
                "lambda0_nm": 692,
                "n_high": 2.22,
                "n_low": 1.41,
                "count": 11,
                "first": "high",
            }
        }
        assert stack_from_dict(data).layers == mirror.layers

    def test_shorthand_missing_key(self):
        with pytest.raises(ValidationError, match="quarter_wave"):
            stack_from_dict({"quarter_wave": {"lambda0_nm": 692}})

    def test_save_load_file(self, tmp_path, mirror):
        from bandgap_delay import load_stack, save_stack

        path = tmp_path / "mirror.json"
        save_stack(mirror, path)
        assert load_stack(path) == mirror

    def test_garbage_rejected(self):
        with pytest.raises(ValidationError):
            stack_from_dict({"nothing": 1})
