import json

import pytest

from biphoton.registry import Registry, SpeciesNotFound, default_registry, species


class TestHelium:
    def test_reference_values(self):
        he = species("He")
        assert he.delta_eg.value == pytest.approx(20.62)
        assert he.delta_eg.unit == "eV"
        assert he.e_2p.value == pytest.approx(21.22)
        assert he.f_g2p == pytest.approx(0.28)
        assert he.f_2p2s == pytest.approx(-0.36)
        assert he.d4_eg == pytest.approx(149.0)
        assert he.lifetime_2s.value == pytest.approx(0.0197)

    def test_delta_ej_negative(self):
        assert species("He").delta_ej.value == pytest.approx(-0.60, abs=1e-9)

    def test_immutability(self):
        a, b = species("He"), species("He")
        assert a == b
        with pytest.raises(Exception):
            a.f_g2p = 1.0


class TestHeLike:
    def test_z2_is_helium(self):
        assert species("He-like(Z=2)") == species("He")

    def test_neon_gap(self):
        ne = species("He-like(Z=10)")
        assert ne.delta_eg.to("eV").value == pytest.approx(915.0, rel=0.02)

    def test_lifetime_z6_scaling(self):
        he, ne = species("He"), species("He-like(Z=10)")
        sigma = default_registry()._sigma
        lam = (10 - sigma) / (2 - sigma)
        ratio = he.lifetime_2s.to("s").value / ne.lifetime_2s.to("s").value
        assert ratio == pytest.approx(lam**6, rel=1e-12)

    def test_invalid_z(self):
        with pytest.raises(SpeciesNotFound):
            species("He-like(Z=1)")

    def test_unknown_lists_names(self):
        with pytest.raises(SpeciesNotFound) as err:
            species("Xe")
        assert "He" in str(err.value)


class TestUserOverlay:
    def test_merge(self, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text(json.dumps({"species": {
            "He*": {"delta_eg_ev": 20.0, "e_2p_ev": 21.0, "f_g2p": 0.3,
                    "f_2p2s": -0.3, "z": 2},
        }}))
        merged = default_registry().merged_with(path)
        assert merged.species("He*").delta_eg.value == 20.0
        assert merged.species("He").delta_eg.value == pytest.approx(20.62)
        with pytest.raises(SpeciesNotFound):
            default_registry().species("He*")

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"species": {
            "X": {"delta_eg_ev": 20.0, "e_2p_ev": 21.0, "f_g2p": 0.3,
                  "f_2p2s": -0.3, "z": 2, "typo_field": 1},
        }}))
        with pytest.raises(ValueError, match="typo_field"):
            default_registry().merged_with(path)

    def test_invariants_enforced(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"species": {
            "X": {"delta_eg_ev": 22.0, "e_2p_ev": 21.0, "f_g2p": 0.3,
                  "f_2p2s": -0.3, "z": 2},
        }}))
        with pytest.raises(ValueError, match="delta_eg < e_2p"):
            default_registry().merged_with(path)
