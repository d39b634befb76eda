import pytest

from equivarifier.actions import FunctionAction
from equivarifier.errors import ConfigError
from equivarifier.formatters import FormatterRegistry
from equivarifier.groups import cyclic_group, describe_group
from equivarifier.toys import registry, run_toy
from equivarifier.toys.base import Toy
from equivarifier.toys.registry import ToyRegistry


# Mock toy: C2 flipping {0, 1}, F the identity
class MockToy(Toy):
    name = "mock_flip"
    description = "Mock toy"
    def group(self): return cyclic_group(2)
    def action(self, G): return FunctionAction(G, lambda k, x: (x + k) % 2, label="flip")
    def domain(self): return range(2)
    def codomain(self): return range(2)
    def base_map(self, x): return int(x)


def test_manual_registration():
    toys = ToyRegistry()
    toys.register(MockToy)

    listed = toys.get_toys()
    assert len(listed) == 1
    assert listed[0].name == "mock_flip"
    assert toys.get_toy("mock_flip") is listed[0]


def test_decorator_registration():
    toys = ToyRegistry()

    def local_register_toy(cls):
        toys.register(cls)
        return cls

    @local_register_toy
    class DecoratedToy(MockToy):
        name = "decorated"

    assert [t.name for t in toys.get_toys()] == ["decorated"]


def test_unknown_toy():
    with pytest.raises(ConfigError):
        ToyRegistry().get_toy("missing")
    with pytest.raises(ConfigError):
        run_toy("missing")


def test_builtin_toys_registered():
    names = {t.name for t in registry.get_toys()}
    assert {"translation", "constant", "quotient", "dihedral"} <= names


def test_mock_toy_runs():
    demo = MockToy().run()
    assert demo.lifted == {"0": [0, 1], "1": [1, 0]}
    assert demo.passed


def test_translation_toy():
    demo = run_toy("translation")
    assert demo.lifted["0"] == [0, 3, 2, 1]
    assert demo.components == 4
    assert demo.max_deviation == 0.0
    assert demo.solutions == 1
    assert demo.passed


def test_constant_toy():
    demo = run_toy("constant")
    assert all(values == [1, 1, 1, 1] for values in demo.lifted.values())
    assert demo.passed


def test_quotient_toy_has_two_components():
    demo = run_toy("quotient")
    assert demo.components == 2
    assert demo.group == "C4"
    assert len(demo.per_element_deviation) == 4
    assert demo.passed


def test_dihedral_toy():
    demo = run_toy("dihedral")
    assert demo.components == 6
    assert demo.passed


# --- formatters --------------------------------------------------------------

def test_lift_demo_formatting():
    demo = run_toy("translation")
    text = FormatterRegistry.format("lift_demo", demo)
    assert "translation" in text
    assert "✅" in text
    csv_text = FormatterRegistry.format("lift_demo", demo, as_csv=True)
    lines = csv_text.strip().splitlines()
    assert lines[0].split(",")[:2] == ["x", "F"]
    assert lines[1].split(",") == ["0", "0", "0", "3", "2", "1"]


def test_group_info_formatting():
    info = describe_group(cyclic_group(3))
    text = FormatterRegistry.format("group_info", info)
    assert "Axioms OK" in text
    assert "g^2" in text
    assert "order" in FormatterRegistry.format("group_info", info, as_csv=True)


def test_unknown_kind_falls_back_to_json():
    info = describe_group(cyclic_group(2))
    text = FormatterRegistry.format("no_such_kind", info)
    assert '"order": 2' in text
