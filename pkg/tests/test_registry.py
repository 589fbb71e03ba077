import pytest

from automaforge.core.builder import MachineBuilder
from automaforge.core.descriptors import Bool, Integer
from automaforge.core.registry import builder, get_builder, list_builders

EXPECTED = {
    "Lijk0_gfa": "gfa",
    "Lijk_gfa": "gfa",
    "bal_dbca": "dbca",
    "bal_witness_gfa": "gfa",
    "bca3fa": "pkfa",
    "coinflip_pbca": "pbca",
    "lsay_nbca": "nbca",
    "neq_gfa": "gfa",
    "qft_probe": "qbca_realtime",
    "twin_dkfa": "pkfa",
    "twin_p2fa": "pkfa",
    "twin_pkfa": "pkfa",
    "upal": "qbca_realtime",
    "upal1": "qfa_oneway",
    "upal_star": "qbca_realtime",
    "upal_t": "qfa_oneway",
}


def test_all_builders_registered(builders):
    assert {name: cls.kind for name, cls in builders.items()} == EXPECTED
    assert [cls.builder_name for cls in list_builders()] == sorted(EXPECTED)
    assert all(cls.description for cls in builders.values())


def test_params_are_coerced(builders):
    upal = get_builder("upal").from_params({"N": "3"})
    assert upal.N == 3
    assert upal.to_dict() == {"builder": "upal", "params": {"N": 3}}
    probe = get_builder("qft_probe").from_params({"N": 4, "staggered": "yes"})
    assert probe.staggered is True
    assert get_builder("upal_t")().params == {"t": 2, "N": 2}


@pytest.mark.parametrize(
    "name, params",
    [
        ("upal", {"N": "1"}),
        ("upal", {"N": "two"}),
        ("upal", {"N": 2.5}),
        ("upal", {"M": 2}),
        ("bal_dbca", {"k": 14}),
        ("qft_probe", {"staggered": "maybe"}),
    ],
)
def test_bad_params(builders, name, params):
    with pytest.raises(ValueError):
        get_builder(name).from_params(params)


def test_describe(builders):
    info = get_builder("upal_t").describe()
    assert info["kind"] == "qfa_oneway"
    assert info["params"]["t"]["type"] == "integer"
    assert info["params"]["N"]["min"] == 2


def test_properties_are_inherited():
    class Base(MachineBuilder):
        size = Integer("Size", default=3, min_val=1)

    class Child(Base):
        flag = Bool("Flag")

    assert set(Child._properties) == {"size", "flag"}
    child = Child(size="5")
    assert (child.size, child.flag) == (5, False)
    with pytest.raises(NotImplementedError):
        child.build()


def test_registration_errors(builders):
    with pytest.raises(TypeError):
        builder("not_a_builder", kind="gfa")(object)

    @builder("scratch_builder", kind="gfa")
    class First(MachineBuilder):
        pass

    assert get_builder("scratch_builder") is First

    with pytest.raises(ValueError, match="already registered"):

        @builder("scratch_builder", kind="gfa")
        class Second(MachineBuilder):
            pass


def test_unknown_builder(builders):
    assert get_builder("no_such_builder") is None
