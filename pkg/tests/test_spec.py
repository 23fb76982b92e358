import pytest

from epalg.cocycle import validate_cocycle
from epalg.spec import (BUILDERS, SpecError, build, dumps_system, fingerprint, load_system,
                        loads_system, parse_params)

EPK21 = '''
schema_version = 1
name = "epk(2,1)"

[group]
kind = "integers"

[graph]
vertices = ["v"]
edges = [{name = "0", range = "v", source = "v"},
         {name = "1", range = "v", source = "v"}]

[[action.generator]]
element = "1"
vertices = {v = "v"}
edges = {"0" = "1", "1" = "0"}

[cocycle]
kind = "generating"
values = {"0" = "0", "1" = "1"}
'''

DEFAULT_PARAMS = {
    "epk": {"a": 3, "b": 2}, "o21": {}, "strings": {"order": 3},
    "epk_strings": {"a": 2, "b": 1}, "endomorphism": {"a": 2, "b": 1},
    "katsura": {"vertices": ["v", "w"], "edges": [["e", "v", "v"], ["f", "v", "w"]],
                "B": [["v", "v", 1]]},
    "dynamical": {"sigma": [1, 0], "tau": [1, 0], "xi": [1, 1]},
    "rotation": {"p": 3, "k": 1}, "tree": {"a": 2, "b": 1, "length": 2},
    "sink_free": {"a": 2, "b": 1, "t_size": 2},
}


def test_explicit_file_matches_builder():
    assert fingerprint(loads_system(EPK21)) == fingerprint(build("epk", {"a": 2, "b": 1}))


def test_construct_section():
    s = loads_system('schema_version = 1\n[construct]\nbuilder = "epk"\na = 4\nb = 2\n')
    assert s.name == "epk(4,2)"


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_every_builder_round_trips(name):
    s = build(name, DEFAULT_PARAMS[name])
    back = loads_system(dumps_system(s))
    assert fingerprint(back) == fingerprint(s)


def test_fingerprint_ignores_name():
    assert fingerprint(build("endomorphism", {"a": 2, "b": 1})) == fingerprint(build("o21"))
    assert fingerprint(build("epk", {"a": 2, "b": 1})) != fingerprint(build("epk", {"a": 2, "b": 3}))


def test_unknown_builder_and_param():
    with pytest.raises(SpecError, match="unknown builder"):
        build("nope")
    with pytest.raises(SpecError, match="takes"):
        build("epk", {"a": 2, "c": 1})


def test_parse_params():
    assert parse_params(["a=2", "xi=[1, 0]", "name=abc"]) == {"a": 2, "xi": [1, 0], "name": "abc"}
    with pytest.raises(SpecError):
        parse_params(["a"])


def test_malformed_toml():
    with pytest.raises(SpecError, match="TOML"):
        loads_system("schema_version = [")


def test_wrong_schema_version():
    with pytest.raises(SpecError):
        loads_system(EPK21.replace("schema_version = 1", "schema_version = 9"))


def test_missing_file(tmp_path):
    with pytest.raises(SpecError, match="cannot read"):
        load_system(str(tmp_path / "missing.toml"))


def test_bad_edge_reference():
    with pytest.raises(SpecError):
        loads_system(EPK21.replace('"1" = "0"}', '"1" = "7"}'))


def test_finite_cocycle_that_does_not_extend():
    text = dumps_system(build("strings", {"order": 3})).replace('2 = "1" }', '2 = "0" }')
    with pytest.raises(SpecError) as info:
        loads_system(text)
    assert info.value.cocycle


def test_tree_lift_loads_but_is_invalid():
    s = build("tree", {"a": 2, "b": 1, "length": 2})
    assert not validate_cocycle(s.action, s.cocycle).valid
