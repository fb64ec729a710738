import pytest

import shaderevo


def test_catalog_lists_nodes():
    kinds = {n["kind"] for n in shaderevo.catalog()}
    assert {"Add", "Voronoi", "Fresnel"} <= kinds


def test_compile_is_deterministic_and_valid():
    g = shaderevo.random_genome(7)
    assert shaderevo.validate(g) == []
    a = shaderevo.compile(g)
    assert a == shaderevo.compile(g)
    assert a["fragment"].startswith("#version 300 es")
    assert a["uniforms"][0]["name"] == "u_time"


def test_interpret_default_context():
    out = shaderevo.interpret(shaderevo.minimal_genome(True), {"uv": [0.25, 0.5]})
    assert out["non_finite"] is False
    assert len(out["fragment"]["BaseColor"]) == 3


def test_operators_keep_genomes_valid():
    a = shaderevo.random_genome(1)
    b = shaderevo.random_genome(2)
    for seed in range(20):
        m = shaderevo.mutate(a, seed, "high")
        assert shaderevo.validate(m) == []
        ca, cb, _ = shaderevo.crossover(m, b, seed)
        assert shaderevo.validate(ca) == [] and shaderevo.validate(cb) == []


def test_errors_carry_codes():
    with pytest.raises(shaderevo.Error) as info:
        shaderevo.mutate(shaderevo.minimal_genome(), 1, "extreme")
    assert info.value.code == "InvalidConfig"


def test_session_replay_matches():
    s = shaderevo.Session()
    s.start(11)
    ids = [i["id"] for i in s.population()["individuals"]]
    s.score(ids[0], 1)
    s.breed()
    s.breed((ids[1], ids[2]))
    assert len(s.population()["individuals"]) == 8
    assert shaderevo.Session.replay(s.log()).population() == s.population()
