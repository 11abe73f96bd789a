import json

import pytest

from k3lab.isometry import mk_phi_b, mk_xi
from k3lab.mirror import mirror_triple
from k3lab.period import gamma_embed, phi34
from k3lab.sampling import random_three_space, random_triple, suite_rng
from k3lab.serialize import SchemaError, dumps, load_file, loads, parse_rat, rat


def test_rat():
    assert rat(3) == "3/1"
    assert parse_rat("-6/4") == parse_rat("-3/2")
    assert parse_rat(5) == 5
    for bad in (1.5, "0.5", "1e3", True, "x"):
        with pytest.raises(SchemaError):
            parse_rat(bad)


def _objects(ctx):
    rng = suite_rng(5, "ser")
    t = random_triple(ctx, rng)
    F = random_three_space(ctx, rng)
    return [
        ctx.gamma,
        t.omega,
        mk_phi_b(ctx, t.omega),
        mk_xi(ctx),
        t.line.plane(),
        F,
        phi34(ctx, F, 3, t.B),
        t.line,
        t,
        gamma_embed(ctx, t),
        mirror_triple(ctx, t),
    ]


def _same(a, b):
    if hasattr(a, "basis") and hasattr(b, "basis") and not hasattr(a, "gram"):
        return a.basis == b.basis
    if hasattr(a, "matrix"):
        return a.matrix == b.matrix and a.lattice == b.lattice
    if hasattr(a, "sigma"):
        return a.sigma.re == b.sigma.re and a.sigma.im == b.sigma.im and a.omega == b.omega and a.B == b.B
    if hasattr(a, "line"):
        return (a.line.re, a.line.im, a.omega, a.B) == (b.line.re, b.line.im, b.omega, b.B)
    if hasattr(a, "re"):
        return (a.re, a.im) == (b.re, b.im)
    if hasattr(a, "H1"):
        return a.H1.basis == b.H1.basis and a.H2.basis == b.H2.basis
    return a == b


def test_roundtrip(ctx):
    for obj in _objects(ctx):
        text = dumps(obj)
        back = loads(text)
        assert _same(obj, back), type(obj).__name__
        assert dumps(back) == text


def test_context_roundtrip(ctx):
    back = loads(dumps(ctx))
    assert back.gamma == ctx.gamma and back.v == ctx.v and back.vstar == ctx.vstar


def test_stable_key_order(ctx):
    text = dumps(ctx.v)
    assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def test_errors_carry_path_and_line(tmp_path):
    with pytest.raises(SchemaError) as ei:
        loads('{"type":"Vector","lattice_label":"U","coords":["1/1", 0.5]}')
    assert ei.value.path == "$.coords[1]"
    with pytest.raises(SchemaError) as ei:
        loads('{\n"type": "Vector",\n  "coords": [}')
    assert ei.value.line == 3
    with pytest.raises(SchemaError) as ei:
        loads('{"type":"Vector","coords":[]}')
    assert "lattice_label" in ei.value.message
    p = tmp_path / "x.json"
    p.write_text('{"type":"Vector","lattice_label":"Nope","coords":[]}')
    with pytest.raises(SchemaError) as ei:
        load_file(str(p))
    assert str(p) in ei.value.path


def test_expect_fills_missing_tag():
    v = loads('{"lattice_label":"U","coords":["1/1","2/1"]}', "Vector")
    assert v.sq() == 4
    with pytest.raises(SchemaError):
        loads('{"type":"Isometry","lattice_label":"U","matrix":[]}', "Vector")


def test_context_validation():
    bad = {"type": "MirrorContext", "gamma_label": "U",
           "v": {"type": "Vector", "lattice_label": "U", "coords": ["1/1", "0/1"]},
           "vstar": {"type": "Vector", "lattice_label": "U", "coords": ["1/1", "0/1"]}}
    with pytest.raises(SchemaError):
        loads(json.dumps(bad))
