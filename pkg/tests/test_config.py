import json

import pytest

from mnsmooth.config import ExperimentConfig, derive_seed, parse_graphon
from mnsmooth.errors import InvalidParameter


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(5, 1) == derive_seed(5, 1)
    assert len({derive_seed(5, r) for r in range(100)}) == 100
    assert derive_seed(5, 1, 0) != derive_seed(5, 0, 1)


def test_parse_graphon_forms():
    assert parse_graphon("3").kind == "diagonal"
    assert parse_graphon("cosine").kind == "cosine"
    assert parse_graphon("constant:0.2").params["c"] == 0.2
    assert parse_graphon('{"kind": "blocks", "params": {"log_base": 10}}').params["log_base"] == 10
    assert parse_graphon(None) is None


def test_config_roundtrip_and_validation(tmp_path):
    cfg = ExperimentConfig(graphon=parse_graphon("2"), n=30, K=4, reps=2)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_json()))
    assert ExperimentConfig.load(path).to_json() == cfg.to_json()
    with pytest.raises(InvalidParameter):
        ExperimentConfig.from_json({"bogus": 1})
    with pytest.raises(InvalidParameter):
        cfg.replace(reps=0).validate()
    with pytest.raises(InvalidParameter):
        cfg.replace(method="usvt").validate()
