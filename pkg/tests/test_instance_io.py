import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from allowance_auctions import instance_io
from allowance_auctions.generators import random_instance
from allowance_auctions.model import INF, AuctionInstance, ValidationError
from allowance_auctions.rng import trial_rng


def test_parse_hand_written_file():
    text = '{"version": 1, "bidders": [{"value": 1, "allowance": "inf"}, {"value": 2, "bid": 0}],' \
           ' "ctrs": [1]}'
    inst = instance_io.loads(text)
    assert inst.allowances.tolist() == [INF, 0.0]
    assert inst.bids.tolist() == [1.0, 0.0]


def test_inf_written_as_string():
    inst = AuctionInstance.create([1.0], [1.0], [INF])
    data = json.loads(instance_io.dumps(inst))
    assert data["bidders"][0]["allowance"] == "inf"
    assert data["version"] == 1


@given(st.integers(0, 100_000))
def test_round_trip_bit_for_bit(seed):
    inst = random_instance(trial_rng(0, seed))
    text = instance_io.dumps(inst)
    back = instance_io.loads(text)
    assert back == inst
    for name in ("values", "allowances", "bids", "ctrs"):
        assert getattr(back, name).tobytes() == getattr(inst, name).tobytes()
    assert instance_io.dumps(back) == text


def test_file_round_trip(tmp_path):
    inst = AuctionInstance.create([0.1, 1 / 3], [0.7], [0.2, INF], metadata={"x": np.float64(2.5)})
    path = tmp_path / "i.json"
    instance_io.dump(inst, path)
    back = instance_io.load(path)
    assert back == inst and back.metadata == {"x": 2.5}


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"version": 2, "bidders": [], "ctrs": []}',
    '{"bidders": [{"value": "x"}], "ctrs": [1]}',
    '{"bidders": [{"bid": 1}], "ctrs": [1]}',
    '{"bidders": [{"value": 1}], "ctrs": [0.5, 0.9]}',
    '{"bidders": [{"value": 1}]}',
])
def test_invalid_files(text):
    with pytest.raises(ValidationError):
        instance_io.loads(text)
