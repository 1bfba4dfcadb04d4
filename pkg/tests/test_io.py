import json
import math

import numpy as np
import pytest

from mqsym.errors import DimensionLimitError, ParseError
from mqsym.generators import ghz, random_state
from mqsym.io import (
    density_from_document,
    density_to_document,
    dump_density,
    dump_state,
    load_density,
    load_state,
    state_digest,
    state_from_document,
    state_to_document,
)
from mqsym.states import DensityMatrix, StateVector, partial_trace


def test_state_document_round_trip():
    psi = random_state(3, 2, 8)
    doc = state_to_document(psi)
    assert doc["format"] == "mqstate-v1"
    back = state_from_document(doc)
    np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)


def test_state_file_round_trip(tmp_path):
    psi = ghz(3, 2)
    path = tmp_path / "ghz.json"
    dump_state(psi, path)
    np.testing.assert_array_equal(load_state(path).amplitudes, psi.amplitudes)
    raw = json.loads(path.read_text())
    assert len(raw["amplitudes"]) == 2  # zeros are omitted


def test_omitted_indices_are_zero():
    doc = {
        "format": "mqstate-v1",
        "local_dim": 2,
        "num_sites": 2,
        "amplitudes": [{"index": [1, 1], "re": 1.0}],
    }
    psi = state_from_document(doc)
    np.testing.assert_array_equal(psi.amplitudes, [0, 0, 0, 1])


def test_state_document_parse_errors():
    good = {"format": "mqstate-v1", "local_dim": 2, "num_sites": 2, "amplitudes": []}
    for mutation in [
        {"format": "mqstate-v2"},
        {"local_dim": 1},
        {"local_dim": "two"},
        {"num_sites": 0},
        {"amplitudes": [{"index": [0], "re": 1.0}]},
        {"amplitudes": [{"index": [0, 2], "re": 1.0}]},
        {"amplitudes": [{"index": [0, 0], "re": "x"}]},
        {"amplitudes": [{"index": [0, 0]}, {"index": [0, 0]}]},
        {"amplitudes": "none"},
    ]:
        doc = {**good, **mutation}
        with pytest.raises(ParseError):
            state_from_document(doc)


def test_dimension_overflow_rejected():
    doc = {"format": "mqstate-v1", "local_dim": 2, "num_sites": 64, "amplitudes": []}
    with pytest.raises(DimensionLimitError):
        state_from_document(doc)


def test_unreadable_file_raises_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_state(path)
    with pytest.raises(ParseError):
        load_state(tmp_path / "missing.json")


def test_density_document_round_trip(tmp_path):
    rho = partial_trace(ghz(3, 2), {1, 3})
    doc = density_to_document(rho)
    assert doc["format"] == "mqdm-v1"
    assert doc["sites"] == [1, 3]
    back = density_from_document(doc)
    assert back.sites == (1, 3)
    np.testing.assert_allclose(back.entries, rho.entries, atol=1e-15)
    path = tmp_path / "rho.json"
    dump_density(rho, path)
    np.testing.assert_allclose(load_density(path).entries, rho.entries, atol=1e-15)


def test_density_document_parse_errors():
    good = {"format": "mqdm-v1", "local_dim": 2, "sites": [1, 2], "entries": []}
    for mutation in [
        {"format": "mqstate-v1"},
        {"sites": []},
        {"sites": [1, 1]},
        {"sites": [0, 1]},
        {"entries": [{"row": [0], "col": [0, 0], "re": 1.0}]},
        {"entries": [{"row": [0, 0], "col": [0, 0], "re": 1.0}] * 2},
    ]:
        doc = {**good, **mutation}
        with pytest.raises(ParseError):
            density_from_document(doc)


def test_state_digest_is_stable_and_content_sensitive():
    a = ghz(3, 2)
    b = ghz(3, 2)
    c = random_state(3, 2, 1)
    assert state_digest(a) == state_digest(b)
    assert state_digest(a) != state_digest(c)
    assert len(state_digest(a)) == 64
