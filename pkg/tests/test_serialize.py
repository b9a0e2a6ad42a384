"""Channel file round trips and parse failure modes."""

import json

import numpy as np
import pytest

from ebx import (
    ParseError,
    SeededRng,
    channel_from_json,
    channel_to_json,
    kraus_channel,
    load_channel,
    random_unital_eb,
    save_channel,
)
from ebx.gallery import (
    diagonal_pinching_channel,
    tetrahedral_channel,
    two_block_pinching_channel,
)
from ebx.linalg import max_abs

from support import channel_distance


@pytest.mark.parametrize(
    "build",
    [diagonal_pinching_channel, two_block_pinching_channel, tetrahedral_channel],
)
def test_gallery_round_trip_bit_for_bit(build):
    # rational-entry channels survive JSON exactly
    ch = build()
    back = channel_from_json(channel_to_json(ch))
    assert type(back.representation) is type(ch.representation)
    assert (back.d1, back.d2, back.label) == (ch.d1, ch.d2, ch.label)
    assert channel_distance(back, ch) == 0.0


def test_generated_round_trip_close():
    ch = random_unital_eb(SeededRng(40), 2, 3, 3)
    back = channel_from_json(channel_to_json(ch))
    assert channel_distance(back, ch) <= 1e-15


def test_round_trip_through_file(tmp_path):
    ch = random_unital_eb(SeededRng(41), 3, 2, 4)
    path = tmp_path / "channel.json"
    save_channel(ch, path)
    back = load_channel(path)
    assert channel_distance(back, ch) <= 1e-15
    # file is plain JSON with the documented top-level shape
    doc = json.loads(path.read_text())
    assert set(doc) == {"d1", "d2", "label", "representation"}
    assert doc["representation"]["type"] == "holevo"


def test_complex_entries_encode_as_pairs():
    op = np.array([[1.0, 1j], [0.0, 2.0 - 3.0j]])
    doc = channel_to_json(kraus_channel([op]))
    rows = doc["representation"]["operators"][0]
    assert rows[0][0] == 1.0  # real entries stay plain numbers
    assert rows[0][1] == [0.0, 1.0]
    assert rows[1][1] == [2.0, -3.0]
    back = channel_from_json(doc)
    assert max_abs(back.representation.operators[0] - op) == 0.0


def test_label_is_optional():
    ch = kraus_channel([np.eye(2)])
    doc = channel_to_json(ch)
    assert "label" not in doc
    assert channel_from_json(doc).label is None


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("d1"),
        lambda d: d.pop("representation"),
        lambda d: d.update(d1=0),
        lambda d: d.update(d1=2.5),
        lambda d: d.update(d1=True),
        lambda d: d.update(label=7),
        lambda d: d["representation"].pop("type"),
        lambda d: d["representation"].update(type="bloch"),
        lambda d: d["representation"].update(operators=[]),
        lambda d: d["representation"]["operators"][0].pop(),
        lambda d: d["representation"]["operators"][0][0].__setitem__(0, "x"),
        lambda d: d["representation"]["operators"][0][0].__setitem__(0, [1, 2, 3]),
        lambda d: d["representation"]["operators"][0][0].__setitem__(0, True),
    ],
)
def test_malformed_documents_raise_parse_error(mutate):
    doc = channel_to_json(diagonal_pinching_channel())
    mutate(doc)
    with pytest.raises(ParseError):
        channel_from_json(doc)


def test_non_object_document_raises():
    with pytest.raises(ParseError):
        channel_from_json([1, 2, 3])


def test_holevo_term_validation():
    doc = channel_to_json(tetrahedral_channel())
    doc["representation"]["terms"][0].pop("R")
    with pytest.raises(ParseError):
        channel_from_json(doc)


def test_wrong_matrix_shape_raises():
    doc = channel_to_json(diagonal_pinching_channel())
    doc["representation"]["operators"][0] = [[1.0, 0.0]]  # 1x2, expected 2x2
    with pytest.raises(ParseError):
        channel_from_json(doc)


def test_empty_file_raises_parse_error(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    with pytest.raises(ParseError):
        load_channel(path)


def test_truncated_json_raises_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"d1": 2, "d2"')
    with pytest.raises(ParseError):
        load_channel(path)
