"""
Tests for the file and environment helpers.
"""

import pytest

from flm_maxtest.utils import default_workers, read_structured, yaml_read, yaml_write


def test_yaml_write_indents_sequences(tmp_path):
    """Sequences are indented under their key and keys keep their order."""
    # Arrange
    path = tmp_path / "report.yaml"
    data = {"studies": [{"family": "scalar_on_function", "n": 50}], "alpha": 0.05}

    # Act
    yaml_write(to=path, data=data)

    # Assert
    assert path.read_text() == (
        "studies:\n"
        "  - family: scalar_on_function\n"
        "    n: 50\n"
        "alpha: 0.05\n"
    )
    assert yaml_read(path) == data


def test_read_structured_json_and_yaml(tmp_path):
    json_path = tmp_path / "config.json"
    json_path.write_text('{"n": 50}')
    yaml_path = tmp_path / "config.yml"
    yaml_path.write_text("n: 50\n")
    assert read_structured(json_path) == read_structured(yaml_path) == {"n": 50}


def test_read_structured_empty_document(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("")
    assert read_structured(path) == {}


@pytest.mark.parametrize("value, expected", [(None, 1), ("4", 4), ("0", 1), ("many", 1)])
def test_default_workers(monkeypatch, value, expected):
    if value is None:
        monkeypatch.delenv("FLM_MAXTEST_WORKERS", raising=False)
    else:
        monkeypatch.setenv("FLM_MAXTEST_WORKERS", value)
    assert default_workers() == expected
