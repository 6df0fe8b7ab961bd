import json

import numpy as np
import pytest

from sepdec.exceptions import BadTrace, InvalidDocument
from sepdec.models.schemas import InstanceDocument
from sepdec.services.file_service import FileService


@pytest.fixture
def files() -> FileService:
    return FileService()


@pytest.mark.asyncio
async def test_instance_survives_disk(files, generator, tmp_path):
    params = generator.gen_ppt(4, 12, label="disk")
    target = tmp_path / "nested" / "instance.json"
    await files.write_document(InstanceDocument.from_params(params), target)

    restored = await files.read_instance(target)
    np.testing.assert_array_equal(restored.x, params.x)
    assert restored.label == "disk"
    assert [path.name for path in target.parent.iterdir()] == ["instance.json"]


@pytest.mark.asyncio
async def test_missing_label_is_omitted(files, generator, tmp_path):
    target = tmp_path / "instance.json"
    await files.write_document(InstanceDocument.from_params(generator.gen_uniform(2)), target)
    assert "label" not in json.loads(target.read_text())


@pytest.mark.asyncio
async def test_write_to_stdout(files, generator, capsys):
    await files.write_document(InstanceDocument.from_params(generator.gen_uniform(2)), "-")
    assert json.loads(capsys.readouterr().out)["n"] == 2


@pytest.mark.asyncio
async def test_non_finite_entry_is_rejected(files, tmp_path):
    target = tmp_path / "nan.json"
    target.write_text(
        '{"n": 2, "x": [[{"re": NaN, "im": 0}, {"re": 0.5, "im": 0}],'
        ' [{"re": 0.5, "im": 0}, {"re": 0.5, "im": 0}]]}'
    )
    with pytest.raises(InvalidDocument):
        await files.read_instance(target)


@pytest.mark.asyncio
async def test_missing_file(files, tmp_path):
    with pytest.raises(InvalidDocument) as info:
        await files.read_instance(tmp_path / "absent.json")
    assert info.value.exit_code == 2


@pytest.mark.asyncio
async def test_wrong_trace_is_rejected(files, tmp_path):
    target = tmp_path / "trace.json"
    entry = {"re": 0.6, "im": 0.0}
    target.write_text(json.dumps({"n": 2, "x": [[entry, entry], [entry, entry]]}))
    with pytest.raises(BadTrace):
        await files.read_instance(target)


@pytest.mark.asyncio
async def test_decomposition_length_mismatch(files, tmp_path):
    target = tmp_path / "decomposition.json"
    entry = {"re": 1.0, "im": 0.0}
    target.write_text(
        json.dumps(
            {
                "n": 2,
                "terms": [{"p": 1.0, "a": [entry], "b": [entry, entry]}],
                "residuals": {"reconstruction": 0.0, "max_rank1": 0.0},
                "free_constant": 0.0,
            }
        )
    )
    with pytest.raises(InvalidDocument):
        await files.read_decomposition(target)
