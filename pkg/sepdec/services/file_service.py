import os
import sys
from pathlib import Path
from typing import TypeVar

import aiofiles
import aiofiles.os
from pydantic import BaseModel, ValidationError

from sepdec.exceptions import InvalidDocument
from sepdec.models.core_types import ClassParams, Tolerances
from sepdec.models.schemas import DecompositionDocument, InstanceDocument

Document = TypeVar("Document", bound=BaseModel)

STDIO = "-"


class FileService:
    async def read_text(self, path: Path) -> str:
        try:
            async with aiofiles.open(path, "r", encoding="utf-8") as f:
                return await f.read()
        except OSError as exc:
            raise InvalidDocument(f"cannot read {path}: {exc.strerror}", path=str(path)) from exc
        except UnicodeDecodeError as exc:
            raise InvalidDocument(
                f"{path} is not UTF-8 text: {exc.reason}", path=str(path)
            ) from exc

    async def read_document(self, path: Path, model: type[Document]) -> Document:
        content = await self.read_text(path)
        try:
            return model.model_validate_json(content)
        except ValidationError as exc:
            raise InvalidDocument(
                f"{path} is not a valid {model.__name__}",
                path=str(path),
                errors=[error["msg"] for error in exc.errors()],
            ) from exc

    async def read_instance(self, path: Path, tolerances: Tolerances | None = None) -> ClassParams:
        document = await self.read_document(path, InstanceDocument)
        return document.to_params(tolerances)

    async def read_decomposition(self, path: Path) -> DecompositionDocument:
        return await self.read_document(path, DecompositionDocument)

    def render(self, document: BaseModel) -> str:
        exclude_none = isinstance(document, InstanceDocument)
        return document.model_dump_json(indent=2, exclude_none=exclude_none)

    async def write_document(self, document: BaseModel, path: Path | str | None = None) -> None:
        content = self.render(document) + "\n"
        if path is None or str(path) == STDIO:
            sys.stdout.write(content)
            sys.stdout.flush()
            return

        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        temporary = target.with_name(f".{target.name}.{os.getpid()}.tmp")
        try:
            async with aiofiles.open(temporary, "w", encoding="utf-8") as f:
                await f.write(content)
            await aiofiles.os.replace(temporary, target)
        except OSError as exc:
            if temporary.exists():
                await aiofiles.os.remove(temporary)
            raise InvalidDocument(
                f"cannot write {target}: {exc.strerror}", path=str(target)
            ) from exc


file_service = FileService()
