"""Bank descriptor files: canonical design parameters plus their fingerprint."""

import logging
from pathlib import Path

from pydantic import BaseModel, ValidationError

from audlet.errors import FormatError
from audlet.filterbank.bank import BankDescriptor, FilterBank
from audlet.filterbank.design import build_bank

logger = logging.getLogger(__name__)


class BankDescriptorFile(BaseModel):
    descriptor: BankDescriptor
    fingerprint: str


def write_bank_descriptor(path: Path, fb: FilterBank) -> None:
    content = BankDescriptorFile(descriptor=fb.descriptor, fingerprint=fb.fingerprint)
    path.write_text(content.model_dump_json(indent=2), encoding="utf-8")
    logger.info("Wrote descriptor of %s to %s", fb, path)


def read_bank_descriptor(path: Path) -> BankDescriptor:
    try:
        text = path.read_text(encoding="utf-8")
        content = BankDescriptorFile.model_validate_json(text)
    except ValidationError as e:
        msg = f"{path}: invalid bank descriptor: {e}"
        raise FormatError(msg) from e
    if content.descriptor.fingerprint != content.fingerprint:
        msg = f"{path}: fingerprint does not match the stored design"
        raise FormatError(msg)
    return content.descriptor


def load_bank(path: Path) -> FilterBank:
    return build_bank(read_bank_descriptor(path))
