from enum import StrEnum
from typing import ClassVar

import numpy as np
from pydantic import BaseModel

from audlet.errors import FormatError


class AudioFormatType(StrEnum):
    INT_16 = "int16"
    FLOAT_32 = "float32"


class AudioFormat(BaseModel):
    _FORMAT_TO_SUBTYPE: ClassVar[dict[AudioFormatType, str]] = {
        AudioFormatType.INT_16: "PCM_16",
        AudioFormatType.FLOAT_32: "FLOAT",
    }

    _FORMAT_TO_NUMPY: ClassVar[dict[AudioFormatType, type]] = {
        AudioFormatType.INT_16: np.int16,
        AudioFormatType.FLOAT_32: np.float32,
    }

    format_type: AudioFormatType

    @classmethod
    def from_subtype(cls, subtype: str) -> "AudioFormat":
        for format_type, known_subtype in cls._FORMAT_TO_SUBTYPE.items():
            if known_subtype == subtype:
                return cls(format_type=format_type)
        msg = f"Unsupported WAV encoding: {subtype} (expected PCM_16 or FLOAT)"
        raise FormatError(msg)

    @property
    def subtype(self) -> str:
        return self._FORMAT_TO_SUBTYPE[self.format_type]

    @property
    def numpy_format(self) -> type:
        return self._FORMAT_TO_NUMPY[self.format_type]

    def __str__(self) -> str:
        return f"AF({self.format_type.value})"

    def __repr__(self) -> str:
        return str(self)


DEFAULT_AUDIO_FORMAT = AudioFormat(format_type=AudioFormatType.FLOAT_32)
