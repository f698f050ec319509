from typing import Final, Tuple

from .serializer import LANGUAGE_HEADER, Serializer, SupportedTypes
from .deserializer import Deserializer, LanguageFile
from .reader import Reader

__all__: Final[Tuple[str, ...]] = (
    "LANGUAGE_HEADER",
    "Serializer",
    "SupportedTypes",
    "Deserializer",
    "LanguageFile",
    "Reader",
)
