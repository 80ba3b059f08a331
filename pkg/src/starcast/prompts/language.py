"""Output-language knob for the generation prompts.

The templates pin three language-dependent strings: the language's display
name, the required opening line of a journal entry, and the phrase naming
what the text should NOT read like. Korean is the default and its strings
are the canonical ones the golden fixtures were pinned against.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import errors


@dataclass(frozen=True)
class OutputLanguage:
    tag: str
    name: str
    diary_opener: str
    translation_foil: str


KOREAN = OutputLanguage(
    tag="ko",
    name="Korean",
    diary_opener="친애하는 일기장에게",
    translation_foil="an English translation",
)

ENGLISH = OutputLanguage(
    tag="en",
    name="English",
    diary_opener="Dear Diary",
    translation_foil="a translation",
)

DEFAULT_LANGUAGE = KOREAN

_REGISTRY: dict[str, OutputLanguage] = {lang.tag: lang for lang in (KOREAN, ENGLISH)}


def output_language(tag: str) -> OutputLanguage:
    try:
        return _REGISTRY[tag]
    except KeyError:
        raise errors.UnknownLanguage(
            f"no output language {tag!r}; available: {', '.join(available_tags())}"
        ) from None


def register_language(lang: OutputLanguage) -> OutputLanguage:
    """Add or replace a language. All three strings must be non-blank; they
    land verbatim inside rendered prompts."""
    for field_name in ("tag", "name", "diary_opener", "translation_foil"):
        if not getattr(lang, field_name).strip():
            raise errors.UnknownLanguage(f"language {field_name} must not be blank")
    _REGISTRY[lang.tag] = lang
    return lang


def available_tags() -> list[str]:
    return sorted(_REGISTRY)
