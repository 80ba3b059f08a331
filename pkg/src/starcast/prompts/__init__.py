"""Prompt assembly: output-language registry, template text, and renderers."""

from .language import (
    DEFAULT_LANGUAGE,
    ENGLISH,
    KOREAN,
    OutputLanguage,
    available_tags,
    output_language,
    register_language,
)
from .render import (
    CounterpartView,
    DiscoveryRequest,
    NetworkEntry,
    NetworkView,
    PromptBundle,
    build_counterpart_view,
    build_network_view,
    format_attributes,
    format_knowledge,
    format_network,
    placeholder_residue,
    render_comment_prompt,
    render_discovery_prompt,
    render_journal_prompt,
)

__all__ = [
    "DEFAULT_LANGUAGE",
    "ENGLISH",
    "KOREAN",
    "OutputLanguage",
    "available_tags",
    "output_language",
    "register_language",
    "CounterpartView",
    "DiscoveryRequest",
    "NetworkEntry",
    "NetworkView",
    "PromptBundle",
    "build_counterpart_view",
    "build_network_view",
    "format_attributes",
    "format_knowledge",
    "format_network",
    "placeholder_residue",
    "render_comment_prompt",
    "render_discovery_prompt",
    "render_journal_prompt",
]
