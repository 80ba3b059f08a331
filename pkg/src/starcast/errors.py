"""Domain error hierarchy.

Every error carries a stable machine-readable ``code`` that the HTTP layer
and the CLI surface verbatim, so clients can branch on it without parsing
messages.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain-level failures."""

    code = "DomainError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- cast graph -------------------------------------------------------------

class EmptyName(DomainError):
    code = "EmptyName"


class AttributeKeyEmpty(DomainError):
    code = "AttributeKeyEmpty"

    def __init__(self, index: int):
        super().__init__(f"attribute at index {index} has an empty key")
        self.index = index


class NotAPermutation(DomainError):
    code = "NotAPermutation"


class SelfFollow(DomainError):
    code = "SelfFollow"


class DuplicateEdge(DomainError):
    code = "DuplicateEdge"


class ForeignAttribute(DomainError):
    code = "ForeignAttribute"


class UnknownCharacter(DomainError):
    code = "UnknownCharacter"


class UnknownAttribute(DomainError):
    code = "UnknownAttribute"


class UnknownRelationship(DomainError):
    code = "UnknownRelationship"


class UnknownJournal(DomainError):
    code = "UnknownJournal"


class UnknownThread(DomainError):
    code = "UnknownThread"


class UnknownComment(DomainError):
    code = "UnknownComment"


class EmptyProfileField(DomainError):
    code = "EmptyProfileField"

    def __init__(self, field: str):
        super().__init__(f"mini profile field {field!r} is empty")
        self.field = field


class EmptyContent(DomainError):
    code = "EmptyContent"


class AlternationViolation(DomainError):
    """A comment was attempted by a character whose turn it is not."""

    code = "AlternationViolation"


class EmptyThreadForExtended(DomainError):
    code = "EmptyThreadForExtended"


class ProvenanceViolation(DomainError):
    """Attempted an illegal provenance transition (edited never reverts)."""

    code = "ProvenanceViolation"


# --- prompt rendering -------------------------------------------------------

class EmptyPhrase(DomainError):
    code = "EmptyPhrase"


class EmptyTheme(DomainError):
    code = "EmptyTheme"


class UnknownLanguage(DomainError):
    code = "UnknownLanguage"


# --- provider / parsing -----------------------------------------------------

class ProviderError(DomainError):
    code = "ProviderError"

    def __init__(self, message: str, status: int | None = None, body: str = ""):
        super().__init__(message)
        self.status = status
        self.body = body


class ProviderTimeout(DomainError):
    code = "Timeout"


class ProviderUnconfigured(DomainError):
    code = "ProviderUnconfigured"


class MiniProfileError(DomainError):
    """Base for structured-output failures; keeps the raw text around."""

    code = "MiniProfileError"

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class ParseFailed(MiniProfileError):
    code = "ParseFailed"


class WrongCount(MiniProfileError):
    code = "WrongCount"

    def __init__(self, count: int, raw: str = ""):
        super().__init__(f"expected 3 characters, got {count}", raw)
        self.count = count


class MissingField(MiniProfileError):
    code = "MissingField"

    def __init__(self, field: str, index: int, raw: str = ""):
        super().__init__(f"character {index} is missing a usable {field!r}", raw)
        self.field = field
        self.index = index


class AllFailed(DomainError):
    code = "AllFailed"


class InvalidSelection(DomainError):
    """Journal author selection was empty or contained duplicates."""

    code = "InvalidSelection"


class ModeMismatch(DomainError):
    """Manual mode without content, or generate mode with content supplied."""

    code = "ModeMismatch"


class EmptyPatch(DomainError):
    code = "EmptyPatch"


# --- store / archive --------------------------------------------------------

class UnknownProject(DomainError):
    code = "UnknownProject"


class ProjectExists(DomainError):
    code = "ProjectExists"


class StorageFailure(DomainError):
    code = "StorageFailure"


class DataDirUnwritable(DomainError):
    code = "DataDirUnwritable"


class SchemaMismatch(DomainError):
    code = "SchemaMismatch"


class CorruptArchive(DomainError):
    code = "CorruptArchive"


class UnknownImage(DomainError):
    code = "UnknownImage"


# --- cli --------------------------------------------------------------------

class ManifestInvalid(DomainError):
    code = "ManifestInvalid"
