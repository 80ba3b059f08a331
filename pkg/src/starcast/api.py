"""HTTP surface: REST endpoints over the store and the generation pipeline.

The route table below is the canonical contract (mirrored in docs/api.md);
tests enumerate it against the domain operation list and the live app. Error
responses share one shape everywhere:

    {"error": {"code": "<DomainError code>", "message": "...", "debug": {...}}}

with ``debug`` present only when there is raw provider output worth
inspecting. Provider api keys and rendered prompt text never appear in
responses.
"""

from __future__ import annotations

from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors, service
from .config import ServiceConfig
from .model import (
    CastGraph,
    MiniProfile,
    PROVENANCE_MANUAL,
    _seq,
)
from .orchestrator import Orchestrator
from .prompts.language import output_language
from .provider import Provider
from .store import (
    DataDir,
    ProjectStore,
    character_doc,
    comment_doc,
    export_archive,
    import_archive,
    journal_doc,
    record_doc,
    relationship_doc,
    sniff_media_type,
    thread_doc,
)

# operation -> (method, path); create_thread and append_comment share the
# comment endpoint (a first comment creates its thread).
ROUTE_TABLE: dict[str, tuple[str, str]] = {
    "health": ("GET", "/health"),
    "list_projects": ("GET", "/api/projects"),
    "create_project": ("POST", "/api/projects"),
    "get_project": ("GET", "/api/projects/{project_id}"),
    "export_project": ("GET", "/api/projects/{project_id}/export"),
    "import_project": ("POST", "/api/projects/import"),
    "list_characters": ("GET", "/api/projects/{project_id}/characters"),
    "create_character": ("POST", "/api/projects/{project_id}/characters"),
    "get_character": ("GET", "/api/projects/{project_id}/characters/{character_id}"),
    "update_character": ("PATCH", "/api/projects/{project_id}/characters/{character_id}"),
    "delete_character": ("DELETE", "/api/projects/{project_id}/characters/{character_id}"),
    "add_attribute": ("POST", "/api/projects/{project_id}/characters/{character_id}/attributes"),
    "reorder_attributes": ("PUT", "/api/projects/{project_id}/characters/{character_id}/attributes/order"),
    "edit_attribute": ("PATCH", "/api/projects/{project_id}/characters/{character_id}/attributes/{attribute_id}"),
    "delete_attribute": ("DELETE", "/api/projects/{project_id}/characters/{character_id}/attributes/{attribute_id}"),
    "list_relationships": ("GET", "/api/projects/{project_id}/relationships"),
    "follow": ("POST", "/api/projects/{project_id}/relationships"),
    "set_description": ("PATCH", "/api/projects/{project_id}/relationships/{relationship_id}"),
    "set_knowledge": ("PUT", "/api/projects/{project_id}/relationships/{relationship_id}/knowledge"),
    "unfollow": ("DELETE", "/api/projects/{project_id}/relationships/{relationship_id}"),
    "discover": ("POST", "/api/projects/{project_id}/characters/{character_id}/discover"),
    "adopt_mini_profile": ("POST", "/api/projects/{project_id}/characters/{character_id}/adopt"),
    "journals_by_author": ("GET", "/api/projects/{project_id}/characters/{character_id}/journals"),
    "threads_by_participant": ("GET", "/api/projects/{project_id}/characters/{character_id}/threads"),
    "list_journals": ("GET", "/api/projects/{project_id}/journals"),
    "add_journal": ("POST", "/api/projects/{project_id}/journals"),
    "generate_journals": ("POST", "/api/projects/{project_id}/journals/generate"),
    "get_journal": ("GET", "/api/projects/{project_id}/journals/{journal_id}"),
    "edit_journal": ("PATCH", "/api/projects/{project_id}/journals/{journal_id}"),
    "delete_journal": ("DELETE", "/api/projects/{project_id}/journals/{journal_id}"),
    "threads_by_journal": ("GET", "/api/projects/{project_id}/journals/{journal_id}/threads"),
    "create_comment": ("POST", "/api/projects/{project_id}/journals/{journal_id}/comments"),
    "get_thread": ("GET", "/api/projects/{project_id}/threads/{thread_id}"),
    "edit_comment": ("PATCH", "/api/projects/{project_id}/comments/{comment_id}"),
    "delete_comment": ("DELETE", "/api/projects/{project_id}/comments/{comment_id}"),
    "upload_image": ("POST", "/api/images"),
    "get_image": ("GET", "/api/images/{ref}"),
}

# which cast-graph mutation each endpoint exercises (contract-test source)
CAST_OPERATION_ENDPOINTS: dict[str, str] = {
    "create_character": "create_character",
    "update_character": "update_character",
    "delete_character": "delete_character",
    "add_attribute": "add_attribute",
    "edit_attribute": "edit_attribute",
    "delete_attribute": "delete_attribute",
    "reorder_attributes": "reorder_attributes",
    "follow": "follow",
    "set_description": "set_description",
    "set_knowledge": "set_knowledge",
    "unfollow": "unfollow",
    "adopt_mini_profile": "adopt_mini_profile",
    "add_journal": "add_journal",
    "edit_journal": "edit_journal",
    "delete_journal": "delete_journal",
    "create_thread": "create_comment",
    "append_comment": "create_comment",
    "edit_comment": "edit_comment",
    "delete_comment": "delete_comment",
    "journals_by_author": "journals_by_author",
    "threads_by_participant": "threads_by_participant",
    "threads_by_journal": "threads_by_journal",
}

_STATUS_BY_CODE: dict[str, int] = {}
for _status, _codes in {
    404: (
        "UnknownCharacter", "UnknownAttribute", "UnknownRelationship",
        "UnknownJournal", "UnknownThread", "UnknownComment", "UnknownProject",
        "UnknownImage",
    ),
    409: ("AlternationViolation", "DuplicateEdge", "ProjectExists", "ProvenanceViolation"),
    422: (
        "EmptyName", "AttributeKeyEmpty", "NotAPermutation", "SelfFollow",
        "ForeignAttribute", "EmptyProfileField", "EmptyContent", "EmptyPhrase",
        "EmptyTheme", "UnknownLanguage", "InvalidSelection", "EmptyThreadForExtended",
        "ManifestInvalid", "SchemaMismatch", "CorruptArchive", "ModeMismatch",
        "EmptyPatch",
    ),
    502: (
        "ProviderError", "Timeout", "MiniProfileError", "ParseFailed",
        "WrongCount", "MissingField", "AllFailed",
    ),
    503: ("ProviderUnconfigured",),
    500: ("StorageFailure", "DataDirUnwritable", "DomainError"),
}.items():
    for _code in _codes:
        _STATUS_BY_CODE[_code] = _status

_RAW_EXCERPT_LIMIT = 800


def error_payload(exc: errors.DomainError) -> dict:
    body: dict = {"code": exc.code, "message": exc.message}
    raw = ""
    if isinstance(exc, errors.MiniProfileError):
        raw = exc.raw
    elif isinstance(exc, errors.ProviderError):
        raw = exc.body
    if raw:
        body["debug"] = {"raw_excerpt": raw[:_RAW_EXCERPT_LIMIT]}
    return {"error": body}


def error_status(exc: errors.DomainError) -> int:
    return _STATUS_BY_CODE.get(exc.code, 500)


# --- request bodies -----------------------------------------------------------

class ProjectBody(BaseModel):
    name: str


class AttributeBody(BaseModel):
    key: str
    value: str = ""


class CharacterBody(BaseModel):
    name: str
    attributes: list[AttributeBody] = []
    portrait: str | None = None


class CharacterPatch(BaseModel):
    name: str | None = None
    portrait: str | None = None
    clear_portrait: bool = False


class AttributePatch(BaseModel):
    key: str | None = None
    value: str | None = None


class OrderBody(BaseModel):
    order: list[str]


class FollowBody(BaseModel):
    owner: str
    target: str
    description: str = ""


class DescriptionPatch(BaseModel):
    description: str


class KnowledgeBody(BaseModel):
    grants: list[str]


class DiscoverBody(BaseModel):
    phrase: str


class ProfileBody(BaseModel):
    name: str
    introduction: str
    backstory: str
    my_relationship: str
    your_relationship: str

    def to_profile(self) -> MiniProfile:
        return MiniProfile(
            name=self.name,
            introduction=self.introduction,
            backstory=self.backstory,
            my_relationship=self.my_relationship,
            your_relationship=self.your_relationship,
        ).validate()


class JournalBody(BaseModel):
    author_id: str
    theme: str
    content: str


class GenerateJournalsBody(BaseModel):
    author_ids: list[str]
    theme: str


class JournalPatch(BaseModel):
    theme: str | None = None
    content: str | None = None


class CommentBody(BaseModel):
    commenter_id: str
    mode: str = "generate"
    thread_id: str | None = None
    content: str | None = None


class CommentPatch(BaseModel):
    content: str


# --- app factory ----------------------------------------------------------------

def create_app(
    config: ServiceConfig,
    *,
    provider: Provider | None = None,
    clock: Callable[[], str] | None = None,
    timer: Callable[[], float] | None = None,
) -> FastAPI:
    """Build the service. ``provider``, ``clock`` and ``timer`` override the
    config-derived defaults; tests use them to pin nondeterminism down."""
    language = output_language(config.output_language)
    data_dir = DataDir(config.data_dir, clock=clock)
    orchestrator_kwargs: dict = {}
    if timer is not None:
        orchestrator_kwargs["timer"] = timer
    orchestrator = Orchestrator(
        provider if provider is not None else config.build_provider(),
        language,
        max_in_flight=config.max_in_flight,
        clock=clock,
        **orchestrator_kwargs,
    )

    app = FastAPI(
        title="starcast",
        version="0.1.0",
        docs_url="/docs" if config.debug else None,
        redoc_url=None,
        openapi_url="/openapi.json" if config.debug else None,
    )
    app.state.data_dir = data_dir
    app.state.orchestrator = orchestrator
    app.state.config = config

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(errors.DomainError)
    async def domain_error_handler(request: Request, exc: errors.DomainError):
        return JSONResponse(status_code=error_status(exc), content=error_payload(exc))

    if config.api_token:
        @app.middleware("http")
        async def require_token(request: Request, call_next):
            if request.url.path.startswith("/api/"):
                header = request.headers.get("authorization", "")
                if header != f"Bearer {config.api_token}":
                    return JSONResponse(
                        status_code=401,
                        content={"error": {"code": "Unauthorized",
                                           "message": "missing or wrong bearer token"}},
                    )
            return await call_next(request)

    def store_for(project_id: str) -> ProjectStore:
        return data_dir.open_project(project_id)

    def project_meta(store: ProjectStore) -> dict:
        return {
            "id": store.project_id,
            "name": store.name,
            "revision": store.revision,
            "created_at": store.created_at,
        }

    # --- health / projects ---

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "store": "ready",
            "provider": {
                "kind": type(orchestrator._provider).__name__,
                "configured": not _is_unconfigured(orchestrator),
            },
            "output_language": language.tag,
        }

    @app.get("/api/projects")
    def list_projects():
        return {"projects": data_dir.list_projects()}

    @app.post("/api/projects", status_code=201)
    def create_project(body: ProjectBody):
        return project_meta(data_dir.create_project(body.name))

    @app.post("/api/projects/import", status_code=201)
    async def import_project(request: Request):
        payload = await request.body()
        return project_meta(import_archive(data_dir, payload))

    @app.get("/api/projects/{project_id}")
    def get_project(project_id: str):
        return project_meta(store_for(project_id))

    @app.get("/api/projects/{project_id}/export")
    def export_project(project_id: str):
        store = store_for(project_id)
        payload = export_archive(store, data_dir.images)
        return Response(
            content=payload,
            media_type="application/zip",
            headers={
                "Content-Disposition": f'attachment; filename="{store.project_id}.zip"'
            },
        )

    # --- characters and attributes ---

    @app.get("/api/projects/{project_id}/characters")
    def list_characters(project_id: str):
        graph = store_for(project_id).snapshot()
        return {"characters": [character_doc(c) for c in graph.live_characters()]}

    @app.post("/api/projects/{project_id}/characters", status_code=201)
    def create_character(project_id: str, body: CharacterBody):
        store = store_for(project_id)
        char = store.commit(
            lambda g: g.create_character(
                body.name,
                [(a.key, a.value) for a in body.attributes],
                body.portrait,
                store.now(),
            )
        )
        return character_doc(char)

    @app.get("/api/projects/{project_id}/characters/{character_id}")
    def get_character(project_id: str, character_id: str):
        return character_doc(store_for(project_id).snapshot().character(character_id))

    @app.patch("/api/projects/{project_id}/characters/{character_id}")
    def update_character(project_id: str, character_id: str, body: CharacterPatch):
        store = store_for(project_id)
        char = store.commit(
            lambda g: g.update_character(
                character_id,
                store.now(),
                name=body.name,
                portrait=body.portrait,
                clear_portrait=body.clear_portrait,
            )
        )
        return character_doc(char)

    @app.delete("/api/projects/{project_id}/characters/{character_id}")
    def delete_character(project_id: str, character_id: str):
        store = store_for(project_id)
        store.commit(lambda g: g.delete_character(character_id, store.now()))
        return {"deleted": character_id}

    @app.post(
        "/api/projects/{project_id}/characters/{character_id}/attributes",
        status_code=201,
    )
    def add_attribute(project_id: str, character_id: str, body: AttributeBody):
        store = store_for(project_id)
        char = store.commit(
            lambda g: g.add_attribute(character_id, body.key, body.value, store.now())
        )
        return character_doc(char)

    @app.put("/api/projects/{project_id}/characters/{character_id}/attributes/order")
    def reorder_attributes(project_id: str, character_id: str, body: OrderBody):
        store = store_for(project_id)
        char = store.commit(
            lambda g: g.reorder_attributes(character_id, body.order, store.now())
        )
        return character_doc(char)

    @app.patch(
        "/api/projects/{project_id}/characters/{character_id}/attributes/{attribute_id}"
    )
    def edit_attribute(
        project_id: str, character_id: str, attribute_id: str, body: AttributePatch
    ):
        if body.key is None and body.value is None:
            raise errors.EmptyPatch("supply key and/or value")
        store = store_for(project_id)
        char = store.commit(
            lambda g: g.edit_attribute(
                character_id, attribute_id, store.now(), key=body.key, value=body.value
            )
        )
        return character_doc(char)

    @app.delete(
        "/api/projects/{project_id}/characters/{character_id}/attributes/{attribute_id}"
    )
    def delete_attribute(project_id: str, character_id: str, attribute_id: str):
        store = store_for(project_id)
        char = store.commit(
            lambda g: g.delete_attribute(character_id, attribute_id, store.now())
        )
        return character_doc(char)

    # --- relationships ---

    @app.get("/api/projects/{project_id}/relationships")
    def list_relationships(
        project_id: str, owner: str | None = None, target: str | None = None
    ):
        graph = store_for(project_id).snapshot()
        rels = sorted(
            graph.relationships.values(), key=lambda r: (r.created_at, _seq(r.id))
        )
        if owner is not None:
            rels = [r for r in rels if r.owner == owner]
        if target is not None:
            rels = [r for r in rels if r.target == target]
        return {"relationships": [relationship_doc(r) for r in rels]}

    @app.post("/api/projects/{project_id}/relationships", status_code=201)
    def follow(project_id: str, body: FollowBody):
        store = store_for(project_id)
        rel = store.commit(
            lambda g: g.follow(body.owner, body.target, body.description, store.now())
        )
        return relationship_doc(rel)

    @app.patch("/api/projects/{project_id}/relationships/{relationship_id}")
    def set_description(project_id: str, relationship_id: str, body: DescriptionPatch):
        store = store_for(project_id)
        rel = store.commit(lambda g: g.set_description(relationship_id, body.description))
        return relationship_doc(rel)

    @app.put("/api/projects/{project_id}/relationships/{relationship_id}/knowledge")
    def set_knowledge(project_id: str, relationship_id: str, body: KnowledgeBody):
        store = store_for(project_id)
        rel = store.commit(lambda g: g.set_knowledge(relationship_id, body.grants))
        return relationship_doc(rel)

    @app.delete("/api/projects/{project_id}/relationships/{relationship_id}")
    def unfollow(project_id: str, relationship_id: str):
        store = store_for(project_id)
        store.commit(lambda g: g.unfollow(relationship_id))
        return {"deleted": relationship_id}

    # --- discovery ---

    @app.post("/api/projects/{project_id}/characters/{character_id}/discover")
    def discover(project_id: str, character_id: str, body: DiscoverBody):
        store = store_for(project_id)
        result = service.discover(store, orchestrator, character_id, body.phrase)
        if result.error is not None:
            raise result.error
        profiles = result.profiles or []
        return {
            "profiles": [
                {name: getattr(p, name) for name in MiniProfile.FIELDS}
                for p in profiles
            ],
            "record_ids": _committed_record_ids(store, result.records),
        }

    @app.post(
        "/api/projects/{project_id}/characters/{character_id}/adopt", status_code=201
    )
    def adopt_mini_profile(project_id: str, character_id: str, body: ProfileBody):
        store = store_for(project_id)
        char, mine, yours = service.adopt_profile(store, character_id, body.to_profile())
        return {
            "character": character_doc(char),
            "relationships": [relationship_doc(mine), relationship_doc(yours)],
        }

    # --- journals ---

    @app.get("/api/projects/{project_id}/journals")
    def list_journals(project_id: str):
        graph = store_for(project_id).snapshot()
        entries = sorted(
            graph.journals.values(),
            key=lambda e: (e.created_at, _seq(e.id)),
            reverse=True,
        )
        return {"journals": [journal_doc(e) for e in entries]}

    @app.post("/api/projects/{project_id}/journals", status_code=201)
    def add_journal(project_id: str, body: JournalBody):
        store = store_for(project_id)
        entry = store.commit(
            lambda g: g.add_journal(
                body.author_id, body.theme, body.content, PROVENANCE_MANUAL, store.now()
            )
        )
        return journal_doc(entry)

    @app.post("/api/projects/{project_id}/journals/generate")
    def generate_journals(project_id: str, body: GenerateJournalsBody):
        store = store_for(project_id)
        batch, entries = service.generate_journals(
            store, orchestrator, body.author_ids, body.theme
        )
        if batch.all_failed:
            first = next(s.error for s in batch.slots if s.error is not None)
            raise errors.AllFailed(
                f"every journal slot failed; first error: {first.code}: {first.message}"
            )
        record_ids = _committed_record_ids(store, [s.record for s in batch.slots])
        slots = []
        for (slot, entry), record_id in zip(zip(batch.slots, entries), record_ids):
            row = {"author": slot.author, "record_id": record_id}
            if slot.error is None and entry is not None:
                row["status"] = "ok"
                row["entry"] = journal_doc(entry)
            else:
                err = slot.error
                row["status"] = "error"
                row["error"] = error_payload(err)["error"] if err else None
            slots.append(row)
        return {"slots": slots}

    @app.get("/api/projects/{project_id}/journals/{journal_id}")
    def get_journal(project_id: str, journal_id: str):
        return journal_doc(store_for(project_id).snapshot().journal(journal_id))

    @app.patch("/api/projects/{project_id}/journals/{journal_id}")
    def edit_journal(project_id: str, journal_id: str, body: JournalPatch):
        if body.theme is None and body.content is None:
            raise errors.EmptyPatch("supply theme and/or content")
        store = store_for(project_id)
        entry = store.commit(
            lambda g: g.edit_journal(journal_id, theme=body.theme, content=body.content)
        )
        return journal_doc(entry)

    @app.delete("/api/projects/{project_id}/journals/{journal_id}")
    def delete_journal(project_id: str, journal_id: str):
        store = store_for(project_id)
        store.commit(lambda g: g.delete_journal(journal_id))
        return {"deleted": journal_id}

    # --- threads and comments ---

    def thread_with_turn(graph: CastGraph, thread) -> dict:
        doc = thread_doc(thread)
        doc["next_author"] = graph.next_author(thread)
        return doc

    @app.get("/api/projects/{project_id}/journals/{journal_id}/threads")
    def threads_by_journal(project_id: str, journal_id: str):
        graph = store_for(project_id).snapshot()
        threads = graph.threads_by_journal(journal_id)
        return {"threads": [thread_with_turn(graph, t) for t in threads]}

    @app.post(
        "/api/projects/{project_id}/journals/{journal_id}/comments", status_code=201
    )
    def create_comment(project_id: str, journal_id: str, body: CommentBody):
        store = store_for(project_id)
        if body.mode == "manual":
            if not (body.content or "").strip():
                raise errors.ModeMismatch("manual mode requires content")
            thread, comment = service.manual_comment(
                store, journal_id, body.commenter_id, body.thread_id, body.content or ""
            )
        elif body.mode == "generate":
            if body.content is not None:
                raise errors.ModeMismatch("generate mode does not accept content")
            thread, comment, result = service.generate_comment(
                store, orchestrator, journal_id, body.commenter_id, body.thread_id
            )
            if result.error is not None:
                raise result.error
            assert thread is not None and comment is not None
        else:
            raise errors.ModeMismatch(f"unknown mode {body.mode!r}")
        graph = store.snapshot()
        return {
            "thread": thread_with_turn(graph, graph.thread(thread.id)),
            "comment": comment_doc(comment),
            "record_id": graph.records[-1].id if body.mode == "generate" else None,
        }

    @app.get("/api/projects/{project_id}/threads/{thread_id}")
    def get_thread(project_id: str, thread_id: str):
        graph = store_for(project_id).snapshot()
        return thread_with_turn(graph, graph.thread(thread_id))

    @app.patch("/api/projects/{project_id}/comments/{comment_id}")
    def edit_comment(project_id: str, comment_id: str, body: CommentPatch):
        store = store_for(project_id)
        comment = store.commit(lambda g: g.edit_comment(comment_id, body.content))
        return comment_doc(comment)

    @app.delete("/api/projects/{project_id}/comments/{comment_id}")
    def delete_comment(project_id: str, comment_id: str):
        store = store_for(project_id)
        store.commit(lambda g: g.delete_comment(comment_id))
        return {"deleted": comment_id}

    # --- history queries ---

    @app.get("/api/projects/{project_id}/characters/{character_id}/journals")
    def journals_by_author(project_id: str, character_id: str):
        entries = store_for(project_id).journals_by_author(character_id)
        return {"journals": [journal_doc(e) for e in entries]}

    @app.get("/api/projects/{project_id}/characters/{character_id}/threads")
    def threads_by_participant(project_id: str, character_id: str):
        store = store_for(project_id)
        graph = store.snapshot()
        threads = graph.threads_by_participant(character_id)
        return {"threads": [thread_with_turn(graph, t) for t in threads]}

    # --- images ---

    @app.post("/api/images", status_code=201)
    async def upload_image(request: Request):
        payload = await request.body()
        if not payload:
            raise errors.EmptyContent("image body must not be empty")
        ref = data_dir.images.put(payload)
        return {"ref": ref, "media_type": sniff_media_type(payload)}

    @app.get("/api/images/{ref}")
    def get_image(ref: str):
        payload = data_dir.images.get(ref)
        return Response(content=payload, media_type=sniff_media_type(payload))

    return app


def _is_unconfigured(orchestrator: Orchestrator) -> bool:
    from .provider import UnconfiguredProvider

    return isinstance(orchestrator._provider, UnconfiguredProvider)


def _committed_record_ids(store: ProjectStore, records) -> list[str]:
    """Ids of the just-committed audit rows (the tail of the record log)."""
    graph = store.snapshot()
    count = len(records)
    return [r.id for r in graph.records[-count:]] if count else []
