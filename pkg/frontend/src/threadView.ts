import { ApiError } from "./api";
import type { App } from "./app";
import { avatar } from "./avatar";
import { errorLine } from "./discovery";
import { el, replaceChildrenOf } from "./dom";
import { provenanceBadge } from "./profilePanel";
import type { CommentBody, JournalDoc, ThreadDoc } from "./types";

// Comment threads under one journal entry. Threads are dyadic and strictly
// alternating; the reply affordance is bound to the server-reported next
// author, so the only way to go out of turn is a stale view, and the 409
// from that surfaces as the turn toast.

export function renderThreadsSection(app: App, journal: JournalDoc): HTMLElement {
  const { strings } = app;
  const box = el("section", {
    className: "threads-section",
    dataset: { testid: "threads", journal: journal.id },
  });
  const list = el("div", { className: "thread-list" });

  const reload = async () => {
    let threads: ThreadDoc[];
    try {
      threads = await app.api.threadsByJournal(app.session.projectId, journal.id);
    } catch (err) {
      replaceChildrenOf(list, el("p", { text: errorLine(err, strings.requestFailed) }));
      return;
    }
    replaceChildrenOf(list, ...threads.map((thread) => threadBlock(app, journal, thread, reload)));
    if (!threads.length) {
      list.append(el("p", { className: "muted", text: strings.noThreads }));
    }
  };

  box.append(el("h4", { text: strings.comments }), list, newThreadControls(app, journal, reload));
  void reload();
  return box;
}

function postComment(
  app: App,
  journal: JournalDoc,
  body: CommentBody,
  reload: () => Promise<void>,
): Promise<boolean> {
  return app.api
    .postComment(app.session.projectId, journal.id, body)
    .then(async () => {
      await reload();
      return true;
    })
    .catch(async (err: unknown) => {
      if (err instanceof ApiError && err.code === "AlternationViolation") {
        app.toasts.show(app.strings.turnError, "error");
      } else {
        app.toasts.show(errorLine(err, app.strings.requestFailed), "error");
      }
      // The thread may have moved on under us; re-render from the server.
      await reload();
      return false;
    });
}

function threadBlock(
  app: App,
  journal: JournalDoc,
  thread: ThreadDoc,
  reload: () => Promise<void>,
): HTMLElement {
  const { strings } = app;
  const block = el("article", {
    className: "thread-block",
    dataset: { testid: "thread", id: thread.id },
  });

  thread.comments.forEach((comment, index) => {
    const isInitiator = comment.author === thread.initiator;
    const author = app.session.character(comment.author);
    const name = author?.name ?? strings.removedCharacter;
    const isTail = index === thread.comments.length - 1;

    const contentNode = el("p", { className: "comment-content", text: comment.content });
    const row = el(
      "div",
      {
        className: `comment-row ${isInitiator ? "side-initiator" : "side-author"}`,
        dataset: { testid: "comment", id: comment.id, author: comment.author },
      },
      el(
        "div",
        { className: "comment-head" },
        author ? avatar(app.api, author) : null,
        el("span", { className: "comment-author", text: name }),
        provenanceBadge(app, comment.provenance),
      ),
      contentNode,
    );

    const controls = el("div", { className: "comment-controls" });
    controls.append(
      el("button", {
        className: "panel-btn",
        text: strings.edit,
        dataset: { testid: "comment-edit" },
        onClick: () => {
          const editor = el("textarea", {
            value: comment.content,
            dataset: { testid: "comment-editor" },
          });
          const save = el("button", {
            text: strings.save,
            dataset: { testid: "comment-save" },
            onClick: () => {
              void app.api
                .patchComment(app.session.projectId, comment.id, editor.value)
                .then(() => reload())
                .catch((err: unknown) => {
                  app.toasts.show(errorLine(err, strings.requestFailed), "error");
                });
            },
          });
          const cancel = el("button", { text: strings.cancel, onClick: () => void reload() });
          replaceChildrenOf(contentNode, editor, save, cancel);
        },
      }),
    );
    if (isTail) {
      controls.append(
        el("button", {
          className: "panel-btn",
          text: strings.delete,
          dataset: { testid: "comment-delete" },
          onClick: () => {
            void app.confirm.ask(`${strings.delete}?`).then((ok) => {
              if (!ok) return;
              void app.api
                .deleteComment(app.session.projectId, comment.id)
                .then(() => reload())
                .catch((err: unknown) => {
                  app.toasts.show(errorLine(err, strings.requestFailed), "error");
                });
            });
          },
        }),
      );
    }
    row.append(controls);
    block.append(row);
  });

  // Reply controls exist only for the alternation-mandated next author.
  const next = app.session.character(thread.next_author);
  const nextName = next?.name ?? strings.removedCharacter;
  const replyText = el("textarea", {
    placeholder: strings.contentPlaceholder,
    dataset: { testid: "reply-text" },
  });
  block.append(
    el(
      "div",
      { className: "reply-box", dataset: { testid: "reply-box", author: thread.next_author } },
      el("span", { className: "mini-label", text: `${strings.replyAs} ${nextName}` }),
      replyText,
      el("button", {
        text: strings.postManual,
        dataset: { testid: "reply-manual" },
        onClick: () => {
          if (!replyText.value.trim()) return;
          void postComment(
            app,
            journal,
            {
              commenter_id: thread.next_author,
              mode: "manual",
              thread_id: thread.id,
              content: replyText.value,
            },
            reload,
          );
        },
      }),
      el("button", {
        text: strings.postGenerated,
        dataset: { testid: "reply-generate" },
        onClick: () => {
          void postComment(
            app,
            journal,
            { commenter_id: thread.next_author, mode: "generate", thread_id: thread.id },
            reload,
          );
        },
      }),
    ),
  );
  return block;
}

function newThreadControls(
  app: App,
  journal: JournalDoc,
  reload: () => Promise<void>,
): HTMLElement {
  const { strings } = app;
  // The journal's author never initiates a thread on their own entry.
  const candidates = app.session.characters.filter((c) => c.id !== journal.author);
  const commenterSelect = el("select", { dataset: { testid: "new-thread-commenter" } });
  for (const candidate of candidates) {
    commenterSelect.append(el("option", { value: candidate.id, text: candidate.name }));
  }
  const text = el("textarea", {
    placeholder: strings.contentPlaceholder,
    dataset: { testid: "new-thread-text" },
  });

  return el(
    "div",
    { className: "new-thread-box", dataset: { testid: "new-thread", ephemeral: "1" } },
    el("span", { className: "mini-label", text: strings.newThread }),
    el("span", { className: "mini-label", text: strings.commentAs }),
    commenterSelect,
    text,
    el("button", {
      text: strings.postManual,
      dataset: { testid: "new-thread-manual" },
      onClick: () => {
        if (!commenterSelect.value || !text.value.trim()) return;
        void postComment(
          app,
          journal,
          { commenter_id: commenterSelect.value, mode: "manual", content: text.value },
          reload,
        ).then((posted) => {
          if (posted) text.value = "";
        });
      },
    }),
    el("button", {
      text: strings.postGenerated,
      dataset: { testid: "new-thread-generate" },
      onClick: () => {
        if (!commenterSelect.value) return;
        void postComment(
          app,
          journal,
          { commenter_id: commenterSelect.value, mode: "generate" },
          reload,
        );
      },
    }),
  );
}
