// Wire types for the service REST surface. Field names mirror the server
// documents one to one; nothing here is invented client-side.

export interface ProjectMeta {
  id: string;
  name: string;
  revision: number;
  created_at: string;
}

export interface AttributeDoc {
  id: string;
  key: string;
  value: string;
  order: number;
}

export interface CharacterDoc {
  id: string;
  name: string;
  portrait: string | null;
  attributes: AttributeDoc[];
  created_at: string;
  updated_at: string;
  deleted: boolean;
}

export interface RelationshipDoc {
  id: string;
  owner: string;
  target: string;
  description: string;
  knowledge: string[];
  created_at: string;
}

export type Provenance = "generated" | "manual" | "edited";

export interface JournalDoc {
  id: string;
  author: string;
  theme: string;
  content: string;
  provenance: Provenance;
  created_at: string;
  orphaned: boolean;
}

export interface CommentDoc {
  id: string;
  author: string;
  content: string;
  provenance: Provenance;
  created_at: string;
  orphaned: boolean;
}

export interface ThreadDoc {
  id: string;
  journal: string;
  initiator: string;
  created_at: string;
  comments: CommentDoc[];
  next_author: string;
}

export interface MiniProfile {
  name: string;
  introduction: string;
  backstory: string;
  my_relationship: string;
  your_relationship: string;
}

export interface DiscoverResponse {
  profiles: MiniProfile[];
  record_ids: string[];
}

export interface AdoptResponse {
  character: CharacterDoc;
  relationships: RelationshipDoc[];
}

export interface JournalSlot {
  author: string;
  record_id: string;
  status: "ok" | "error";
  entry?: JournalDoc;
  error?: { code: string; message: string };
}

export interface GenerateJournalsResponse {
  slots: JournalSlot[];
}

export interface CommentResponse {
  thread: ThreadDoc;
  comment: CommentDoc;
  record_id: string | null;
}

export interface HealthResponse {
  status: string;
  store: string;
  provider: { kind: string; configured: boolean };
  output_language: string;
}

export interface NewCharacterBody {
  name: string;
  attributes: { key: string; value: string }[];
  portrait?: string;
}

export interface CommentBody {
  commenter_id: string;
  mode: "generate" | "manual";
  thread_id?: string;
  content?: string;
}
