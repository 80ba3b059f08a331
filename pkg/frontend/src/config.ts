export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export interface StudioConfig {
  // Empty string means same-origin relative requests.
  serverUrl: string;
  uiLanguage: "en" | "ko";
  apiToken: string;
  // Injectable for tests and for embedding; defaults to window.fetch.
  fetchFn?: FetchFn;
}

declare global {
  interface Window {
    STUDIO_CONFIG?: Partial<StudioConfig>;
  }
}

export function readConfig(): StudioConfig {
  const raw = typeof window !== "undefined" ? (window.STUDIO_CONFIG ?? {}) : {};
  return {
    serverUrl: (raw.serverUrl ?? "").replace(/\/+$/, ""),
    uiLanguage: raw.uiLanguage === "ko" ? "ko" : "en",
    apiToken: raw.apiToken ?? "",
    fetchFn: raw.fetchFn,
  };
}
