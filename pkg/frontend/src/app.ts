import type { StudioApi } from "./api";
import type { ConfirmDialog } from "./confirm";
import type { PanelWorkspace } from "./panels";
import type { Session } from "./session";
import type { ChromeStrings } from "./strings";
import type { ToastRegion } from "./toast";

// Shared context threaded through every renderer. Panel modules depend on
// this type only, which keeps them import-cycle free.

export interface App {
  api: StudioApi;
  session: Session;
  strings: ChromeStrings;
  workspace: PanelWorkspace;
  toasts: ToastRegion;
  confirm: ConfirmDialog;
  openProfile: (characterId: string) => void;
  openNewCharacter: () => void;
  openJournals: () => void;
}
