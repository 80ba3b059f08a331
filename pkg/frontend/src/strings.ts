// Chrome text lives here so the interface language can differ from the
// generation output language, which is a server-side setting.

export interface ChromeStrings {
  appTitle: string;
  projects: string;
  createProject: string;
  projectNamePlaceholder: string;
  openWorkspace: string;
  characters: string;
  newCharacter: string;
  journals: string;
  tabAbout: string;
  tabConnection: string;
  tabJournalsHistory: string;
  tabCommentsHistory: string;
  name: string;
  portrait: string;
  attributes: string;
  addAttribute: string;
  keyPlaceholder: string;
  valuePlaceholder: string;
  deleteCharacter: string;
  characterNotFound: string;
  following: string;
  followers: string;
  follow: string;
  unfollow: string;
  relationshipPlaceholder: string;
  sharedKnowledge: string;
  noAttributesToShare: string;
  discovery: string;
  discoveryPhrasePlaceholder: string;
  discover: string;
  emptyPhrase: string;
  adopt: string;
  adopted: string;
  introduction: string;
  backstory: string;
  myRelationship: string;
  yourRelationship: string;
  discoveryFailed: string;
  showDetails: string;
  retry: string;
  composer: string;
  pickAuthors: string;
  theme: string;
  themePlaceholder: string;
  contentPlaceholder: string;
  modeManual: string;
  modeAuto: string;
  write: string;
  generate: string;
  needAuthor: string;
  needTheme: string;
  manualSingleAuthor: string;
  generating: string;
  provenanceGenerated: string;
  provenanceManual: string;
  provenanceEdited: string;
  edit: string;
  save: string;
  cancel: string;
  delete: string;
  confirmTitle: string;
  confirm: string;
  removedCharacter: string;
  comments: string;
  newThread: string;
  replyAs: string;
  commentAs: string;
  postManual: string;
  postGenerated: string;
  turnError: string;
  noJournals: string;
  noThreads: string;
  close: string;
  moveLeft: string;
  moveRight: string;
  loading: string;
  requestFailed: string;
}

const EN: ChromeStrings = {
  appTitle: "Cast Studio",
  projects: "Projects",
  createProject: "Create project",
  projectNamePlaceholder: "Project name",
  openWorkspace: "Open",
  characters: "Characters",
  newCharacter: "New Character",
  journals: "Journals",
  tabAbout: "About",
  tabConnection: "Connection",
  tabJournalsHistory: "Journals History",
  tabCommentsHistory: "Comments History",
  name: "Name",
  portrait: "Portrait",
  attributes: "Attributes",
  addAttribute: "Add attribute",
  keyPlaceholder: "key",
  valuePlaceholder: "value",
  deleteCharacter: "Delete character",
  characterNotFound: "This character no longer exists.",
  following: "Following",
  followers: "Followers",
  follow: "Follow",
  unfollow: "Unfollow",
  relationshipPlaceholder: "how this character sees the other",
  sharedKnowledge: "Shared knowledge",
  noAttributesToShare: "no attributes to share",
  discovery: "Friends Discovery",
  discoveryPhrasePlaceholder: "e.g. this character's greatest enemy",
  discover: "Discover",
  emptyPhrase: "Enter a relationship phrase first.",
  adopt: "Adopt",
  adopted: "Adopted",
  introduction: "Introduction",
  backstory: "Backstory",
  myRelationship: "Their side",
  yourRelationship: "Your side",
  discoveryFailed: "Discovery failed.",
  showDetails: "Details",
  retry: "Retry",
  composer: "Compose",
  pickAuthors: "Pick authors in the order you want them.",
  theme: "Theme",
  themePlaceholder: "what should they write about?",
  contentPlaceholder: "write the entry here",
  modeManual: "Manual",
  modeAuto: "Auto",
  write: "Write",
  generate: "Generate",
  needAuthor: "Select at least one character.",
  needTheme: "A theme is required for auto mode.",
  manualSingleAuthor: "Manual mode writes for exactly one character.",
  generating: "generating",
  provenanceGenerated: "generated",
  provenanceManual: "manual",
  provenanceEdited: "edited",
  edit: "Edit",
  save: "Save",
  cancel: "Cancel",
  delete: "Delete",
  confirmTitle: "Are you sure?",
  confirm: "Confirm",
  removedCharacter: "removed character",
  comments: "Comments",
  newThread: "New thread",
  replyAs: "Reply as",
  commentAs: "Comment as",
  postManual: "Post",
  postGenerated: "Generate reply",
  turnError: "it's not this character's turn",
  noJournals: "No journal entries yet.",
  noThreads: "No comment threads yet.",
  close: "Close",
  moveLeft: "Move left",
  moveRight: "Move right",
  loading: "loading",
  requestFailed: "Request failed",
};

const KO: ChromeStrings = {
  appTitle: "캐스트 스튜디오",
  projects: "프로젝트",
  createProject: "프로젝트 만들기",
  projectNamePlaceholder: "프로젝트 이름",
  openWorkspace: "열기",
  characters: "캐릭터",
  newCharacter: "새 캐릭터",
  journals: "일기장",
  tabAbout: "소개",
  tabConnection: "관계",
  tabJournalsHistory: "일기 기록",
  tabCommentsHistory: "댓글 기록",
  name: "이름",
  portrait: "프로필 사진",
  attributes: "속성",
  addAttribute: "속성 추가",
  keyPlaceholder: "항목",
  valuePlaceholder: "내용",
  deleteCharacter: "캐릭터 삭제",
  characterNotFound: "존재하지 않는 캐릭터입니다.",
  following: "팔로잉",
  followers: "팔로워",
  follow: "팔로우",
  unfollow: "언팔로우",
  relationshipPlaceholder: "상대를 어떻게 생각하나요?",
  sharedKnowledge: "공유된 정보",
  noAttributesToShare: "공유할 속성이 없습니다",
  discovery: "친구 찾기",
  discoveryPhrasePlaceholder: "예: 이 캐릭터의 가장 큰 적",
  discover: "찾기",
  emptyPhrase: "관계 문구를 먼저 입력하세요.",
  adopt: "등록",
  adopted: "등록됨",
  introduction: "소개",
  backstory: "배경 이야기",
  myRelationship: "상대의 시선",
  yourRelationship: "나의 시선",
  discoveryFailed: "친구 찾기에 실패했습니다.",
  showDetails: "자세히",
  retry: "다시 시도",
  composer: "작성",
  pickAuthors: "원하는 순서대로 작성자를 고르세요.",
  theme: "주제",
  themePlaceholder: "무엇에 대해 쓸까요?",
  contentPlaceholder: "여기에 일기를 쓰세요",
  modeManual: "직접 쓰기",
  modeAuto: "자동 생성",
  write: "쓰기",
  generate: "생성",
  needAuthor: "캐릭터를 한 명 이상 선택하세요.",
  needTheme: "자동 생성에는 주제가 필요합니다.",
  manualSingleAuthor: "직접 쓰기는 한 캐릭터만 선택합니다.",
  generating: "생성 중",
  provenanceGenerated: "생성됨",
  provenanceManual: "직접 씀",
  provenanceEdited: "수정됨",
  edit: "수정",
  save: "저장",
  cancel: "취소",
  delete: "삭제",
  confirmTitle: "정말 진행할까요?",
  confirm: "확인",
  removedCharacter: "삭제된 캐릭터",
  comments: "댓글",
  newThread: "새 댓글 스레드",
  replyAs: "답글 쓰기:",
  commentAs: "댓글 쓰기:",
  postManual: "올리기",
  postGenerated: "답글 생성",
  turnError: "이 캐릭터의 차례가 아닙니다",
  noJournals: "아직 일기가 없습니다.",
  noThreads: "아직 댓글 스레드가 없습니다.",
  close: "닫기",
  moveLeft: "왼쪽으로",
  moveRight: "오른쪽으로",
  loading: "불러오는 중",
  requestFailed: "요청에 실패했습니다",
};

export function chromeStrings(language: "en" | "ko"): ChromeStrings {
  return language === "ko" ? KO : EN;
}
