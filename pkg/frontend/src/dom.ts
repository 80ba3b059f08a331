// Tiny element factory; everything the client renders goes through here.

type Child = Node | string | null | undefined;

export interface ElProps {
  className?: string;
  text?: string;
  title?: string;
  type?: string;
  value?: string;
  placeholder?: string;
  href?: string;
  src?: string;
  alt?: string;
  disabled?: boolean;
  checked?: boolean;
  selected?: boolean;
  open?: boolean;
  dataset?: Record<string, string>;
  onClick?: (event: MouseEvent) => void;
  onChange?: (event: Event) => void;
  onInput?: (event: Event) => void;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  props: ElProps = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (props.className) node.className = props.className;
  if (props.text !== undefined) node.textContent = props.text;
  if (props.title !== undefined) node.title = props.title;
  if (props.type !== undefined && "type" in node) {
    (node as unknown as { type: string }).type = props.type;
  }
  if (props.value !== undefined && "value" in node) {
    (node as unknown as { value: string }).value = props.value;
  }
  if (props.placeholder !== undefined && "placeholder" in node) {
    (node as unknown as { placeholder: string }).placeholder = props.placeholder;
  }
  if (props.href !== undefined && node instanceof HTMLAnchorElement) node.href = props.href;
  if (props.src !== undefined && node instanceof HTMLImageElement) node.src = props.src;
  if (props.alt !== undefined && node instanceof HTMLImageElement) node.alt = props.alt;
  if (props.disabled !== undefined && "disabled" in node) {
    (node as unknown as { disabled: boolean }).disabled = props.disabled;
  }
  if (props.checked !== undefined && node instanceof HTMLInputElement) {
    node.checked = props.checked;
  }
  if (props.selected !== undefined && node instanceof HTMLOptionElement) {
    node.selected = props.selected;
  }
  if (props.open !== undefined && node instanceof HTMLDetailsElement) node.open = props.open;
  if (props.dataset) {
    for (const [key, value] of Object.entries(props.dataset)) node.dataset[key] = value;
  }
  if (props.onClick) node.addEventListener("click", props.onClick as EventListener);
  if (props.onChange) node.addEventListener("change", props.onChange);
  if (props.onInput) node.addEventListener("input", props.onInput);
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(child);
  }
  return node;
}

export function clearChildren(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function replaceChildrenOf(node: HTMLElement, ...children: Child[]): void {
  clearChildren(node);
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(child);
  }
}
