/**
 * Renderer-independent screen model.
 *
 * Scenes render to an ordered list of nodes; the DOM layer (or a test)
 * walks the list top to bottom. Keeping rendering pure makes the
 * client's central contract checkable: every value on screen is a
 * server value, and element order (e.g. review before prompt) is part
 * of the scene's definition, not a styling accident.
 */

export type SceneName =
  | "briefing"
  | "tutorial"
  | "laptop"
  | "meeting"
  | "survey"
  | "debrief";

export type ScreenNode =
  | { kind: "heading"; text: string }
  | { kind: "note"; text: string }
  | { kind: "stat"; label: string; value: string }
  | { kind: "dialogue"; speaker: string; text: string }
  | { kind: "chart"; label: string; weeks: number[]; values: number[] }
  | { kind: "field"; id: string; label: string; value: string }
  | {
      kind: "choice";
      id: string;
      label: string;
      options: string[];
      selected: string;
    }
  | { kind: "button"; id: string; label: string }
  | { kind: "error"; text: string };

export interface Screen {
  scene: SceneName;
  nodes: ScreenNode[];
}

export function findNode(
  screen: Screen,
  kind: ScreenNode["kind"],
  match?: (node: ScreenNode) => boolean,
): ScreenNode | undefined {
  return screen.nodes.find((n) => n.kind === kind && (!match || match(n)));
}

export function nodeIndex(
  screen: Screen,
  predicate: (node: ScreenNode) => boolean,
): number {
  return screen.nodes.findIndex(predicate);
}
