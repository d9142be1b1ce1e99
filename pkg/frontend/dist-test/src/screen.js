/**
 * Renderer-independent screen model.
 *
 * Scenes render to an ordered list of nodes; the DOM layer (or a test)
 * walks the list top to bottom. Keeping rendering pure makes the
 * client's central contract checkable: every value on screen is a
 * server value, and element order (e.g. review before prompt) is part
 * of the scene's definition, not a styling accident.
 */
export function findNode(screen, kind, match) {
    return screen.nodes.find((n) => n.kind === kind && (!match || match(n)));
}
export function nodeIndex(screen, predicate) {
    return screen.nodes.findIndex(predicate);
}
