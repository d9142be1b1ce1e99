/**
 * Wire types for the session service message catalog.
 *
 * Mirrors docs/protocol.md in the repository root: every field the
 * server sends is typed here and the client renders server values
 * verbatim, never numbers it derived itself.
 */
export {};
