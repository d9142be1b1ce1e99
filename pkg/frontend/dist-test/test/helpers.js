import { readFileSync } from "node:fs";
export function fixture(name) {
    const url = new URL(`../../test/fixtures/${name}`, import.meta.url);
    return JSON.parse(readFileSync(url, "utf-8"));
}
/** Replays scripted replies and records every request it saw. */
export class FakeTransport {
    requests = [];
    script;
    constructor(script) {
        this.script = [...script];
    }
    push(...replies) {
        this.script.push(...replies);
    }
    async request(message) {
        this.requests.push(message);
        const next = this.script.shift();
        if (next === undefined) {
            throw new Error(`no scripted reply for ${JSON.stringify(message)}`);
        }
        if (next instanceof Error)
            throw next;
        return next;
    }
}
