import { readFileSync } from "node:fs";

import type { Reply, Request } from "../src/protocol.js";
import type { Transport } from "../src/transport.js";

export function fixture<T = any>(name: string): T {
  const url = new URL(`../../test/fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

/** Replays scripted replies and records every request it saw. */
export class FakeTransport implements Transport {
  requests: Request[] = [];
  private script: Array<Reply | Error>;

  constructor(script: Array<Reply | Error>) {
    this.script = [...script];
  }

  push(...replies: Array<Reply | Error>): void {
    this.script.push(...replies);
  }

  async request(message: Request): Promise<Reply> {
    this.requests.push(message);
    const next = this.script.shift();
    if (next === undefined) {
      throw new Error(`no scripted reply for ${JSON.stringify(message)}`);
    }
    if (next instanceof Error) throw next;
    return next;
  }
}
