/** Transport over the message catalog; the server is authoritative. */

import type { Reply, Request } from "./protocol.js";

export interface Transport {
  request(message: Request): Promise<Reply>;
}

/** Thrown when the transport itself fails (network down, bad gateway). */
export class TransportError extends Error {
  constructor(message: string, cause?: unknown) {
    super(message, { cause });
    this.name = "TransportError";
  }
}

/** POSTs each message to the session service's HTTP bridge. */
export class HttpTransport implements Transport {
  constructor(private readonly baseUrl: string) {}

  async request(message: Request): Promise<Reply> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/api`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(message),
      });
    } catch (err) {
      throw new TransportError(`request failed: ${String(err)}`, err);
    }
    if (!response.ok) {
      throw new TransportError(`server returned HTTP ${response.status}`);
    }
    return (await response.json()) as Reply;
  }
}
