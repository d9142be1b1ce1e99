/** Transport over the message catalog; the server is authoritative. */
/** Thrown when the transport itself fails (network down, bad gateway). */
export class TransportError extends Error {
    constructor(message, cause) {
        super(message, { cause });
        this.name = "TransportError";
    }
}
/** POSTs each message to the session service's HTTP bridge. */
export class HttpTransport {
    baseUrl;
    constructor(baseUrl) {
        this.baseUrl = baseUrl;
    }
    async request(message) {
        let response;
        try {
            response = await fetch(`${this.baseUrl}/api`, {
                method: "POST",
                headers: { "Content-Type": "application/json" },
                body: JSON.stringify(message),
            });
        }
        catch (err) {
            throw new TransportError(`request failed: ${String(err)}`, err);
        }
        if (!response.ok) {
            throw new TransportError(`server returned HTTP ${response.status}`);
        }
        return (await response.json());
    }
}
