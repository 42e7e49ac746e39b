// Typed client for the session service HTTP/JSON API. Every method returns
// the server's document verbatim; nothing is recomputed client-side.
export class ApiError extends Error {
    constructor(status, errorCode, message) {
        super(message);
        this.status = status;
        this.errorCode = errorCode;
        this.name = "ApiError";
    }
}
export class AnglerApi {
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    async request(method, path, body) {
        const resp = await fetch(this.baseUrl + path, {
            method,
            headers: body === undefined ? undefined : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const doc = await resp.json();
        if (!resp.ok) {
            throw new ApiError(resp.status, doc.error_code ?? "UNKNOWN", doc.message ?? "request failed");
        }
        return doc;
    }
    createSession(opts) {
        return this.request("POST", "/api/sessions", opts);
    }
    cast(sessionId) {
        return this.request("POST", `/api/sessions/${sessionId}/cast`);
    }
    decide(sessionId, action) {
        return this.request("POST", `/api/sessions/${sessionId}/decision`, { action });
    }
    sell(sessionId, fishIds) {
        return this.request("POST", `/api/sessions/${sessionId}/sell`, { fish_ids: fishIds });
    }
    endDay(sessionId) {
        return this.request("POST", `/api/sessions/${sessionId}/end-day`);
    }
    getState(sessionId) {
        return this.request("GET", `/api/sessions/${sessionId}`);
    }
    getMail(sessionId) {
        return this.request("GET", `/api/sessions/${sessionId}/mail`);
    }
    getStats(sessionId) {
        return this.request("GET", `/api/sessions/${sessionId}/stats`);
    }
}
