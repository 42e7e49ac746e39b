// Client-side session store and controller. The server is the source of
// truth: the store only ever holds the last StateView the server returned,
// and at most one mutating request is in flight at a time.
import { ApiError, } from "./api.js";
export class GameClient {
    constructor(api) {
        this.api = api;
        this.session = null;
        this.lastError = null;
        this.statsHistory = {};
        this.listeners = [];
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    notify() {
        for (const listener of this.listeners)
            listener(this);
    }
    applyState(state) {
        if (!this.session)
            return;
        this.session.state = state;
        this.session.pending = state.pending;
    }
    // Wraps a mutating call: refuses to overlap requests, surfaces API errors
    // as a message while keeping the last consistent view.
    async mutate(fn) {
        if (!this.session)
            throw new Error("no active session");
        if (this.session.busy)
            return null;
        this.session.busy = true;
        this.lastError = null;
        this.notify();
        try {
            return await fn();
        }
        catch (err) {
            if (err instanceof ApiError) {
                this.lastError = err.message;
                return null;
            }
            throw err;
        }
        finally {
            if (this.session)
                this.session.busy = false;
            this.notify();
        }
    }
    async newGame(opts) {
        this.lastError = null;
        try {
            const doc = await this.api.createSession(opts);
            this.session = {
                sessionId: doc.session_id,
                state: doc.state,
                pending: doc.state.pending,
                mail: [],
                busy: false,
            };
            this.statsHistory = {};
        }
        catch (err) {
            if (err instanceof ApiError) {
                this.lastError = err.message;
            }
            else {
                throw err;
            }
        }
        this.notify();
    }
    async cast() {
        return this.mutate(async () => {
            const result = await this.api.cast(this.session.sessionId);
            if (!result.no_bite && result.catch) {
                this.session.pending = result.catch;
            }
            return result;
        });
    }
    async decide(action) {
        return this.mutate(async () => {
            const doc = await this.api.decide(this.session.sessionId, action);
            this.applyState(doc.state);
            return doc.state;
        });
    }
    async sell(fishIds) {
        return this.mutate(async () => {
            const doc = await this.api.sell(this.session.sessionId, fishIds);
            this.applyState(doc.state);
            return doc.state;
        });
    }
    async endDay() {
        return this.mutate(async () => {
            const doc = await this.api.endDay(this.session.sessionId);
            this.applyState(doc.state);
            // New letters land in the mailbox immediately with the response.
            this.session.mail = this.session.mail.concat(doc.new_mail);
            return doc.new_mail;
        });
    }
    async refresh() {
        if (!this.session)
            return;
        const doc = await this.api.getState(this.session.sessionId);
        this.applyState(doc.state);
        this.notify();
    }
    async openMail() {
        if (!this.session)
            return [];
        const doc = await this.api.getMail(this.session.sessionId);
        this.session.mail = doc.letters;
        await this.refresh(); // unread badge now reflects the read marks
        return doc.letters;
    }
    // Read-only researcher poll; may overlap mutating requests.
    async pollStats() {
        var _a;
        if (!this.session)
            return null;
        try {
            const doc = await this.api.getStats(this.session.sessionId);
            for (const [sid, st] of Object.entries(doc.stats)) {
                ((_a = this.statsHistory)[sid] ?? (_a[sid] = [])).push(st.mean);
            }
            this.notify();
            return doc.stats;
        }
        catch (err) {
            if (err instanceof ApiError)
                return null;
            throw err;
        }
    }
}
