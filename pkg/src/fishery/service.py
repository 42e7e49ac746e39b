"""Interactive angling sessions over HTTP/JSON.

One session is one player's game: cast, decide keep-or-release per catch,
sell, end the day, read mail. The server is the single source of truth; every
response carries the authoritative view. Requests for a single session are
serialized by a per-session lock; distinct sessions proceed concurrently.
Sessions snapshot to disk after each mutating request and resume on demand.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
import uuid
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping

from .core import (
    AdvisoryLetter,
    ConfigurationError,
    EconomyParams,
    Fish,
    FisheryState,
    RegrowthKind,
    RegrowthMode,
    Transition,
    check_advisories,
    from_canonical_json,
    init_fishery,
    remove_fish,
    render_letter,
    reproduce_daily,
    return_fish,
    sale_price,
    sample_catch,
    spec_from_dict,
    species_stats,
    to_canonical_json,
)
from .presets import session_presets

SNAPSHOT_VERSION = 1


class ErrorCode(Enum):
    PENDING_DECISION = "PENDING_DECISION"
    NO_PENDING = "NO_PENDING"
    LIMIT_REACHED = "LIMIT_REACHED"
    NOT_FOUND = "NOT_FOUND"
    INVALID_CONFIG = "INVALID_CONFIG"
    FORBIDDEN = "FORBIDDEN"


_HTTP_STATUS = {
    ErrorCode.PENDING_DECISION: 409,
    ErrorCode.NO_PENDING: 409,
    ErrorCode.LIMIT_REACHED: 409,
    ErrorCode.NOT_FOUND: 404,
    ErrorCode.INVALID_CONFIG: 422,
    ErrorCode.FORBIDDEN: 403,
}


class SessionError(Exception):
    def __init__(self, code: ErrorCode, message: str):
        super().__init__(message)
        self.code = code
        self.status = _HTTP_STATUS[code]


class Phase(Enum):
    FISHING = "fishing"
    DAY_ENDED = "day_ended"


@dataclass
class MailItem:
    letter: AdvisoryLetter
    read: bool = False


@dataclass
class Session:
    session_id: str
    player_name: str
    researcher_mode: bool
    fishery: FisheryState
    econ: EconomyParams
    regrowth: RegrowthMode
    context: frozenset[str]
    inventory: list[Fish] = field(default_factory=list)
    money: int = 0
    kept_today: int = 0
    pending_catch: Fish | None = None
    mailbox: list[MailItem] = field(default_factory=list)
    phase: Phase = Phase.FISHING
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _display_length(length: float) -> float:
    return round(length, 1)


class SessionManager:
    """Owns all live sessions; enforces per-session mutual exclusion."""

    def __init__(self, data_dir: str | Path | None = None, presets: Mapping | None = None):
        self.data_dir = Path(data_dir) if data_dir is not None else None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        self.presets = dict(presets) if presets is not None else session_presets()
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()

    # -- lifecycle --------------------------------------------------------

    def create_session(
        self,
        preset: str | None = None,
        specs: list[dict] | None = None,
        seed: int | None = None,
        player_name: str = "Angler",
        researcher_mode: bool = False,
    ) -> Session:
        if (preset is None) == (specs is None):
            raise SessionError(
                ErrorCode.INVALID_CONFIG, "exactly one of 'preset' or 'specs' is required"
            )
        if preset is not None:
            if preset not in self.presets:
                raise SessionError(ErrorCode.NOT_FOUND, f"unknown preset {preset!r}")
            chosen = self.presets[preset]
            spec_list = list(chosen["specs"])
            econ = chosen.get("econ", EconomyParams())
            regrowth = chosen.get("regrowth", RegrowthMode(RegrowthKind.REFILL_TO_CAP))
            context = frozenset(chosen.get("context", frozenset()))
        else:
            if not isinstance(specs, list):
                raise SessionError(ErrorCode.INVALID_CONFIG, "'specs' must be a list of objects")
            try:
                spec_list = [spec_from_dict(d) for d in specs]
            except ConfigurationError as exc:
                raise SessionError(ErrorCode.INVALID_CONFIG, str(exc)) from exc
            econ = EconomyParams()
            regrowth = RegrowthMode(RegrowthKind.REFILL_TO_CAP)
            context = frozenset()
        if seed is None:
            seed = secrets.randbits(63)
        try:
            fishery = init_fishery(spec_list, int(seed))
        except ConfigurationError as exc:
            raise SessionError(ErrorCode.INVALID_CONFIG, str(exc)) from exc
        session = Session(
            session_id=uuid.uuid4().hex,
            player_name=player_name,
            researcher_mode=bool(researcher_mode),
            fishery=fishery,
            econ=econ,
            regrowth=regrowth,
            context=context,
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
        self._snapshot(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                session = self._load(session_id)
                if session is None:
                    raise SessionError(ErrorCode.NOT_FOUND, f"unknown session {session_id!r}")
                self._sessions[session_id] = session
            return session

    # -- game requests ----------------------------------------------------

    def cast(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.pending_catch is not None:
                raise SessionError(
                    ErrorCode.PENDING_DECISION, "decide on the current catch before casting again"
                )
            fish = sample_catch(session.fishery, session.context)
            if fish is None:
                return {"no_bite": True, "catch": None}
            remove_fish(session.fishery, fish.fish_id)
            session.pending_catch = fish
            self._snapshot(session)
            return {"no_bite": False, "catch": self._catch_view(session, fish)}

    def decide(self, session_id: str, action: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            fish = session.pending_catch
            if fish is None:
                raise SessionError(ErrorCode.NO_PENDING, "no catch is awaiting a decision")
            if action == "keep":
                if session.kept_today >= session.econ.daily_keep_limit:
                    # The fish stays pending: the player must release it.
                    raise SessionError(
                        ErrorCode.LIMIT_REACHED,
                        f"daily keep limit of {session.econ.daily_keep_limit} reached",
                    )
                session.inventory.append(fish)
                session.kept_today += 1
            elif action == "release":
                return_fish(session.fishery, fish)
            else:
                raise SessionError(
                    ErrorCode.INVALID_CONFIG, "action must be 'keep' or 'release'"
                )
            session.pending_catch = None
            self._snapshot(session)
            return self.state_view(session)

    def sell(self, session_id: str, fish_ids) -> dict:
        session = self.get(session_id)
        with session.lock:
            if fish_ids == "all":
                to_sell = list(session.inventory)
            else:
                try:
                    wanted = list(dict.fromkeys(int(i) for i in fish_ids))
                except (TypeError, ValueError):
                    raise SessionError(
                        ErrorCode.INVALID_CONFIG, "fish_ids must be a list of ids or 'all'"
                    )
                by_id = {f.fish_id: f for f in session.inventory}
                missing = [i for i in wanted if i not in by_id]
                if missing:
                    raise SessionError(
                        ErrorCode.NOT_FOUND, f"fish not in inventory: {missing}"
                    )
                to_sell = [by_id[i] for i in wanted]
            for fish in to_sell:
                spec = session.fishery.specs[fish.species_id]
                session.money += sale_price(fish, spec, session.econ)
                session.inventory.remove(fish)  # sold fish are gone for good
            self._snapshot(session)
            return self.state_view(session)

    def end_day(self, session_id: str) -> tuple[dict, list[AdvisoryLetter]]:
        session = self.get(session_id)
        with session.lock:
            if session.pending_catch is not None:
                raise SessionError(
                    ErrorCode.PENDING_DECISION, "decide on the current catch before ending the day"
                )
            session.phase = Phase.DAY_ENDED
            fishery = session.fishery
            day_number = fishery.day + 1
            reproduce_daily(fishery, session.regrowth)
            transitions = check_advisories(fishery)
            new_letters = []
            for sid, transition in transitions:
                if transition is Transition.ACTIVATED:
                    body = render_letter(session.player_name, fishery.specs[sid].name)
                    letter = AdvisoryLetter(sid, day_number, body)
                    session.mailbox.append(MailItem(letter))
                    new_letters.append(letter)
            session.kept_today = 0
            fishery.day = day_number
            session.phase = Phase.FISHING
            self._snapshot(session)
            return self.state_view(session), new_letters

    def read_mail(self, session_id: str) -> list[dict]:
        session = self.get(session_id)
        with session.lock:
            letters = [
                {
                    "species_id": item.letter.species_id,
                    "day": item.letter.day,
                    "body": item.letter.body,
                    "read": item.read,
                }
                for item in session.mailbox
            ]
            changed = any(not item.read for item in session.mailbox)
            for item in session.mailbox:
                item.read = True
            if changed:
                self._snapshot(session)
            return letters

    # -- views -------------------------------------------------------------

    def _catch_view(self, session: Session, fish: Fish) -> dict:
        spec = session.fishery.specs[fish.species_id]
        return {
            "id": fish.fish_id,
            "species": spec.name,
            "length": _display_length(fish.length),
            "price": sale_price(fish, spec, session.econ),
            "kept_today": session.kept_today,
            "limit": session.econ.daily_keep_limit,
            "advisory_active": session.fishery.advisory_active[fish.species_id],
        }

    def state_view(self, session: Session) -> dict:
        view = {
            "day": session.fishery.day,
            "money": session.money,
            "kept_today": session.kept_today,
            "limit": session.econ.daily_keep_limit,
            "inventory": [
                {
                    "id": f.fish_id,
                    "species": session.fishery.specs[f.species_id].name,
                    "length": _display_length(f.length),
                    "price": sale_price(f, session.fishery.specs[f.species_id], session.econ),
                }
                for f in session.inventory
            ],
            "pending": (
                self._catch_view(session, session.pending_catch)
                if session.pending_catch is not None
                else None
            ),
            "unread_mail": sum(1 for item in session.mailbox if not item.read),
        }
        if session.researcher_mode:
            view["stats"] = self.stats_view_unlocked(session)
        return view

    def stats_view(self, session_id: str) -> dict:
        session = self.get(session_id)
        if not session.researcher_mode:
            raise SessionError(
                ErrorCode.FORBIDDEN, "population statistics require researcher mode"
            )
        with session.lock:
            return self.stats_view_unlocked(session)

    def stats_view_unlocked(self, session: Session) -> dict:
        out = {}
        for sid in session.fishery.specs:
            st = species_stats(session.fishery, sid)
            out[sid] = {
                "name": session.fishery.specs[sid].name,
                "count": st.count,
                "mean": st.mean,
                "sd": st.sd,
                "min": st.min,
                "max": st.max,
                "advisory_active": session.fishery.advisory_active[sid],
            }
        return out

    # -- persistence --------------------------------------------------------

    def _snapshot_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def _snapshot(self, session: Session) -> None:
        if self.data_dir is None:
            return
        doc = {
            "snapshot_version": SNAPSHOT_VERSION,
            "session_id": session.session_id,
            "player_name": session.player_name,
            "researcher_mode": session.researcher_mode,
            "money": session.money,
            "kept_today": session.kept_today,
            "phase": session.phase.value,
            "context": sorted(session.context),
            "econ": {
                "price_divisor": session.econ.price_divisor,
                "daily_keep_limit": session.econ.daily_keep_limit,
            },
            "regrowth": {
                "mode": session.regrowth.kind.value,
                "births_per_day": session.regrowth.births_per_day,
            },
            "next_fish_id": session.fishery.next_fish_id,
            "pending": _fish_doc(session.pending_catch),
            "inventory": [_fish_doc(f) for f in session.inventory],
            "mailbox": [
                {
                    "species_id": item.letter.species_id,
                    "day": item.letter.day,
                    "body": item.letter.body,
                    "read": item.read,
                }
                for item in session.mailbox
            ],
            "fishery": json.loads(to_canonical_json(session.fishery)),
        }
        path = self._snapshot_path(session.session_id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc), encoding="utf-8")
        os.replace(tmp, path)

    def _load(self, session_id: str) -> Session | None:
        if self.data_dir is None:
            return None
        path = self._snapshot_path(session_id)
        if not path.exists():
            return None
        doc = json.loads(path.read_text(encoding="utf-8"))
        fishery = from_canonical_json(json.dumps(doc["fishery"]))
        fishery.next_fish_id = doc["next_fish_id"]
        session = Session(
            session_id=doc["session_id"],
            player_name=doc["player_name"],
            researcher_mode=doc["researcher_mode"],
            fishery=fishery,
            econ=EconomyParams(**doc["econ"]),
            regrowth=RegrowthMode(
                RegrowthKind(doc["regrowth"]["mode"]), doc["regrowth"]["births_per_day"]
            ),
            context=frozenset(doc["context"]),
            inventory=[_fish_from_doc(d) for d in doc["inventory"]],
            money=doc["money"],
            kept_today=doc["kept_today"],
            pending_catch=_fish_from_doc(doc["pending"]) if doc["pending"] else None,
            mailbox=[
                MailItem(AdvisoryLetter(m["species_id"], m["day"], m["body"]), m["read"])
                for m in doc["mailbox"]
            ],
            phase=Phase(doc["phase"]),
        )
        return session


def _fish_doc(fish: Fish | None) -> dict | None:
    if fish is None:
        return None
    return {"id": fish.fish_id, "species_id": fish.species_id, "length": fish.length}


def _fish_from_doc(doc: dict) -> Fish:
    return Fish(doc["id"], doc["species_id"], doc["length"])


# --- HTTP layer ----------------------------------------------------------


def create_app(manager: SessionManager | None = None, ui_dir: str | Path | None = None):
    """Build the FastAPI app. ``ui_dir``, when given, is served at the root."""
    from fastapi import Body, FastAPI, Request
    from fastapi.responses import JSONResponse

    app = FastAPI(title="fishery session service")
    manager = manager if manager is not None else SessionManager()
    app.state.manager = manager

    @app.exception_handler(SessionError)
    async def session_error_handler(request: Request, exc: SessionError):
        return JSONResponse(
            status_code=exc.status,
            content={"error_code": exc.code.value, "message": str(exc)},
        )

    @app.post("/api/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        if not isinstance(payload, dict):
            raise SessionError(ErrorCode.INVALID_CONFIG, "request body must be a JSON object")
        seed = payload.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise SessionError(ErrorCode.INVALID_CONFIG, "seed must be an integer")
        session = manager.create_session(
            preset=payload.get("preset"),
            specs=payload.get("specs"),
            seed=seed,
            player_name=str(payload.get("player_name", "Angler")),
            researcher_mode=bool(payload.get("researcher_mode", False)),
        )
        return {"session_id": session.session_id, "state": manager.state_view(session)}

    @app.post("/api/sessions/{session_id}/cast")
    def cast(session_id: str):
        return manager.cast(session_id)

    @app.post("/api/sessions/{session_id}/decision")
    def decide(session_id: str, payload: dict = Body(...)):
        action = payload.get("action") if isinstance(payload, dict) else None
        if action not in ("keep", "release"):
            raise SessionError(ErrorCode.INVALID_CONFIG, "action must be 'keep' or 'release'")
        return {"state": manager.decide(session_id, action)}

    @app.post("/api/sessions/{session_id}/sell")
    def sell(session_id: str, payload: dict = Body(...)):
        fish_ids = payload.get("fish_ids") if isinstance(payload, dict) else None
        if fish_ids != "all" and not isinstance(fish_ids, list):
            raise SessionError(
                ErrorCode.INVALID_CONFIG, "fish_ids must be a list of ids or 'all'"
            )
        return {"state": manager.sell(session_id, fish_ids)}

    @app.post("/api/sessions/{session_id}/end-day")
    def end_day(session_id: str):
        state, letters = manager.end_day(session_id)
        return {
            "state": state,
            "new_mail": [
                {"species_id": l.species_id, "day": l.day, "body": l.body} for l in letters
            ],
        }

    @app.get("/api/sessions/{session_id}")
    def get_state(session_id: str):
        session = manager.get(session_id)
        with session.lock:
            return {"state": manager.state_view(session)}

    @app.get("/api/sessions/{session_id}/mail")
    def get_mail(session_id: str):
        return {"letters": manager.read_mail(session_id)}

    @app.get("/api/sessions/{session_id}/stats")
    def get_stats(session_id: str):
        return {"stats": manager.stats_view(session_id)}

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def load_presets_file(path: str | Path) -> dict[str, dict]:
    """Parse a presets JSON file: {name: {specs: [...], econ?, regrowth?, context?}}."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    presets = {}
    for name, entry in doc.items():
        econ_doc = entry.get("econ", {})
        regrowth_doc = entry.get("regrowth", {})
        presets[name] = {
            "specs": [spec_from_dict(d) for d in entry["specs"]],
            "econ": EconomyParams(
                price_divisor=econ_doc.get("price_divisor", 8),
                daily_keep_limit=econ_doc.get("daily_keep_limit", 10),
            ),
            "regrowth": RegrowthMode(
                RegrowthKind(regrowth_doc.get("mode", "refill_to_cap")),
                regrowth_doc.get("births_per_day", 1),
            ),
            "context": frozenset(entry.get("context", [])),
        }
    return presets
