"""Interactive session service: game flow, error contract, persistence."""

import random

import pytest
from fastapi.testclient import TestClient

from fishery.core import to_canonical_json
from fishery.service import SessionManager, create_app

LETTER_FOR = (
    "Dear {player}, I was conducting a field study on {fish} the other day, "
    "and I discovered that the population is in decline. To prevent a fishery "
    "collapse, please release any large {fish} you catch until the population "
    "is stable again. -{sender}"
)


@pytest.fixture()
def client(tmp_path):
    manager = SessionManager(data_dir=tmp_path / "sessions")
    app = create_app(manager)
    with TestClient(app) as c:
        c.manager = manager
        yield c


def tiny_specs(**overrides):
    spec = dict(
        species_id="minnow",
        name="Minnow",
        base_price=10,
        min_length=10.0,
        max_length=20.0,
        population_cap=4,
        initial_count=4,
    )
    spec.update(overrides)
    return [spec]


def new_session(client, **kwargs):
    payload = {"preset": "pond", "seed": 1, "player_name": "Ada"}
    payload.update(kwargs)
    resp = client.post("/api/sessions", json=payload)
    assert resp.status_code == 201, resp.text
    doc = resp.json()
    return doc["session_id"], doc["state"]


def session_fingerprint(client, sid):
    session = client.manager.get(sid)
    return (
        to_canonical_json(session.fishery),
        session.money,
        session.kept_today,
        tuple(f.fish_id for f in session.inventory),
        session.pending_catch.fish_id if session.pending_catch else None,
        tuple((m.letter.body, m.read) for m in session.mailbox),
    )


# --- create ---------------------------------------------------------------------


def test_create_default_state(client):
    _, state = new_session(client)
    assert state["money"] == 0
    assert state["kept_today"] == 0
    assert state["limit"] == 10
    assert state["day"] == 0
    assert state["inventory"] == []
    assert state["pending"] is None
    assert state["unread_mail"] == 0


def test_create_same_seed_identical_views(client):
    _, a = new_session(client, seed=123)
    _, b = new_session(client, seed=123)
    assert a == b


def test_create_unknown_preset_404(client):
    resp = client.post("/api/sessions", json={"preset": "abyss", "seed": 1})
    assert resp.status_code == 404
    assert resp.json()["error_code"] == "NOT_FOUND"


def test_create_invalid_specs_422(client):
    bad = tiny_specs(min_length=30.0)  # min above max
    resp = client.post("/api/sessions", json={"specs": bad, "seed": 1})
    assert resp.status_code == 422
    assert resp.json()["error_code"] == "INVALID_CONFIG"


def test_create_needs_exactly_one_of_preset_or_specs(client):
    assert client.post("/api/sessions", json={"seed": 1}).status_code == 422
    assert (
        client.post(
            "/api/sessions", json={"seed": 1, "preset": "pond", "specs": tiny_specs()}
        ).status_code
        == 422
    )


def test_researcher_stats_gating(client):
    sid_plain, state_plain = new_session(client, researcher_mode=False)
    sid_res, state_res = new_session(client, researcher_mode=True)
    assert "stats" not in state_plain
    assert "stats" in state_res
    assert client.get(f"/api/sessions/{sid_plain}/stats").status_code == 403
    resp = client.get(f"/api/sessions/{sid_res}/stats")
    assert resp.status_code == 200
    assert resp.json()["stats"]["carp"]["count"] == 200


def test_plain_session_never_leaks_stats(client):
    # Replay a whole session; no view may carry the researcher extras.
    sid, state = new_session(client, researcher_mode=False, seed=9)
    views = [state]
    for _ in range(15):
        doc = client.post(f"/api/sessions/{sid}/cast").json()
        if doc["no_bite"]:
            break
        views.append(client.post(
            f"/api/sessions/{sid}/decision", json={"action": "release"}
        ).json()["state"])
    end = client.post(f"/api/sessions/{sid}/end-day").json()
    views.append(end["state"])
    views.append(client.get(f"/api/sessions/{sid}").json()["state"])
    assert all("stats" not in v for v in views)


# --- cast / decide -----------------------------------------------------------------


def test_cast_produces_pending_catch(client):
    sid, _ = new_session(client)
    doc = client.post(f"/api/sessions/{sid}/cast").json()
    assert doc["no_bite"] is False
    catch = doc["catch"]
    assert set(catch) == {
        "id", "species", "length", "price", "kept_today", "limit", "advisory_active",
    }
    state = client.get(f"/api/sessions/{sid}").json()["state"]
    assert state["pending"]["id"] == catch["id"]


def test_cast_twice_without_deciding_conflicts(client):
    sid, _ = new_session(client)
    client.post(f"/api/sessions/{sid}/cast")
    before = session_fingerprint(client, sid)
    resp = client.post(f"/api/sessions/{sid}/cast")
    assert resp.status_code == 409
    assert resp.json()["error_code"] == "PENDING_DECISION"
    assert session_fingerprint(client, sid) == before


def test_cast_empty_fishery_no_bite_no_change(client):
    sid, _ = new_session(
        client, preset=None, specs=tiny_specs(population_cap=1, initial_count=1)
    )
    client.post(f"/api/sessions/{sid}/cast")
    client.post(f"/api/sessions/{sid}/decision", json={"action": "keep"})
    client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": "all"})
    before = session_fingerprint(client, sid)
    doc = client.post(f"/api/sessions/{sid}/cast").json()
    assert doc == {"no_bite": True, "catch": None}
    assert session_fingerprint(client, sid) == before


def test_decide_without_pending_conflicts(client):
    sid, _ = new_session(client)
    before = session_fingerprint(client, sid)
    resp = client.post(f"/api/sessions/{sid}/decision", json={"action": "keep"})
    assert resp.status_code == 409
    assert resp.json()["error_code"] == "NO_PENDING"
    assert session_fingerprint(client, sid) == before


def test_keep_moves_fish_to_inventory(client):
    sid, _ = new_session(client)
    catch = client.post(f"/api/sessions/{sid}/cast").json()["catch"]
    state = client.post(
        f"/api/sessions/{sid}/decision", json={"action": "keep"}
    ).json()["state"]
    assert state["kept_today"] == 1
    assert [f["id"] for f in state["inventory"]] == [catch["id"]]
    assert state["pending"] is None


def test_keep_at_limit_blocked_until_release(client):
    sid, _ = new_session(client)
    kept = 0
    while kept < 10:
        doc = client.post(f"/api/sessions/{sid}/cast").json()
        assert not doc["no_bite"]
        state = client.post(
            f"/api/sessions/{sid}/decision", json={"action": "keep"}
        ).json()["state"]
        kept = state["kept_today"]
    client.post(f"/api/sessions/{sid}/cast")
    before = session_fingerprint(client, sid)
    resp = client.post(f"/api/sessions/{sid}/decision", json={"action": "keep"})
    assert resp.status_code == 409
    assert resp.json()["error_code"] == "LIMIT_REACHED"
    assert session_fingerprint(client, sid) == before
    # The fish is still pending, so the forced path is release.
    state = client.post(
        f"/api/sessions/{sid}/decision", json={"action": "release"}
    ).json()["state"]
    assert state["pending"] is None
    assert state["kept_today"] == 10


def test_decide_requires_valid_action(client):
    sid, _ = new_session(client)
    client.post(f"/api/sessions/{sid}/cast")
    resp = client.post(f"/api/sessions/{sid}/decision", json={"action": "eat"})
    assert resp.status_code == 422
    assert resp.json()["error_code"] == "INVALID_CONFIG"


def test_cast_release_loop_preserves_population(client):
    sid, _ = new_session(client, preset=None, specs=tiny_specs(), seed=5)
    session = client.manager.get(sid)
    initial = sorted((f.fish_id, f.length) for f in session.fishery.all_fish())
    for _ in range(1000):
        doc = client.post(f"/api/sessions/{sid}/cast").json()
        assert not doc["no_bite"]
        client.post(f"/api/sessions/{sid}/decision", json={"action": "release"})
    assert sorted((f.fish_id, f.length) for f in session.fishery.all_fish()) == initial


# --- sell ------------------------------------------------------------------------


def test_sell_all_of_empty_inventory(client):
    sid, _ = new_session(client)
    state = client.post(
        f"/api/sessions/{sid}/sell", json={"fish_ids": "all"}
    ).json()["state"]
    assert state["money"] == 0


def test_sell_single_fish_price(client):
    # Bounds chosen so floor(length / 8) is always 3: price is 100 + 3.
    sid, _ = new_session(
        client,
        preset=None,
        specs=tiny_specs(base_price=100, min_length=24.0, max_length=24.8,
                         population_cap=1, initial_count=1),
    )
    client.post(f"/api/sessions/{sid}/cast")
    state = client.post(
        f"/api/sessions/{sid}/decision", json={"action": "keep"}
    ).json()["state"]
    fid = state["inventory"][0]["id"]
    assert state["inventory"][0]["price"] == 103
    state = client.post(
        f"/api/sessions/{sid}/sell", json={"fish_ids": [fid]}
    ).json()["state"]
    assert state["money"] == 103
    assert state["inventory"] == []


def test_sell_same_id_twice_404(client):
    sid, _ = new_session(client)
    client.post(f"/api/sessions/{sid}/cast")
    state = client.post(
        f"/api/sessions/{sid}/decision", json={"action": "keep"}
    ).json()["state"]
    fid = state["inventory"][0]["id"]
    assert client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": [fid]}).status_code == 200
    before = session_fingerprint(client, sid)
    resp = client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": [fid]})
    assert resp.status_code == 404
    assert resp.json()["error_code"] == "NOT_FOUND"
    assert session_fingerprint(client, sid) == before


def test_sold_fish_never_return_to_water(client):
    sid, _ = new_session(client, preset=None, specs=tiny_specs(), seed=2)
    session = client.manager.get(sid)
    client.post(f"/api/sessions/{sid}/cast")
    state = client.post(
        f"/api/sessions/{sid}/decision", json={"action": "keep"}
    ).json()["state"]
    fid = state["inventory"][0]["id"]
    client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": [fid]})
    assert fid not in {f.fish_id for f in session.fishery.all_fish()}
    assert len(list(session.fishery.all_fish())) == 3


# --- end day / mail ------------------------------------------------------------------


def test_end_day_healthy_population_no_mail(client):
    sid, _ = new_session(client)
    doc = client.post(f"/api/sessions/{sid}/end-day").json()
    assert doc["state"]["day"] == 1
    assert doc["new_mail"] == []
    assert doc["state"]["unread_mail"] == 0


def test_end_day_with_pending_catch_blocked(client):
    sid, _ = new_session(client)
    client.post(f"/api/sessions/{sid}/cast")
    before = session_fingerprint(client, sid)
    resp = client.post(f"/api/sessions/{sid}/end-day")
    assert resp.status_code == 409
    assert resp.json()["error_code"] == "PENDING_DECISION"
    assert session_fingerprint(client, sid) == before


def test_end_day_resets_daily_keep_count(client):
    sid, _ = new_session(client)
    doc = client.post(f"/api/sessions/{sid}/cast").json()
    client.post(f"/api/sessions/{sid}/decision", json={"action": "keep"})
    state = client.post(f"/api/sessions/{sid}/end-day").json()["state"]
    assert state["kept_today"] == 0
    assert state["day"] == 1


def test_advisory_letter_delivered_verbatim(client):
    # Threshold pinned at the top of the range: the first morning check finds
    # the mean below it and Demetrius writes in.
    sid, _ = new_session(
        client,
        preset=None,
        specs=tiny_specs(advisory_threshold=20.0),
        seed=4,
        player_name="Ada",
    )
    doc = client.post(f"/api/sessions/{sid}/end-day").json()
    assert len(doc["new_mail"]) == 1
    expected = LETTER_FOR.format(player="Ada", fish="Minnow", sender="Demetrius")
    assert doc["new_mail"][0]["body"] == expected
    assert doc["state"]["unread_mail"] == 1

    # Still depressed the next day: no duplicate letter.
    doc2 = client.post(f"/api/sessions/{sid}/end-day").json()
    assert doc2["new_mail"] == []
    assert doc2["state"]["unread_mail"] == 1

    letters = client.get(f"/api/sessions/{sid}/mail").json()["letters"]
    assert [l["body"] for l in letters] == [expected]
    assert letters[0]["read"] is False  # snapshot of the pre-read flag
    assert client.get(f"/api/sessions/{sid}").json()["state"]["unread_mail"] == 0


def test_mailbox_empty_after_create(client):
    sid, _ = new_session(client)
    assert client.get(f"/api/sessions/{sid}/mail").json()["letters"] == []


def test_catch_view_flags_advisory(client):
    sid, _ = new_session(
        client, preset=None, specs=tiny_specs(advisory_threshold=20.0), seed=4
    )
    client.post(f"/api/sessions/{sid}/end-day")
    catch = client.post(f"/api/sessions/{sid}/cast").json()["catch"]
    assert catch["advisory_active"] is True


# --- reads are side-effect free --------------------------------------------------------


def test_get_state_is_side_effect_free(client):
    sid, _ = new_session(client)
    client.post(f"/api/sessions/{sid}/cast")
    a = client.get(f"/api/sessions/{sid}")
    b = client.get(f"/api/sessions/{sid}")
    assert a.content == b.content


def test_unknown_session_404(client):
    for call in (
        lambda: client.get("/api/sessions/nope"),
        lambda: client.post("/api/sessions/nope/cast"),
        lambda: client.post("/api/sessions/nope/decision", json={"action": "keep"}),
        lambda: client.post("/api/sessions/nope/sell", json={"fish_ids": "all"}),
        lambda: client.post("/api/sessions/nope/end-day"),
        lambda: client.get("/api/sessions/nope/mail"),
    ):
        resp = call()
        assert resp.status_code == 404
        assert resp.json()["error_code"] == "NOT_FOUND"


# --- isolation and conservation ----------------------------------------------------------


def test_interleaved_sessions_match_solo_runs(client):
    def run_script(sid):
        views = []
        for _ in range(6):
            doc = client.post(f"/api/sessions/{sid}/cast").json()
            views.append(doc)
            if not doc["no_bite"]:
                views.append(
                    client.post(
                        f"/api/sessions/{sid}/decision", json={"action": "keep"}
                    ).json()
                )
        views.append(client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": "all"}).json())
        views.append(client.post(f"/api/sessions/{sid}/end-day").json())
        return views

    solo_a, _ = new_session(client, seed=71)
    expected_a = run_script(solo_a)
    solo_b, _ = new_session(client, seed=72)
    expected_b = run_script(solo_b)

    # Same scripts, interleaved request by request across two fresh sessions.
    sid_a, _ = new_session(client, seed=71)
    sid_b, _ = new_session(client, seed=72)
    got_a, got_b = [], []
    for _ in range(6):
        doc_a = client.post(f"/api/sessions/{sid_a}/cast").json()
        doc_b = client.post(f"/api/sessions/{sid_b}/cast").json()
        got_a.append(doc_a)
        got_b.append(doc_b)
        if not doc_a["no_bite"]:
            got_a.append(
                client.post(f"/api/sessions/{sid_a}/decision", json={"action": "keep"}).json()
            )
        if not doc_b["no_bite"]:
            got_b.append(
                client.post(f"/api/sessions/{sid_b}/decision", json={"action": "keep"}).json()
            )
    got_a.append(client.post(f"/api/sessions/{sid_a}/sell", json={"fish_ids": "all"}).json())
    got_b.append(client.post(f"/api/sessions/{sid_b}/sell", json={"fish_ids": "all"}).json())
    got_a.append(client.post(f"/api/sessions/{sid_a}/end-day").json())
    got_b.append(client.post(f"/api/sessions/{sid_b}/end-day").json())
    assert got_a == expected_a
    assert got_b == expected_b


def test_api_fuzz_conserves_fish_and_limit(client):
    sid, _ = new_session(client, preset=None, specs=tiny_specs(population_cap=6), seed=31)
    session = client.manager.get(sid)
    expected_ids = {f.fish_id for f in session.fishery.all_fish()}
    rnd = random.Random(404)
    for _ in range(400):
        op = rnd.choice(["cast", "keep", "release", "sell", "end_day", "state"])
        if op == "cast":
            client.post(f"/api/sessions/{sid}/cast")
        elif op in ("keep", "release"):
            client.post(f"/api/sessions/{sid}/decision", json={"action": op})
        elif op == "sell":
            sold_before = {f.fish_id for f in session.inventory}
            client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": "all"})
            expected_ids -= sold_before
        elif op == "end_day":
            before = {f.fish_id for f in session.fishery.all_fish()}
            resp = client.post(f"/api/sessions/{sid}/end-day")
            if resp.status_code == 200:
                expected_ids |= {f.fish_id for f in session.fishery.all_fish()} - before
        else:
            state = client.get(f"/api/sessions/{sid}").json()["state"]
            assert state["kept_today"] <= state["limit"]
        in_water = [f.fish_id for f in session.fishery.all_fish()]
        held = [f.fish_id for f in session.inventory]
        pending = [session.pending_catch.fish_id] if session.pending_catch else []
        combined = in_water + held + pending
        assert len(combined) == len(set(combined))
        assert set(combined) == expected_ids
        assert session.kept_today <= session.econ.daily_keep_limit


# --- persistence --------------------------------------------------------------------------


def test_session_resumes_from_snapshot(tmp_path):
    data_dir = tmp_path / "sessions"
    manager = SessionManager(data_dir=data_dir)
    with TestClient(create_app(manager)) as client:
        resp = client.post(
            "/api/sessions", json={"preset": "pond", "seed": 11, "player_name": "Ada"}
        )
        sid = resp.json()["session_id"]
        client.post(f"/api/sessions/{sid}/cast")
        client.post(f"/api/sessions/{sid}/decision", json={"action": "keep"})
        client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": "all"})
        parting = client.get(f"/api/sessions/{sid}").json()

    # Fresh manager over the same directory: the session is fully restored.
    revived = SessionManager(data_dir=data_dir)
    with TestClient(create_app(revived)) as client2:
        restored = client2.get(f"/api/sessions/{sid}").json()
        assert restored == parting
        # And it keeps playing deterministically from where it left off.
        doc = client2.post(f"/api/sessions/{sid}/cast").json()
        assert not doc["no_bite"]


def test_snapshot_preserves_fish_id_counter(tmp_path):
    data_dir = tmp_path / "sessions"
    manager = SessionManager(data_dir=data_dir)
    session = manager.create_session(preset="pond", seed=3)
    sid = session.session_id
    manager.cast(sid)
    manager.decide(sid, "keep")
    manager.sell(sid, "all")  # id of the sold fish must stay retired
    counter = session.fishery.next_fish_id

    revived = SessionManager(data_dir=data_dir).get(sid)
    assert revived.fishery.next_fish_id == counter
