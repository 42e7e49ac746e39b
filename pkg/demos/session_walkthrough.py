"""Play a few interactive days against the session service, scripted.

Drives the same HTTP/JSON API that the browser UI uses (in-process, no real
network needed). The script fishes greedily, sells each evening, and stops
on the day Demetrius's advisory letter shows up.

Run:  python3 demos/session_walkthrough.py
"""

from fastapi.testclient import TestClient

from fishery.service import SessionManager, create_app

client = TestClient(create_app(SessionManager(data_dir=None)))

resp = client.post(
    "/api/sessions",
    json={"preset": "pond", "seed": 11, "player_name": "Sam", "researcher_mode": True},
)
doc = resp.json()
sid = doc["session_id"]
print(f"new session {sid[:8]}..., money {doc['state']['money']}, day {doc['state']['day']}")

for day in range(1, 31):
    kept = released = 0
    while True:
        cast = client.post(f"/api/sessions/{sid}/cast").json()
        if cast["no_bite"]:
            break
        catch = cast["catch"]
        mean = client.get(f"/api/sessions/{sid}/stats").json()["stats"]["carp"]["mean"]
        action = "keep" if catch["length"] >= mean and catch["kept_today"] < catch["limit"] else "release"
        client.post(f"/api/sessions/{sid}/decision", json={"action": action})
        if action == "keep":
            kept += 1
            if kept == catch["limit"]:
                break
        else:
            released += 1
        if kept + released >= 30:
            break

    state = client.post(f"/api/sessions/{sid}/sell", json={"fish_ids": "all"}).json()["state"]
    end = client.post(f"/api/sessions/{sid}/end-day").json()
    stats = client.get(f"/api/sessions/{sid}/stats").json()["stats"]["carp"]
    print(
        f"day {day:>2}: kept {kept}, released {released}, "
        f"money {end['state']['money']:>5}, pond mean {stats['mean']:.1f} in"
    )
    if end["new_mail"]:
        print()
        print("You've got mail:")
        print()
        print("  " + end["new_mail"][0]["body"])
        break
else:
    print("no advisory letter within 30 days; try keeping more aggressively")
