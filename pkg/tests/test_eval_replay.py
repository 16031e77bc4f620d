"""Record/replay round-trips through the eval driver."""

import json

from udgscan.harness.cli import main

VULN = """package p;
class App {
    void run(String cmd) {
        Runtime.getRuntime().exec(cmd);
    }
}
"""

PATCHED = VULN.replace("exec(cmd)", 'exec("fixed")')


def _dataset(tmp_path, n_pairs=2):
    lines = []
    for i in range(n_pairs):
        pid = f"pair{i}"
        v = VULN.replace("class App", f"class App{i}")
        p = PATCHED.replace("class App", f"class App{i}")
        (tmp_path / pid / "vulnerable").mkdir(parents=True)
        (tmp_path / pid / "patched").mkdir(parents=True)
        (tmp_path / pid / "vulnerable" / "App.java").write_text(v, encoding="utf-8")
        (tmp_path / pid / "patched" / "App.java").write_text(p, encoding="utf-8")
        lines.append(json.dumps({"id": pid, "vulnerable": f"{pid}/vulnerable", "patched": f"{pid}/patched"}))
    path = tmp_path / "data.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def test_eval_record_then_replay(tmp_path, capsys):
    dataset = _dataset(tmp_path)
    transcripts = tmp_path / "transcripts"
    rc = main(["eval", "--dataset", dataset, "--oracle", "mock", "--transcript", str(transcripts)])
    assert rc == 0
    recorded = capsys.readouterr().out
    # Each (pair, variant) scan records into its own transcript directory.
    assert (transcripts / "pair0" / "vulnerable" / "inference.jsonl").exists()
    assert (transcripts / "pair1" / "patched" / "inference.jsonl").exists()
    rc = main(["eval", "--dataset", dataset, "--oracle", "replay", "--transcript", str(transcripts)])
    assert rc == 0
    replayed = capsys.readouterr().out
    assert json.loads(recorded) == json.loads(replayed)
