import json

import pytest

from conftest import parse_and_build

from udgscan.context.holistic import holistic_context
from udgscan.context.sinks import find_sensitive_invocations
from udgscan.enhance.oracle import MockResolutionOracle
from udgscan.enhance.pipeline import enhance_graph
from udgscan.errors import AllRoundsFailed
from udgscan.knowledge import load_starter_kb
from udgscan.reasoning.clients import MockInferenceClient, TranscriptRecorder, TranscriptReplayClient
from udgscan.reasoning.prompt import STEP_HEADERS, build_detection_prompt
from udgscan.reasoning.votes import aggregate_votes, parse_verdict, query_rounds

YES = json.dumps({"explanation": "tainted path", "is_vulnerable": True})
NO = json.dumps({"explanation": "sanitized", "is_vulnerable": False})


def el_context(el_repo):
    model, g, diags = parse_and_build(el_repo)
    result = enhance_graph(model, g, MockResolutionOracle(), diags)
    kb = load_starter_kb()
    inv = find_sensitive_invocations(result.graph, model, kb)[0]
    return holistic_context(result.graph, model, inv), inv, kb


def test_prompt_contains_context_and_guideline(el_repo):
    ctx, inv, kb = el_context(el_repo)
    prompt = build_detection_prompt(ctx, (inv.api, "CWE-74"), kb)
    for header in STEP_HEADERS:
        assert header in prompt.text
    assert "expert security auditor for Java" in prompt.text
    assert "critically review your reasoning" in prompt.text
    guideline = kb.guidelines["CWE-74"]
    assert guideline.vuln_patterns in prompt.text
    assert guideline.defense_knowledge in prompt.text
    # Context lines (sanitizer body and globals) are embedded.
    assert "ESCAPE_PATTERN" in prompt.text
    assert "18|" in prompt.text


def test_prompt_has_no_unfilled_placeholders(el_repo):
    ctx, inv, kb = el_context(el_repo)
    prompt = build_detection_prompt(ctx, (inv.api, "CWE-74"), kb)
    assert prompt.unfilled_placeholders() == []


def test_parse_verdict_plain():
    v = parse_verdict('{"explanation":"...","is_vulnerable":false}')
    assert v.parse_ok and v.is_vulnerable is False


def test_parse_verdict_fenced_with_prose():
    text = "Reasoning first.\n```json\n{\"explanation\": \"x\", \"is_vulnerable\": true}\n```\ntrailing"
    v = parse_verdict(text)
    assert v.parse_ok and v.is_vulnerable is True and v.explanation == "x"


def test_parse_verdict_last_object_wins():
    text = '{"is_vulnerable": true} later I changed my mind {"is_vulnerable": false, "explanation": "final"}'
    v = parse_verdict(text)
    assert v.parse_ok and v.is_vulnerable is False


def test_parse_verdict_non_boolean_fails():
    v = parse_verdict('{"is_vulnerable": "yes"}')
    assert not v.parse_ok


def test_parse_verdict_no_json_fails():
    assert not parse_verdict("definitely vulnerable!").parse_ok


def test_query_rounds_fixed_mock(el_repo):
    ctx, inv, kb = el_context(el_repo)
    prompt = build_detection_prompt(ctx, (inv.api, "CWE-74"), kb)
    votes = query_rounds(MockInferenceClient(script=[NO, NO, NO]), prompt, 3)
    assert [v.is_vulnerable for v in votes] == [False, False, False]


def test_query_rounds_alternating(el_repo):
    ctx, inv, kb = el_context(el_repo)
    prompt = build_detection_prompt(ctx, (inv.api, "CWE-74"), kb)
    votes = query_rounds(MockInferenceClient(script=[YES, NO, YES]), prompt, 3)
    assert sum(1 for v in votes if v.is_vulnerable) == 2


def test_query_rounds_prose_round_excluded(el_repo):
    ctx, inv, kb = el_context(el_repo)
    prompt = build_detection_prompt(ctx, (inv.api, "CWE-74"), kb)
    votes = query_rounds(MockInferenceClient(script=[YES, "no json, just prose", YES]), prompt, 3)
    assert [v.parse_ok for v in votes] == [True, False, True]
    agg = aggregate_votes(votes, 3)
    assert agg.final is True and agg.low_confidence


def test_query_rounds_requires_odd():
    with pytest.raises(ValueError):
        query_rounds(MockInferenceClient(), None, 2)


def test_aggregate_majority():
    votes = [parse_verdict(YES), parse_verdict(YES), parse_verdict(NO)]
    agg = aggregate_votes(votes, 3)
    assert agg.final is True
    assert agg.confidence == pytest.approx(2 / 3)


def test_aggregate_unanimous():
    votes = [parse_verdict(NO)] * 3
    agg = aggregate_votes(votes, 3)
    assert agg.final is False and agg.confidence == 1.0 and not agg.low_confidence


def test_aggregate_tie_breaks_vulnerable():
    votes = [parse_verdict(YES), parse_verdict(NO), parse_verdict("garbage")]
    agg = aggregate_votes(votes, 3)
    assert agg.final is True and agg.low_confidence


def test_aggregate_all_failed():
    votes = [parse_verdict("x"), parse_verdict("y"), parse_verdict("z")]
    with pytest.raises(AllRoundsFailed):
        aggregate_votes(votes, 3)


def test_aggregation_permutation_invariant():
    import itertools

    base = [parse_verdict(YES), parse_verdict(NO), parse_verdict(YES)]
    outcomes = set()
    for perm in itertools.permutations(base):
        agg = aggregate_votes(list(perm), 3)
        outcomes.add((agg.final, round(agg.confidence, 9)))
    assert len(outcomes) == 1


def test_transcript_replay_bit_exact(el_repo, tmp_path):
    ctx, inv, kb = el_context(el_repo)
    prompt = build_detection_prompt(ctx, (inv.api, "CWE-74"), kb)
    recorder = TranscriptRecorder(MockInferenceClient(script=[NO, YES, NO]))
    first = query_rounds(recorder, prompt, 3)
    path = tmp_path / "inference.jsonl"
    recorder.save(str(path))
    replay = TranscriptReplayClient(str(path))
    second = query_rounds(replay, prompt, 3)
    assert [v.raw for v in first] == [v.raw for v in second]
