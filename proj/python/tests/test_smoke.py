import json
import os
from pathlib import Path

import pytest

import resumeft

SOURCE_DIR = Path(os.environ.get("RESUMEFT_SOURCE_DIR", Path(__file__).resolve().parents[2]))

RECORD = {
    "name": "Ann Lee",
    "email": "ann@example.com",
    "phone": "555-0100",
    "department": "Information Technology",
    "skills": ["Python", "SQL"],
    "experience": [],
    "education": [],
}


def test_validate_and_canonical_round_trip():
    assert resumeft.validate(RECORD) == []
    assert resumeft.validate({"name": "x"})
    text = resumeft.canonical_serialize(RECORD)
    assert resumeft.canonical_serialize(text) == text


def test_normalize_is_idempotent():
    messy = dict(RECORD, skills=[" python ", "Python", "sql"])
    once, report = resumeft.normalize_record(messy)
    twice, again = resumeft.normalize_record(once)
    assert once == twice
    assert again["skills_unified"] == 0
    assert report["skills_unified"] >= 1
    assert resumeft.normalize_date("2020-01") == "2020-01"


def test_metric_fixtures():
    assert resumeft.levenshtein_ratio("kitten", "sitting") == pytest.approx(4 / 7)
    assert resumeft.bleu("a b c d e", "a b c d e f g") == pytest.approx((5 / 7 * 4 / 6 * 3 / 5 * 2 / 4) ** 0.25)
    assert resumeft.rouge("the cat sat", "the cat")["combined"] == pytest.approx(0.7556, abs=1e-3)
    scores = resumeft.score(RECORD, RECORD)
    assert all(v == pytest.approx(1.0) for v in scores.values())
    assert resumeft.exact_match(RECORD, dict(RECORD, email="")) < 1.0


def test_split_sizes_and_lora_config(tmp_path):
    assert resumeft.split_sizes(100) == (80, 10, 10)
    assert resumeft.split_sizes(19) == (17, 1, 1)
    cfg = resumeft.lora_config("meta-llama/Llama-3.1-8B")
    assert cfg["r"] == 16 and cfg["alpha"] == 16
    assert cfg["target_modules"] == ["q_proj", "k_proj", "v_proj", "o_proj"]
    assert (cfg["batch_size"], cfg["learning_rate"], cfg["max_steps"], cfg["warmup_steps"]) == (8, 5e-5, 200, 5)
    path = tmp_path / "lora.json"
    resumeft.write_lora_config("m", str(path))
    assert json.loads(path.read_text())["base_model_id"] == "m"


def test_synth_build_exports_instruction_jsonl(tmp_path):
    generated, synthetic = resumeft.synth(str(tmp_path / "synth"), count=30, seed=3)
    assert generated == 30
    summary = resumeft.build(str(tmp_path / "ds"), synthetic_path=synthetic, seed=3)
    assert (summary["train"], summary["val"], summary["test"]) == (24, 3, 3)
    lines = (tmp_path / "ds" / "train.jsonl").read_text().splitlines()
    assert len(lines) == 24
    first = json.loads(lines[0])
    assert set(first) >= {"instruction", "input", "output"}
    assert resumeft.validate(json.loads(first["output"])) == []


def test_improvement_reproduces_table_claims():
    rows = json.loads((SOURCE_DIR / "tests" / "fixtures" / "benchmark_rows.json").read_text())

    def row(model, tag):
        r = next(r for r in rows if r["model"] == model and r["tag"] == tag)
        return {"model": model, "tag": tag, "em": r["em_pct"], "f1": r["f1_pct"],
                "bleu": r["bleu_pct"], "rouge": r["rouge_pct"]}

    imp = resumeft.improvement(row("Phi-4", "fine-tuned"), row("Phi-4", "base"))
    assert imp["f1"] == pytest.approx(27.72)
    assert imp["bleu"] == pytest.approx(142.51)
    assert imp["overall"] is None


def test_errors_are_python_exceptions(tmp_path):
    with pytest.raises(resumeft.ConfigError):
        resumeft.build(str(tmp_path / "ds"), synthetic_path=str(tmp_path / "missing.jsonl"))
    with pytest.raises(ValueError):
        resumeft.split_sizes(10, (0.5, 0.5, 0.5))
