"""``hdc`` command line: self-test, SDM benchmark, sequence and focus demos,
and the language-identification pipeline.

Every subcommand writes a JSON report (to ``--out`` when given) that echoes
its effective configuration, and prints a short human summary.
"""

from __future__ import annotations

import argparse
import base64
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import langid, selftest
from .core import FormatError, Hypervector, RandomSource
from .focus import Channel, FocusMachine
from .itemmem import Codebook
from .sdm import Sdm, SdmConfig, curve_trend, degradation_curve
from .sequence import detect_novelty, predict_next, record_autoassociative, record_history

MINI = "@mini"
DEFAULT_LOADS = (50, 100, 250, 500, 1000, 1500, 2000)


class CliError(Exception):
    pass


def _emit(args, report: dict, summary: str) -> None:
    print(summary)
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _config(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",) and not callable(v)}
    cfg.update(extra)
    return cfg


def _dim(args, default: int) -> int:
    return args.dim if args.dim is not None else default


# -- selftest ---------------------------------------------------------------


def cmd_selftest(args) -> int:
    d = _dim(args, 10_000)
    report = selftest.run_all(d, args.seed, args.cases)
    report["config"] = _config(args, dim=d)
    lines = [f"selftest D={d}: {report['passed']} passed, {report['failed']} failed, {report['skipped']} skipped"]
    for c in report["checks"]:
        status = "SKIP" if c.get("skipped") else ("PASS" if c["passed"] else "FAIL")
        lines.append(f"  {status} {c['name']} ({c['cases']} cases)")
    _emit(args, report, "\n".join(lines))
    return 0 if report["ok"] else 1


# -- sdm bench --------------------------------------------------------------


def cmd_sdm_bench(args) -> int:
    d = _dim(args, 1000)
    if args.locations < 1 or not 0 < args.target_p < 1 or args.items < 0 or args.trials < 1:
        raise CliError("need --locations >= 1, 0 < --target-p < 1, --items >= 0, --trials >= 1")
    loads = sorted({n for n in DEFAULT_LOADS if n <= args.items} | ({args.items} if args.items else set()))
    trials = []
    for t in range(args.trials):
        curve = degradation_curve(d, args.locations, args.target_p, loads, args.seed + t, args.counter_bits)
        trials.append({"seed": args.seed + t, "curve": curve, "trend": curve_trend(curve)})
    mean_curve = [
        {"items": n, "mean_similarity": float(np.mean([tr["curve"][i]["mean_similarity"] for tr in trials]))}
        for i, n in enumerate(loads)
    ]
    report = {
        "config": _config(args, dim=d, loads=loads),
        "trials": trials,
        "mean_curve": mean_curve,
        "trend": curve_trend(mean_curve),
    }
    lines = [f"sdm-bench D={d} m={args.locations} p={args.target_p}"]
    lines += [f"  n={p['items']:>5}  mean similarity {p['mean_similarity']:.4f}" for p in mean_curve]
    if not loads:
        lines.append("  (no load points)")
    _emit(args, report, "\n".join(lines))
    return 0


# -- codebook ---------------------------------------------------------------


def cmd_codebook_new(args) -> int:
    d = _dim(args, 10_000)
    symbols = [s for s in args.symbols.split(",") if s]
    cb = Codebook(d, args.seed, symbols)
    cb.save(args.file)
    _emit(args, {"config": _config(args, dim=d), "symbols": cb.symbols}, f"wrote {cb!r} to {args.file}")
    return 0


def cmd_codebook_show(args) -> int:
    cb = _load_codebook(args.file, args.dim)
    _emit(args, {"dim": cb.dim, "seed": cb.seed, "symbols": cb.symbols}, f"{cb!r}: {', '.join(cb.symbols)}")
    return 0


def _load_codebook(path, dim=None) -> Codebook:
    try:
        cb = Codebook.load(path)
    except FileNotFoundError:
        raise CliError(f"codebook {path} not found") from None
    if dim is not None and cb.dim != dim:
        raise CliError(f"codebook {path} has D={cb.dim} but --dim is {dim}")
    return cb


# -- sequence demo ----------------------------------------------------------


def _resolve(item: str, cb: Codebook | None, d: int) -> Hypervector:
    if item.startswith("b64:"):
        return Hypervector.from_packed(base64.b64decode(item[4:]), d)
    if cb is None or item not in cb:
        raise CliError(f"symbol {item!r} not in codebook")
    return cb[item]


def _load_or_new_sdm(args, d: int) -> Sdm:
    path = Path(args.sdm)
    if path.exists():
        mem = Sdm.load(path)
        if mem.dim != d:
            raise CliError(f"memory {path} has D={mem.dim} but --dim is {d}")
        return mem
    cfg = SdmConfig.from_target_p(d, args.locations, args.target_p)
    return Sdm.random(cfg, RandomSource(args.seed))


def cmd_seq_record(args) -> int:
    cb = _load_codebook(args.codebook, args.dim) if args.codebook else None
    d = cb.dim if cb else _dim(args, 1000)
    items = json.loads(Path(args.trace).read_text())
    if isinstance(items, dict):
        items = items["moments"]
    trace = [_resolve(str(x), cb, d) for x in items]
    mem = _load_or_new_sdm(args, d)
    if args.mode == "link":
        writes = record_history(mem, trace)
    else:
        writes = len([record_autoassociative(mem, v) for v in trace])
    mem.save(args.sdm)
    report = {"config": _config(args, dim=d), "writes": writes, "stats": mem.stats().as_dict()}
    _emit(args, report, f"recorded {writes} {args.mode} writes into {args.sdm}")
    return 0


def cmd_seq_predict(args) -> int:
    cb = _load_codebook(args.codebook, args.dim)
    mem = Sdm.load(args.sdm)
    if mem.dim != cb.dim:
        raise CliError(f"memory has D={mem.dim} but codebook has D={cb.dim}")
    rng = RandomSource(args.seed)
    current = _resolve(args.state, cb, cb.dim)
    steps = []
    for _ in range(args.steps):
        pred = predict_next(mem, current, rng, cb)
        if pred is None:
            steps.append({"prediction": None})
            break
        steps.append({"prediction": pred.symbol, "similarity": pred.symbol_similarity, "confidence": pred.confidence})
        current = cb[pred.symbol]
    report = {"config": _config(args, dim=cb.dim), "steps": steps}
    chain = " -> ".join([args.state] + [s["prediction"] or "(none)" for s in steps])
    _emit(args, report, chain)
    return 0


def cmd_seq_novelty(args) -> int:
    cb = _load_codebook(args.codebook, args.dim)
    mem = Sdm.load(args.sdm)
    rng = RandomSource(args.seed)
    probe = _resolve(args.state, cb, cb.dim)
    if args.flip:
        bits = probe.bits.copy()
        idx = rng.generator.choice(cb.dim, int(round(args.flip * cb.dim)), replace=False)
        bits[idx] ^= 1
        probe = Hypervector(bits)
    v = detect_novelty(mem, probe, rng, args.low, args.high)
    report = {"config": _config(args, dim=cb.dim), "verdict": v.as_dict()}
    _emit(args, report, f"{args.state} (flip {args.flip:.0%}): {v.kind.value}, similarity {v.similarity:.3f}")
    return 0


# -- focus demo -------------------------------------------------------------

CYCLE_SCENARIO = {
    "channels": {"sight": 2, "sound": 2, "touch": 1},
    "ticks": [
        {"sight": "red", "sound": "hum", "touch": "cold"},
        {"sight": "green", "sound": "click", "touch": "warm"},
        {"sight": "blue", "sound": "hiss", "touch": "soft"},
    ],
    "phases": [
        {"mode": "record", "repeat": 1, "close_cycle": True},
        {"mode": "predict", "repeat": 2},
    ],
    "memory": {"locations": 10_000, "target_p": 0.001},
}


def run_focus_scenario(scenario: dict, d: int, seed: int) -> dict:
    weights = scenario["channels"]
    symbols = sorted({s for tick in scenario["ticks"] for s in tick.values()})
    root = RandomSource(seed)
    cb = Codebook(d, seed, symbols)
    mem_cfg = scenario.get("memory", {})
    cfg = SdmConfig.from_target_p(d, mem_cfg.get("locations", 10_000), mem_cfg.get("target_p", 0.001))
    machine = FocusMachine(Sdm.random(cfg, root.derive(1)), Sdm.random(cfg, root.derive(2)), root.derive(3))
    log = []
    for phase in scenario["phases"]:
        ticks = list(scenario["ticks"])
        if phase.get("close_cycle"):
            ticks.append(ticks[0])
        for _ in range(phase.get("repeat", 1)):
            for tick in ticks:
                unknown = set(tick) - set(weights)
                if unknown:
                    raise CliError(f"tick names unknown channels {sorted(unknown)}")
                chans = [Channel(name, weights[name], cb[sym]) for name, sym in sorted(tick.items())]
                _, entry = machine.step(chans, phase["mode"])
                log.append({"mode": phase["mode"], **entry.as_dict()})
    matches = [e["prediction_match"] for e in log if e["mode"] != "record" and e["prediction_match"] is not None]
    return {
        "log": log,
        "prediction_match_min": min(matches) if matches else None,
        "prediction_match_mean": float(np.mean(matches)) if matches else None,
        "sdm_stats": machine.sdm.stats().as_dict(),
    }


def cmd_focus_demo(args) -> int:
    d = _dim(args, 1000)
    scenario = json.loads(Path(args.scenario).read_text()) if args.scenario else CYCLE_SCENARIO
    result = run_focus_scenario(scenario, d, args.seed)
    report = {"config": _config(args, dim=d), "scenario": scenario, **result}
    lines = []
    for e in result["log"]:
        match = "-" if e["prediction_match"] is None else f"{e['prediction_match']:.3f}"
        lines.append(
            f"tick {e['tick']:>3} {e['mode']:<7} focus {e['digest']}  match {match}  novelty {e['novelty'] or '-'}"
        )
    _emit(args, report, "\n".join(lines))
    return 0


# -- langid -----------------------------------------------------------------


def _corpus_path(p: str, sub: str) -> Path:
    return langid.minicorpus_dir() / sub if p == MINI else Path(p)


def _load_profiles(args):
    try:
        profiles, d, seed = langid.load_profiles(args.profiles)
    except FileNotFoundError:
        raise CliError(f"profile store {args.profiles} not found") from None
    if args.dim is not None and args.dim != d:
        raise CliError(f"profile store {args.profiles} has D={d} but --dim is {args.dim}")
    return profiles, d, seed


def cmd_langid_train(args) -> int:
    d = _dim(args, 10_000)
    corpus = _corpus_path(args.corpus, "train")
    t0 = time.perf_counter()
    texts = langid.read_training_dir(corpus)
    cb = langid.alphabet_codebook(d, args.seed)
    profiles = langid.train_profiles(texts, cb, args.fold_diacritics, args.threads)
    elapsed = time.perf_counter() - t0
    langid.save_profiles(args.profiles_out, profiles, d, args.seed)
    report = {
        "config": _config(args, dim=d, corpus=str(corpus)),
        "languages": {p.label: {"source_bytes": p.source_bytes, "trigrams": p.profile.n_added} for p in profiles},
        "wall_clock_seconds": elapsed,
    }
    print(f"trained {len(profiles)} profiles at D={d} in {elapsed:.2f}s -> {args.profiles_out}")
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_langid_eval(args) -> int:
    profiles, d, seed = _load_profiles(args)
    test_dir = _corpus_path(args.test, "test")
    cb = langid.alphabet_codebook(d, seed)
    rep = langid.evaluate(langid.read_test_dir(test_dir), profiles, cb, args.fold_diacritics)
    out = rep.as_dict()
    out["config"] = _config(args, dim=d, seed=seed, test=str(test_dir))
    out["normalization"] = "fold-diacritics" if args.fold_diacritics else "non-latin-to-space"
    out["top_confusions"] = rep.top_confusions()
    if args.report:
        Path(args.report).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    lines = [f"accuracy {rep.accuracy:.4f} on {rep.n_test} sentences ({rep.wall_clock_seconds:.2f}s)"]
    lines += [f"  {lab}: {v['accuracy']:.3f} ({v['correct']}/{v['n']})" for lab, v in rep.per_language().items()]
    _emit(args, out, "\n".join(lines))
    return 0


def cmd_langid_classify(args) -> int:
    profiles, d, seed = _load_profiles(args)
    cb = langid.alphabet_codebook(d, seed)
    prof = langid.profile_text(langid.normalize(args.text, args.fold_diacritics), cb)
    if prof.n_added == 0:
        raise CliError("text has fewer than 3 symbols after normalization")
    label, cos, ranked = langid.classify(prof, profiles)
    report = {"config": _config(args, dim=d, seed=seed), "label": label, "cosine": cos, "ranking": ranked}
    _emit(args, report, f"{label} (cosine {cos:.4f})")
    return 0


def cmd_langid_cluster(args) -> int:
    profiles, d, _ = _load_profiles(args)
    cl = langid.cluster_profiles(profiles, k=args.k, threshold=args.threshold)
    labels, sim = langid.similarity_matrix(profiles)
    report = {
        "config": _config(args, dim=d),
        "labels": labels,
        "similarity": sim.tolist(),
        "clusters": cl.clusters(),
        "linkage": cl.linkage.tolist(),
        "leaf_order": cl.leaf_order,
    }
    summary = "clusters: " + " | ".join(" ".join(c) for c in cl.clusters())
    _emit(args, report, summary)
    return 0


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--dim", type=int, default=None, help="vector width D (default depends on the command)")
    base.add_argument("--seed", type=int, default=0)
    base.add_argument("--threads", type=int, default=1)
    common = argparse.ArgumentParser(add_help=False, parents=[base])
    common.add_argument("--out", default=None, help="write the JSON report here")

    ap = argparse.ArgumentParser(prog="hdc", description="Binary hypervector tools: self-test, SDM benchmark, sequence and focus demos, language identification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selftest", parents=[common], help="run the algebra property suites")
    p.add_argument("--cases", type=int, default=1000)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("sdm-bench", parents=[common], help="similarity vs load curve")
    p.add_argument("--locations", type=int, default=10_000)
    p.add_argument("--target-p", type=float, default=0.001)
    p.add_argument("--items", type=int, default=2000)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--counter-bits", type=int, default=8, choices=(8, 16, 32))
    p.set_defaults(func=cmd_sdm_bench)

    cbp = sub.add_parser("codebook", help="create or inspect codebook files").add_subparsers(dest="action", required=True)
    p = cbp.add_parser("new", parents=[common])
    p.add_argument("file")
    p.add_argument("--symbols", required=True, help="comma-separated symbol names")
    p.set_defaults(func=cmd_codebook_new)
    p = cbp.add_parser("show", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_codebook_show)

    seq = sub.add_parser("seq", help="sequence memory demo").add_subparsers(dest="action", required=True)
    p = seq.add_parser("record", parents=[common])
    p.add_argument("--trace", required=True, help="JSON list of symbols or 'b64:' packed vectors")
    p.add_argument("--codebook")
    p.add_argument("--sdm", required=True, help="memory file (created if missing)")
    p.add_argument("--mode", choices=("link", "auto"), default="link")
    p.add_argument("--locations", type=int, default=10_000)
    p.add_argument("--target-p", type=float, default=0.001)
    p.set_defaults(func=cmd_seq_record)
    p = seq.add_parser("predict", parents=[common])
    p.add_argument("--sdm", required=True)
    p.add_argument("--codebook", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--steps", type=int, default=1)
    p.set_defaults(func=cmd_seq_predict)
    p = seq.add_parser("novelty", parents=[common])
    p.add_argument("--sdm", required=True, help="autoassociative memory file")
    p.add_argument("--codebook", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--flip", type=float, default=0.0, help="fraction of probe bits to flip")
    p.add_argument("--low", type=float, default=0.6)
    p.add_argument("--high", type=float, default=0.9)
    p.set_defaults(func=cmd_seq_novelty)

    p = sub.add_parser("focus-demo", parents=[common], help="step a focus through a scripted scenario")
    p.add_argument("--scenario", help="JSON scenario file (default: built-in 3-state cycle)")
    p.set_defaults(func=cmd_focus_demo)

    lid = sub.add_parser("langid", help="language identification").add_subparsers(dest="action", required=True)
    p = lid.add_parser("train", parents=[base])
    p.add_argument("--corpus", required=True, help=f"directory of <label>.txt, or {MINI} for the bundled corpus")
    p.add_argument("--out", dest="profiles_out", required=True, help="profile store to write")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.add_argument("--fold-diacritics", action="store_true")
    p.set_defaults(func=cmd_langid_train)
    p = lid.add_parser("eval", parents=[common])
    p.add_argument("--profiles", required=True)
    p.add_argument("--test", required=True, help=f"directory of <label>.txt, one sentence per line, or {MINI}")
    p.add_argument("--report")
    p.add_argument("--fold-diacritics", action="store_true")
    p.set_defaults(func=cmd_langid_eval)
    p = lid.add_parser("classify", parents=[common])
    p.add_argument("--profiles", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--fold-diacritics", action="store_true")
    p.set_defaults(func=cmd_langid_classify)
    p = lid.add_parser("cluster", parents=[common])
    p.add_argument("--profiles", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--threshold", type=float)
    p.set_defaults(func=cmd_langid_cluster)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, FormatError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"hdc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
