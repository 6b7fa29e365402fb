"""Command-line entry point: ``msrcgr <command> ...``.

Exit codes: 0 success, 1 validation/domain error, 2 I/O error. Errors are
written to stderr as a single JSON object.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import config as C
from .alphabet import Base, corner_table
from .cgr import (
    assemble,
    check_precision_bound,
    decode,
    decode_tokens,
    encode_multiscale,
    load_trajectory,
    trajectory_to_dict,
)
from .classify import (
    LogRegModel,
    Vocabulary,
    evaluate,
    fit_classifier,
    random_embeddings,
    read_embeddings,
    write_embeddings,
)
from .dataset import (
    generate_dataset,
    read_fasta,
    stratified_split,
    write_fasta,
    write_manifest,
)
from .errors import CorruptedTrajectoryError, DimensionError, MsrcgrError
from .features import cgr_feature_vector, feature_names, read_feature_csv, write_feature_csv
from .pipeline import FEATURE_SETS, featurize, run_repro

log = logging.getLogger("msrcgr")


def _stamp(cfg: C.RunConfig, command: str) -> dict:
    return {"format": C.FORMAT_VERSION, "command": command, "config": cfg.to_dict()}


def _stamp_line(cfg, command) -> str:
    return json.dumps(_stamp(cfg, command), separators=(",", ":"))


def _write_json(path, payload) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- commands ------------------------------------------------------------

def cmd_gen(cfg: C.RunConfig) -> int:
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    records = generate_dataset(cfg.seed, cfg.per_class)
    split = stratified_split(records, cfg.ratio, cfg.seed)
    stamp = _stamp_line(cfg, "gen")
    write_fasta(split.train, out / "train.fasta", comment=stamp)
    write_fasta(split.test, out / "test.fasta", comment=stamp)
    write_manifest(out / "manifest.json", cfg.seed, cfg.per_class, records, extra={
        "train": len(split.train), "test": len(split.test), **_stamp(cfg, "gen"),
    })
    print(f"wrote {len(split.train)} train + {len(split.test)} test records to {out}")
    return 0


def cmd_roundtrip(cfg: C.RunConfig, fasta: str | None, trajectories: list[str]) -> int:
    per_scale: dict[int, dict] = {}
    failures = []
    if fasta:
        for rec in read_fasta(fasta):
            for k in cfg.scales:
                # enforce the alphabet cap up front so it surfaces as an error
                corner_table(rec.kind, k, allow_large=cfg.override_large_alphabet)
            trajs = encode_multiscale(rec.residues, cfg.scales, base=rec.kind,
                                      allow_large=cfg.override_large_alphabet)
            for k, tr in trajs.items():
                row = per_scale.setdefault(k, {"pass": 0, "fail": 0, "max_denominator": 1,
                                               "bound_ok": True})
                rep = check_precision_bound(tr)
                row["max_denominator"] = max(row["max_denominator"], rep.max_denominator)
                row["bound_ok"] = row["bound_ok"] and rep.satisfied
                try:
                    ok = decode(tr) == rec.residues.upper()
                    err = None if ok else "decoded sequence differs"
                    step = None
                except MsrcgrError as exc:
                    ok, err, step = False, str(exc), getattr(exc, "step", None)
                row["pass" if ok else "fail"] += 1
                if not ok:
                    failures.append({"id": rec.id, "scale": k, "step": step, "error": err})
    for path in trajectories:
        tr, stored = load_trajectory(path, allow_large=cfg.override_large_alphabet)
        row = per_scale.setdefault(tr.scale, {"pass": 0, "fail": 0, "max_denominator": 1,
                                              "bound_ok": True})
        try:
            tokens = decode_tokens(tr.points, tr.corners)
            assemble(tokens)
            if stored and tokens != stored:
                step = next(i for i, (a, b) in enumerate(zip(tokens, stored), 1) if a != b)
                raise CorruptedTrajectoryError(
                    f"step {step}: decoded token differs from stored token", step=step)
            row["pass"] += 1
        except MsrcgrError as exc:
            row["fail"] += 1
            failures.append({"id": str(path), "scale": tr.scale,
                             "step": getattr(exc, "step", None), "error": str(exc)})
    report = {
        **_stamp(cfg, "roundtrip"),
        "scales": {str(k): v for k, v in sorted(per_scale.items())},
        "failures": failures,
        "ok": not failures,
    }
    _write_json(cfg.out, report)
    return 0 if not failures else 1


def cmd_featurize(cfg: C.RunConfig, fasta: str) -> int:
    records = read_fasta(fasta)
    embeddings = read_embeddings(cfg.embeddings) if cfg.embeddings else None
    vocab = None
    if "kmer" in cfg.set and cfg.vocab and Path(cfg.vocab).exists():
        vocab = Vocabulary.load(cfg.vocab)
    block, vocab_used = featurize(records, cfg.set, vocab=vocab, embeddings=embeddings,
                                  exact=not cfg.fast)
    if vocab_used is not None and vocab is None:
        vocab_path = cfg.vocab or str(Path(cfg.out or "features.csv").with_suffix(".vocab.json"))
        vocab_used.save(vocab_path)
        log.info("saved tri-mer vocabulary to %s", vocab_path)
    write_feature_csv(cfg.out or "features.csv", block.ids, [r.label for r in records],
                      block.columns, block.X, header_comment=_stamp_line(cfg, "featurize"))
    print(f"wrote {len(records)} rows x {block.width} features to {cfg.out or 'features.csv'}")
    return 0


def cmd_train(cfg: C.RunConfig, train_csv: str) -> int:
    _, labels, columns, X = read_feature_csv(train_csv)
    model = fit_classifier(X, labels, cfg.lam, max_iter=cfg.max_iter)
    payload = {**_stamp(cfg, "train"), "columns": columns, **model.to_dict()}
    _write_json(cfg.out or "model.json", payload)
    print(f"trained on {len(labels)} rows: loss={model.final_loss:.6g} "
          f"iterations={model.iterations}")
    return 0


def cmd_eval(cfg: C.RunConfig, model_path: str, test_csv: str) -> int:
    data = json.loads(Path(model_path).read_text())
    model = LogRegModel.from_dict(data)
    _, labels, columns, X = read_feature_csv(test_csv)
    if "columns" in data and data["columns"] != columns:
        raise DimensionError("test feature columns do not match the model's training columns")
    metrics = evaluate(model, X, labels)
    _write_json(cfg.out or "metrics.json", {**_stamp(cfg, "eval"), **metrics.to_dict()})
    print(f"accuracy={metrics.accuracy:.4f} f1={metrics.f1:.4f}")
    return 0


def cmd_plotdata(cfg: C.RunConfig, sequence: str) -> int:
    base = Base(cfg.kind.upper())
    trajs = encode_multiscale(sequence.upper(), cfg.scales, base=base,
                              allow_large=cfg.override_large_alphabet)
    panels = []
    for k, tr in trajs.items():
        d = trajectory_to_dict(tr)
        d["points_float"] = [list(p.to_float()) for p in tr.points]
        d["step"] = list(range(len(tr.points)))
        if tr.corners.alphabet.size <= 400:
            d["corners"] = {tok: list(c.to_float())
                            for tok, c in zip(tr.corners.alphabet.tokens, tr.corners.corners)}
        panels.append(d)
    payload = {**_stamp(cfg, "plotdata"), "sequence": sequence.upper(), "kind": base.value,
               "trajectories": panels}
    if len(sequence) >= 4 and tuple(cfg.scales) == (1, 2, 3, 4):
        vec = cgr_feature_vector(sequence.upper(), base=base)
        payload["features"] = dict(zip(feature_names(), vec.tolist()))
    _write_json(cfg.out or "-", payload)
    return 0


def cmd_repro(cfg: C.RunConfig, sets: list[str]) -> int:
    embeddings = read_embeddings(cfg.embeddings) if cfg.embeddings else None
    res = run_repro(cfg.seed, cfg.per_class, sets, cfg.lam, cfg.max_iter, embeddings,
                    cfg.embed_dim, cfg.embed_seed, exact=not cfg.fast)
    payload = {**_stamp(cfg, "repro"), "train": res.n_train, "test": res.n_test,
               "results": [r.to_dict() for r in res.results.values()]}
    _write_json(cfg.out or "-", payload)
    for r in res.results.values():
        print(f"{r.feature_set:>10}  width={r.width:<5d} acc={r.metrics.accuracy:.4f} "
              f"f1={r.metrics.f1:.4f}", file=sys.stderr)
    return 0


def cmd_random_embeddings(cfg: C.RunConfig, fasta: str) -> int:
    ids = [r.id for r in read_fasta(fasta)]
    write_embeddings(random_embeddings(ids, cfg.embed_dim, cfg.embed_seed),
                     cfg.out or "embeddings.csv")
    return 0


# --- argument parsing ----------------------------------------------------

def _common(p: argparse.ArgumentParser, *names: str) -> None:
    opts = {
        "seed": dict(type=int, help="random seed (default 42)"),
        "per_class": dict(flags=["--per-class"], type=int, help="records per class (default 1000)"),
        "scales": dict(type=C.parse_scales, help="comma-separated scales (default 1,2,3,4)"),
        "set": dict(choices=FEATURE_SETS, help="feature set (default cgr)"),
        "lam": dict(flags=["--lambda"], type=float, help="L2 strength (default 1.0)"),
        "max_iter": dict(flags=["--max-iter"], type=int, help="optimizer iterations (default 500)"),
        "embeddings": dict(help="embedding CSV (pooled or per-residue)"),
        "vocab": dict(help="tri-mer vocabulary JSON; reused if it exists, written otherwise"),
        "kind": dict(choices=["DNA", "PROTEIN", "dna", "protein"], help="sequence kind"),
        "fast": dict(action="store_const", const=True,
                     help="fixed-precision encoder for CGR features"),
        "override_large_alphabet": dict(flags=["--override-large-alphabet"], action="store_const",
                                        const=True, help="allow alphabets above 65,536 tokens"),
        "embed_dim": dict(flags=["--embed-dim"], type=int, help="random embedding width (default 320)"),
        "embed_seed": dict(flags=["--embed-seed"], type=int, help="random embedding seed"),
        "ratio": dict(type=float, help="train fraction (default 0.8)"),
    }
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--out", "-o", help="output path")
    for name in names:
        opt = dict(opts[name])
        flags = opt.pop("flags", [f"--{name}"])
        p.add_argument(*flags, dest=name, default=None, **opt)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msrcgr", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate the synthetic benchmark")
    _common(p, "seed", "per_class", "ratio")

    p = sub.add_parser("roundtrip", help="encode/decode every record at every scale")
    p.add_argument("fasta", nargs="?")
    p.add_argument("--trajectory", action="append", default=[], help="trajectory JSON to decode")
    _common(p, "scales", "override_large_alphabet")

    p = sub.add_parser("featurize", help="write a feature CSV")
    p.add_argument("fasta")
    _common(p, "set", "embeddings", "vocab", "fast")

    p = sub.add_parser("train", help="fit z-score + logistic regression")
    p.add_argument("train_csv")
    _common(p, "lam", "max_iter")

    p = sub.add_parser("eval", help="score a model on a feature CSV")
    p.add_argument("model")
    p.add_argument("test_csv")
    _common(p)

    p = sub.add_parser("plotdata", help="trajectory and feature data for plotting")
    p.add_argument("sequence")
    _common(p, "scales", "kind", "override_large_alphabet")

    p = sub.add_parser("repro", help="gen -> featurize -> train -> eval in one go")
    p.add_argument("--sets", default="kmer,cgr,kmer+cgr,embed+cgr",
                   help="comma-separated feature sets")
    _common(p, "seed", "per_class", "lam", "max_iter", "embeddings", "fast", "embed_dim",
            "embed_seed")

    p = sub.add_parser("random-embeddings", help="signal-free embedding CSV for a FASTA file")
    p.add_argument("fasta")
    _common(p, "embed_dim", "embed_seed")
    return parser


_NON_CONFIG = {"command", "verbose", "config", "fasta", "trajectory", "train_csv", "model",
               "test_csv", "sequence", "sets"}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    try:
        cfg = C.resolve(args.config, **overrides)
        if args.command == "gen":
            return cmd_gen(cfg)
        if args.command == "roundtrip":
            if not args.fasta and not args.trajectory:
                raise MsrcgrError("roundtrip needs a FASTA file and/or --trajectory files")
            return cmd_roundtrip(cfg, args.fasta, args.trajectory)
        if args.command == "featurize":
            return cmd_featurize(cfg, args.fasta)
        if args.command == "train":
            return cmd_train(cfg, args.train_csv)
        if args.command == "eval":
            return cmd_eval(cfg, args.model, args.test_csv)
        if args.command == "plotdata":
            return cmd_plotdata(cfg, args.sequence)
        if args.command == "repro":
            sets = [s.strip() for s in args.sets.split(",") if s.strip()]
            return cmd_repro(cfg, sets)
        if args.command == "random-embeddings":
            return cmd_random_embeddings(cfg, args.fasta)
    except ValueError as exc:  # includes MsrcgrError
        _report(exc)
        return 1
    except OSError as exc:
        _report(exc)
        return 2
    return 1


def _report(exc: Exception) -> None:
    err = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("step", "position", "line", "scale", "record_id"):
        val = getattr(exc, attr, None)
        if val is not None:
            err[attr] = val
    print(json.dumps(err), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
