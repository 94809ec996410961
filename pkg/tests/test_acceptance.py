"""End-to-end acceptance criteria, one test per criterion.

Each test records a pass/fail line that is printed in the terminal summary.
"""

import io
import time

import numpy as np
import pytest
from scipy.stats import spearmanr

from conftest import ACCEPTANCE_RESULTS
from gradcheck import numeric_grads, randomize, relative_error, straddles_kink

from dtwsse.augment import augment
from dtwsse.autoencoder import (
    GeneratorParams,
    build_decoder,
    build_encoder,
    encode_pair,
    encoder_loss,
    generate_pairs,
    reconstruction_loss_and_grads,
    siamese_loss_and_grads,
    train_decoder,
)
from dtwsse.cli import main
from dtwsse.config import METHODS, AugmentConfig, AutoencoderConfig
from dtwsse.datasets import make_imbalanced_classes, make_warped_classes
from dtwsse.dtw import brute_force_dtw, dtw_distance, dtw_with_path, is_valid_path, path_cost
from dtwsse.autoencoder import fit_autoencoder
from dtwsse.io import load_model, read_ucr, write_ucr

pytestmark = pytest.mark.slow

# seed-fixed 1-NN accuracies of the smoke pipeline, measured before freezing
BASELINE_ACCURACY = 0.94
AUGMENTED_ACCURACY = 0.91


def record(number, name, passed, detail):
    ACCEPTANCE_RESULTS.append((number, name, bool(passed), detail))
    assert passed, detail


def cli(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    assert code == 0, f"dtwsse {argv[0]} exited with {code}"
    return out.getvalue()


# -- shared runs --------------------------------------------------------------


@pytest.fixture(scope="module")
def metric_run(tmp_path_factory):
    """CLI autoencoder training on a Chinatown-scale dataset (L=24, M=1)."""
    root = tmp_path_factory.mktemp("metric")
    write_ucr(make_warped_classes(10, 24, seed=0), root / "train.tsv")
    start = time.perf_counter()
    cli("train-ae", root / "train.tsv", "--pairs", 2000, "--seed", 3, "--out", root / "model.json")
    return load_model(root / "model.json"), time.perf_counter() - start


def run_pipeline(root):
    write_ucr(make_warped_classes(10, 24, noise=0.5, warp=0.8, seed=0), root / "train.tsv")
    write_ucr(make_warped_classes(100, 24, noise=0.5, warp=0.8, seed=1), root / "test.tsv")
    start = time.perf_counter()
    cli("train-ae", root / "train.tsv", "--seed", 3, "--out", root / "model.json")
    cli("augment", root / "train.tsv", "--method", "dtwsse", "--model", root / "model.json",
        "--mult", 10, "--k", 1, "--seed", 7, "--out", root / "aug.tsv")
    elapsed = time.perf_counter() - start
    cli("augment", root / "train.tsv", "--method", "smote", "--seed", 7, "--out", root / "smote.tsv")
    before = cli("eval", root / "train.tsv", root / "test.tsv", "--metric", "dtw")
    after = cli("eval", root / "aug.tsv", root / "test.tsv", "--metric", "dtw")
    (root / "eval.txt").write_text(before + after)
    return elapsed, before, after


@pytest.fixture(scope="module")
def pipeline_run(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline")
    return root, run_pipeline(root)


def overall(report):
    return float(report.splitlines()[0].split("\t")[1])


# -- criteria -----------------------------------------------------------------


def test_01_dtw_matches_brute_force():
    rng = np.random.default_rng(1)
    worst = 0.0
    start = time.perf_counter()
    for _ in range(200):
        m = int(rng.integers(1, 3))
        a = rng.normal(size=(int(rng.integers(1, 7)), m))
        b = rng.normal(size=(int(rng.integers(1, 7)), m))
        worst = max(worst, abs(dtw_distance(a, b) - brute_force_dtw(a, b)))
    elapsed = time.perf_counter() - start
    record(1, "DTW equals brute force", worst <= 1e-9 and elapsed < 5.0,
           f"max abs error {worst:.2e} over 200 pairs in {elapsed:.2f} s")


def test_02_warping_paths_valid():
    rng = np.random.default_rng(2)
    bad = 0
    for _ in range(100):
        m = int(rng.integers(1, 4))
        a = rng.normal(size=(int(rng.integers(1, 13)), m))
        b = rng.normal(size=(int(rng.integers(1, 13)), m))
        d, path = dtw_with_path(a, b)
        ok = is_valid_path(path, len(a), len(b))
        ok = ok and abs(path_cost(a, b, path) - d) <= 1e-9 * max(1.0, d)
        ok = ok and abs(d - dtw_distance(a, b)) <= 1e-9 * max(1.0, d)
        bad += not ok
    record(2, "warping paths valid", bad == 0, f"{100 - bad}/100 paths valid and re-scored")


def test_03_gradients_match_finite_differences():
    rng = np.random.default_rng(3)
    shape = (8, 1)
    cfg = AutoencoderConfig()
    params = GeneratorParams([0.0], [1.0], [0.5])
    enc, dec = build_encoder(shape, cfg, rng), build_decoder(shape, cfg, rng)
    worst_e = worst_d = 0.0
    redrawn = 0
    for _ in range(100):
        # central differences are meaningless across a ReLU kink; redraw such points
        while True:
            pairs = generate_pairs(shape, 3, params, rng)
            X1, X2 = pairs.flat()
            randomize(enc, rng)
            randomize(dec, rng)
            X = np.vstack([X1, X2])
            if not (straddles_kink(enc, X) or straddles_kink(dec, enc(X))):
                break
            redrawn += 1
        _, g = siamese_loss_and_grads(enc, X1, X2, pairs.y)
        num = numeric_grads(lambda: encoder_loss(enc(X1), enc(X2), pairs.y), enc.parameters())
        worst_e = max(worst_e, relative_error(g, num))
        _, g = reconstruction_loss_and_grads(enc, dec, X1, X2, "decoder")
        num = numeric_grads(
            lambda: reconstruction_loss_and_grads(enc, dec, X1, X2, "decoder")[0], dec.parameters()
        )
        worst_d = max(worst_d, relative_error(g, num))
    record(3, "gradients match finite differences", worst_e < 1e-4 and worst_d < 1e-4,
           f"max relative error L_E {worst_e:.1e}, L_D {worst_d:.1e} over 100 points "
           f"({redrawn} draws redrawn for a ReLU kink within h)")


def test_04_latent_distance_ranks_like_dtw(metric_run):
    ae, elapsed = metric_run
    g = ae.training_report["generator"]
    params = GeneratorParams(g["mean"], g["std"], g["rho"])
    held_out = generate_pairs(ae.shape, 500, params, np.random.default_rng(12345))
    H1, H2 = ae.encode(held_out.s1), ae.encode(held_out.s2)
    rho = spearmanr(held_out.y, np.linalg.norm(H1 - H2, axis=1)).statistic
    raw = spearmanr(held_out.y, np.linalg.norm((held_out.s1 - held_out.s2).reshape(500, -1), axis=1)).statistic
    record(4, "latent distance ranks like DTW", rho >= 0.8 and elapsed < 300,
           f"Spearman {rho:.3f} on 500 held-out pairs (raw Euclidean {raw:.3f}), "
           f"training {elapsed:.1f} s")


def test_05_decoder_loss_drops(metric_run):
    r = metric_run[0].training_report
    ratio = r["final_decoder_loss"] / r["initial_decoder_loss"]
    record(5, "reconstruction loss drops", ratio <= 0.2,
           f"L_D {r['initial_decoder_loss']:.3g} -> {r['final_decoder_loss']:.3g} (ratio {ratio:.3f})")


def test_06_balance_is_exact():
    ds = make_imbalanced_classes([28, 40, 55, 70, 82, 125], length=8, seed=6)
    quick = AutoencoderConfig(n_pairs=200, max_epochs=5)
    models = {
        "dtwsse": fit_autoencoder(ds, quick, seed=0),
        "smote-ae": fit_autoencoder(ds, quick, seed=0, naive=True),
    }
    counts = {}
    for method in METHODS:
        out = augment(ds, AugmentConfig(method=method, expansion=10, seed=0), models.get(method))
        counts[method] = sorted(set(out.dataset.class_counts().values()))
    passed = all(c == [666] for c in counts.values())
    record(6, "balance exact", passed, "class sizes " + ", ".join(f"{m}={c}" for m, c in counts.items()))


def test_07_direct_synthetics_are_convex_combinations():
    ds = make_imbalanced_classes([28, 40, 55, 70, 82, 125], length=8, n_vars=2, seed=7)
    worst, total = 0.0, 0
    for method in ("smote", "smote-dtw"):
        for k in (1, 3):
            result = augment(ds, AugmentConfig(method=method, k=k, seed=k))
            for s in result.synthetics:
                q, e, lam = s.provenance[1:]
                worst = max(worst, float(np.max(np.abs(s.series - (ds.X[q] + lam * (ds.X[e] - ds.X[q]))))))
                total += 1
    record(7, "convex combinations", worst <= 1e-9, f"max deviation {worst:.1e} over {total} synthetics")


def test_08_weight_sharing_and_frozen_encoder(metric_run):
    ae = metric_run[0]
    rng = np.random.default_rng(8)
    shared = True
    for _ in range(20):
        x = rng.normal(size=ae.shape)
        h1, h2 = encode_pair(ae, x, x)
        shared = shared and h1.tobytes() == h2.tobytes()
    g = ae.training_report["generator"]
    pairs = generate_pairs(ae.shape, 200, GeneratorParams(g["mean"], g["std"], g["rho"]), rng)
    before = [p.tobytes() for p in ae.encoder.parameters()]
    train_decoder(ae.encoder, pairs, AutoencoderConfig(max_epochs=5), rng)
    frozen = before == [p.tobytes() for p in ae.encoder.parameters()]
    record(8, "weight sharing and frozen encoder", shared and frozen,
           f"identical halves {shared}, encoder unchanged {frozen}")


def test_09_end_to_end_smoke(pipeline_run):
    root, (elapsed, before, after) = pipeline_run
    counts = read_ucr(root / "aug.tsv").class_counts()
    acc0, acc1 = overall(before), overall(after)
    passed = (
        elapsed < 60
        and sum(counts.values()) == 200
        and counts == {"1": 100, "2": 100}
        and abs(acc1 - acc0) <= 0.10
        and abs(acc0 - BASELINE_ACCURACY) < 1e-9
        and abs(acc1 - AUGMENTED_ACCURACY) < 1e-9
    )
    record(9, "end-to-end smoke", passed,
           f"train-ae + augment {elapsed:.1f} s, counts {counts}, "
           f"1-NN accuracy {acc0:.2f} -> {acc1:.2f}")


def test_10_pipeline_is_deterministic(pipeline_run, tmp_path):
    first, _ = pipeline_run
    run_pipeline(tmp_path)
    names = ["model.json", "aug.tsv", "smote.tsv", "eval.txt"]
    same = [n for n in names if (first / n).read_bytes() == (tmp_path / n).read_bytes()]
    record(10, "deterministic outputs", same == names, f"{len(same)}/{len(names)} files byte-identical")
