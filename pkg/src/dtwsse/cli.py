"""Command-line interface: ``dtwsse {dtw,train-ae,augment,eval}``.

Exit status is 0 on success, 1 on a usage error and 2 on a data or model
error.
"""

import argparse
import logging
import sys

from .augment import augment
from .autoencoder import fit_autoencoder
from .config import METHODS, AugmentConfig, AutoencoderConfig
from .dtw import dtw_distance
from .evaluation import eval_1nn
from .exceptions import DatasetError, ModelFormatError, TrainingDivergedError
from .io import load_model, read_ucr, save_model, write_ucr

logger = logging.getLogger("dtwsse")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _delimiter(text):
    table = {"tab": "\t", "\\t": "\t", "\t": "\t", "comma": ",", ",": ","}
    if text not in table:
        raise argparse.ArgumentTypeError("delimiter must be 'tab' or 'comma'")
    return table[text]


def build_parser():
    parser = _Parser(prog="dtwsse", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("dtw", help="print DTW distances between the samples of two files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--vars", type=int, default=1, metavar="M")

    p = sub.add_parser("train-ae", help="train an autoencoder on generated pairs")
    p.add_argument("train_file")
    p.add_argument("--vars", type=int, default=1, metavar="M")
    p.add_argument("--pairs", type=int, default=2000)
    p.add_argument("--latent-mult", type=int, default=10)
    p.add_argument("--hidden-mult", type=int, default=4)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--max-epochs", type=int, default=500)
    p.add_argument(
        "--rho",
        type=float,
        default=None,
        help="lag-1 autocorrelation of generated pairs (default: estimated; 0 = i.i.d.)",
    )
    p.add_argument("--naive", action="store_true", help="reconstruction-only training")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("augment", help="oversample a dataset file")
    p.add_argument("train_file")
    p.add_argument("--vars", type=int, default=1, metavar="M")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--model")
    p.add_argument("--mult", type=float, default=10.0, help="expansion multiplier T")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--delimiter", type=_delimiter, default="\t")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="1-NN accuracy of a test file against a train file")
    p.add_argument("train_file")
    p.add_argument("test_file")
    p.add_argument("--vars", type=int, default=1, metavar="M")
    p.add_argument("--metric", choices=("dtw", "euclidean"), default="dtw")
    return parser


def _cmd_dtw(args, out):
    a = read_ucr(args.file_a, args.vars)
    b = read_ucr(args.file_b, args.vars)
    for x in a.X:
        out.write("\t".join(f"{dtw_distance(x, z):.17g}" for z in b.X) + "\n")


def _cmd_train_ae(args, out):
    ds = read_ucr(args.train_file, args.vars)
    config = AutoencoderConfig(
        n_pairs=args.pairs,
        latent_mult=args.latent_mult,
        hidden_mult=args.hidden_mult,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        max_epochs=args.max_epochs,
        temporal_correlation=args.rho,
    )
    ae = fit_autoencoder(ds, config, seed=args.seed, naive=args.naive)
    save_model(ae, args.out)
    report = ae.training_report
    if not args.naive:
        out.write(
            f"encoder: L_E {report['initial_encoder_loss']:.6g} -> "
            f"{report['final_encoder_loss']:.6g} in {report['encoder_epochs']} epochs\n"
        )
    out.write(
        f"decoder: L_D {report['initial_decoder_loss']:.6g} -> "
        f"{report['final_decoder_loss']:.6g} in {report['decoder_epochs']} epochs\n"
    )


def _cmd_augment(args, out):
    needs_model = args.method in ("dtwsse", "smote-ae")
    if needs_model and not args.model:
        raise UsageError(f"--method {args.method} requires --model")
    ds = read_ucr(args.train_file, args.vars)
    ae = None
    if needs_model:
        ae = load_model(args.model)
        procedure = ae.training_report.get("procedure")
        expected = "naive" if args.method == "smote-ae" else "siamese"
        if procedure not in (None, expected):
            logger.warning(
                "model was trained with the %s procedure; %s expects %s",
                procedure,
                args.method,
                expected,
            )
    config = AugmentConfig(expansion=args.mult, k=args.k, method=args.method, seed=args.seed)
    result = augment(ds, config, ae)
    write_ucr(result.dataset, args.out, args.delimiter)
    counts = result.dataset.class_counts()
    out.write(
        f"wrote {result.dataset.n_samples} samples ({len(result.synthetics)} synthetic): "
        + ", ".join(f"{k}={v}" for k, v in counts.items())
        + "\n"
    )


def _cmd_eval(args, out):
    train = read_ucr(args.train_file, args.vars)
    test = read_ucr(args.test_file, args.vars)
    acc = eval_1nn(train, test, args.metric)
    out.write(f"overall\t{acc.overall:.6f}\n")
    for label, value in acc.per_class.items():
        out.write(f"{label}\t{value:.6f}\n")


COMMANDS = {
    "dtw": _cmd_dtw,
    "train-ae": _cmd_train_ae,
    "augment": _cmd_augment,
    "eval": _cmd_eval,
}


def main(argv=None, out=None):
    """Run the CLI and return its exit status."""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"dtwsse {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, ModelFormatError, TrainingDivergedError, ValueError, OSError) as exc:
        print(f"dtwsse {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
