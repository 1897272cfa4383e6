import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from sen.commands import run_eval, run_gradcheck, run_synth, run_train
from sen.config import Config, RunConfig, UsageError, resolve_run_config

logger = logging.getLogger(__name__)

Command = Callable[[argparse.Namespace, RunConfig], int]

COMMANDS: dict[str, Command] = {
    "synth": run_synth,
    "train": run_train,
    "eval": run_eval,
    "gradcheck": run_gradcheck,
}

# flag destination -> RunConfig field
_OVERRIDES = {
    "data": "data",
    "out": "out",
    "seed": "seed",
    "test_fraction": "test_fraction",
    "val_fraction": "val_fraction",
    "epochs": "max_epochs",
    "lr": "learning_rate",
    "batch_size": "batch_size",
    "patience": "patience",
    "checkpoint": "checkpoint",
    "test_only": "test_only",
    "subjects": "synth_subjects",
    "trials_per_subject": "synth_trials_per_subject",
    "channels": "synth_channels",
    "samples": "synth_samples",
    "sample_rate": "synth_sample_rate_hz",
}


class ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of exiting, so ``dispatch`` owns exit codes."""

    def error(self, message: str):
        raise UsageError(message)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Seed of every random stream")
    parser.add_argument("--config", type=Path, help="TOML file of RunConfig keys")


def _split_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--test-fraction", type=float, help="Share of subjects held out (0.2)")
    parser.add_argument("--val-fraction", type=float, help="Share of the rest for validation (0.125)")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="sen", description="Subject-independent EEG valence classification"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="Write a synthetic epoch file")
    _common(synth)
    synth.add_argument("--out", type=Path, help="Destination .eege file")
    synth.add_argument("--subjects", type=int, help="Number of subjects (20)")
    synth.add_argument("--trials-per-subject", type=int, help="Trials per subject (12)")
    synth.add_argument("--channels", type=int, help="Electrodes per trial (16)")
    synth.add_argument("--samples", type=int, help="Samples per trial (250)")
    synth.add_argument("--sample-rate", type=float, help="Sampling rate in Hz (125)")

    train = commands.add_parser("train", help="Fit the classifier and score held-out subjects")
    _common(train)
    _split_flags(train)
    train.add_argument("--data", type=Path, help="Epoch file to train on")
    train.add_argument("--out", type=Path, help="Run directory")
    train.add_argument("--epochs", type=int, help="Maximum epochs (200); must exceed --patience")
    train.add_argument("--lr", type=float, help="Adam learning rate (0.01)")
    train.add_argument("--batch-size", type=int, help="Trials per batch (16)")
    train.add_argument("--patience", type=int, help="Early-stopping patience (35); must be below --epochs")

    evaluate = commands.add_parser("eval", help="Score a checkpoint on an epoch file")
    _common(evaluate)
    _split_flags(evaluate)
    evaluate.add_argument("--data", type=Path, help="Epoch file to score")
    evaluate.add_argument("--checkpoint", type=Path, help="Checkpoint written by train")
    evaluate.add_argument("--out", type=Path, help="Also write the metrics JSON here")
    evaluate.add_argument(
        "--test-only",
        action="store_true",
        default=None,
        help="Score only the test subjects of the split drawn from --seed",
    )

    gradcheck = commands.add_parser("gradcheck", help="Finite-difference check of every layer")
    _common(gradcheck)
    return parser


def configure_logging() -> None:
    logging.basicConfig(
        stream=sys.stdout,
        level=Config.log_level(),
        format=Config.LOG_FORMAT,
        force=True,
    )


def dispatch(argv: Sequence[str]) -> int:
    """
    Run one subcommand.

    Returns:
        0 on success, 1 on a usage error, 2 on any other failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        overrides = {
            field: getattr(args, dest)
            for dest, field in _OVERRIDES.items()
            if hasattr(args, dest)
        }
        run = resolve_run_config(args.config, overrides)
        return COMMANDS[args.command](args, run)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"sen: error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        logger.debug("Traceback", exc_info=True)
        return 2


def main() -> None:
    configure_logging()
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
