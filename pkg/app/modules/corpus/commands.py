import asyncio
import logging

from app.core.config import config
from app.core.utils import EXIT_VERIFICATION, CommandGroup, CommandResult
from app.modules.corpus.viewmodel import corpus_viewmodel

logger = logging.getLogger("bhmirror.modules.corpus")

corpus_commands = CommandGroup("corpus")


@corpus_commands.command(
    "corpus",
    help="Run every verification check over a corpus file.",
    arguments=[(("--corpus-file",), {"default": None, "help": "corpus path (default: bundled corpus)"})],
)
def corpus(args) -> CommandResult:
    path = args.corpus_file or config.CORPUS_FILE
    logger.info(f"corpus called for: {path}")
    entries = corpus_viewmodel.load_corpus(path)
    summary = asyncio.run(corpus_viewmodel.run_corpus(entries, source=str(path)))
    if summary.total == 0:
        return CommandResult.ok("Corpus has zero entries.", summary.model_dump(), "warning: corpus has zero entries")
    text = corpus_viewmodel.render_matrix(summary)
    if summary.failed:
        failing = ", ".join(e.name for e in summary.entries if not e.passed)
        return CommandResult.fail(
            EXIT_VERIFICATION,
            f"{summary.failed} corpus entries failed.",
            details=failing,
            data=summary.model_dump(),
            text=text + f"\nfailing: {failing}",
        )
    return CommandResult.ok(f"All {summary.total} corpus entries pass.", summary.model_dump(), text)
