# Console feedback used by long running operations and the CLI.
#
# Mirrors the processing-feedback surface (pushConsoleInfo / pushWarning /
# isCanceled) so library functions can log progress without knowing where the
# messages end up.

import logging
import sys

LOGGER_NAME = "quantum_network_code"

logger = logging.getLogger(LOGGER_NAME)


def configure_logging(verbose: bool = False):
    """
    Attaches a stderr handler to the package logger.

    Args:
        verbose: DEBUG level when True, WARNING otherwise.
    """
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def console_shows(level: int) -> bool:
    """True when a stderr/stdout handler on the package logger already prints `level` records."""
    if not logger.isEnabledFor(level):
        return False
    return any(isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler) and h.level <= level
               for h in logger.handlers)


class ConsoleFeedback:
    """Collects progress messages, forwards them to logging and optionally stdout."""

    def __init__(self, echo: bool = False, stream=None):
        self.echo = echo
        self.stream = stream or sys.stdout
        self.messages = []
        self.warnings = []
        self._canceled = False

    def pushConsoleInfo(self, msg):
        self.messages.append(msg)
        logger.info(msg)
        # echo only what the console handler drops
        if self.echo and not console_shows(logging.INFO):
            print(msg, file=self.stream)

    def pushWarning(self, msg):
        self.warnings.append(msg)
        logger.warning(msg)
        if self.echo and not console_shows(logging.WARNING):
            print(f"⚠ {msg}", file=self.stream)

    def cancel(self):
        self._canceled = True

    def isCanceled(self):
        return self._canceled


class NullFeedback:
    """Feedback sink used when the caller passes none."""

    def pushConsoleInfo(self, msg):
        logger.debug(msg)

    def pushWarning(self, msg):
        logger.debug(msg)

    def isCanceled(self):
        return False


def ensure_feedback(feedback):
    return feedback if feedback is not None else NullFeedback()
