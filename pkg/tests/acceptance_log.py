"""Shared record of acceptance outcomes, printed by conftest at the end of a run."""
import functools

# criterion number -> (title, passed, detail)
ACCEPTANCE = {}


def criterion(number, title):
    """Record the outcome of an acceptance test for the end-of-run summary."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                ACCEPTANCE[number] = (title, False, str(exc).splitlines()[0] if str(exc) else type(exc).__name__)
                raise
            ACCEPTANCE[number] = (title, True, detail or "")

        return run

    return wrap
