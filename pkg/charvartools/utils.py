import datetime
import os
import pathlib
import sys
import traceback
from inspect import getframeinfo, stack

if os.getenv("CHARVAR_CACHE"):
    charvar_cache_dir = pathlib.Path(os.getenv("CHARVAR_CACHE")).expanduser().resolve()
else:
    charvar_cache_dir = pathlib.Path("~/.cache/charvartools").expanduser().resolve()

if os.getenv("CHARVAR_LOG_DIR"):
    charvar_log_dir = pathlib.Path(os.getenv("CHARVAR_LOG_DIR")).expanduser().resolve()
else:
    charvar_log_dir = None

cache_info = {}
cache_info["cache_dir"] = charvar_cache_dir
cache_info["file_name"] = "intermediates.h5"
cache_info["format_version"] = "1"
cache_info["stages"] = ["p1", "p2", "p", "f_tilde"]

solver_config = {}
solver_config["max_univariate_degree"] = 64
solver_config["max_biform_bidegree"] = (16, 16)
solver_config["trace_iteration_cap"] = 500000
# None accepts any single radicand per computation
solver_config["radicands"] = None
solver_config["max_validated_n"] = 4

report_info = {}
report_info["schema_version"] = "1.0"
report_info["verdict_blown_up"] = "P2 blown up at {} points"
report_info["verdict_indeterminate"] = "indeterminate minimal ruled"

# Character varieties of M_br(1/n): component bidegrees with the canonical
# component check-marks (annotation only, never computed).
published_tables = {}
published_tables["components"] = {
    1: [((2, 3), True)],
    2: [((2, 2), False), ((4, 5), True)],
    3: [((2, 2), False), ((2, 2), False), ((6, 7), True)],
    4: [((2, 2), False), ((4, 4), False), ((8, 9), True)],
}
# Conic bundle components: singular defining polynomial on P2 x P1,
# Euler characteristic of the smooth model and the surface it is.
published_tables["conic_bundles"] = {
    1: [("-w^3*x*y + w^2*x^2*z + w^2*y^2*z - w*x*y*z^2 + u^2*(z^3 - 2*w^2*z)", 13, 10)],
    2: [("w^2*x^2 + w^2*y^2 - w*x*y*z + u^2*(z^2 - 2*w^2)", 10, 7)],
    3: [
        ("w^2*x^2 + w^2*y^2 - w*x*y*z + u^2*(z^2 - 3*w^2)", 10, 7),
        ("w^2*x^2 + w^2*y^2 - w*x*y*z + u^2*(z^2 - w^2)", 10, 7),
    ],
    4: [("w^2*x^2 + w^2*y^2 - w*x*y*z + u^2*(z^2 - 2*w^2)", 10, 7)],
}

global_verbosity = 1


class CharVarError(Exception):
    """Base class for structured failures of a pipeline stage.

    Args:
        msg (str): human readable description
        **detail: values describing the failure, stringified on export
    """

    stage = "unknown"

    def __init__(self, msg, **detail):
        super().__init__(msg)
        self.detail = detail

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "stage": self.stage,
            "message": str(self),
            "detail": {k: str(v) for k, v in sorted(self.detail.items())},
        }


def message(
    *args,
    message_verbosity=2,
    print_verbosity=None,
    log_verbosity=None,
    **kwargs,
):
    """The print function with verbosity levels and logging facility.

    Verbosity levels:

                    0: Errors

                    1: Warnings

                    2: Information

                    3: Debug

    Parameters
    ----------
    *args
        same arguments as to that of the print function
    message_verbosity : int
        priority of this message, lower is more important
    print_verbosity : int
        print all messages with message_verbosity at or below this level;
        defaults to ``global_verbosity``
    log_verbosity : int
        log all messages with message_verbosity at or below this level when
        ``$CHARVAR_LOG_DIR`` is set; defaults to ``print_verbosity``
    **kwargs
        same as that of the print function

    Returns
    -------
    int
        always 1
    """
    if print_verbosity is None:
        print_verbosity = global_verbosity
    if log_verbosity is None:
        log_verbosity = print_verbosity

    if message_verbosity <= print_verbosity:
        kwargs.setdefault("file", sys.stderr)
        print(*args, **kwargs)
    if charvar_log_dir is not None and message_verbosity <= log_verbosity:
        now = str(datetime.datetime.now())
        tstamp = (now[:10] + "_" + now[11:16]).replace(":", "-")
        caller = getframeinfo(stack()[1][0])
        charvar_log_dir.mkdir(parents=True, exist_ok=True)
        with open(charvar_log_dir / f"{tstamp}.log", "a") as log_file:
            if message_verbosity == 0:
                for line in traceback.format_stack():
                    log_file.write(line.strip())
                log_file.write("\n")
            text = " ".join(str(a) for a in args)
            log_file.write(f"{caller.filename}:{caller.lineno}\t{text}\n")
    return 1


def parse_radicands(text):
    """Parse a ``--radicands`` value such as ``"2,3"`` into a frozenset."""
    if text is None or str(text).strip() == "":
        return None
    values = []
    for chunk in str(text).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            value = int(chunk)
        except ValueError as err:
            raise ValueError(f"Radicand '{chunk}' is not an integer") from err
        if value < 2:
            raise ValueError(f"Radicand {value} must be at least 2")
        values.append(value)
    return frozenset(values)
