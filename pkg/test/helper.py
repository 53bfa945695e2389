""" Helper and diagnostic function for tests """

import datetime
import os
import sys
import traceback
from inspect import getframeinfo, stack
from pathlib import Path

import config

libpath = str(Path(__file__).resolve().parents[1])
if libpath not in sys.path:
    sys.path.append(libpath)

from charvartools.polycore import field_of_poly, parse_poly, same_up_to_unit  # noqa: E402

# Whitehead link, n = 1
WHITEHEAD_WORD = "b a b^-1 a^-1 b^-1 a b"
WHITEHEAD_P = (
    "r - m^2*r + m*s - m^3*s + 2*m*r^2*s - m^3*r^2*s - r*s^2 + 4*m^2*r*s^2"
    " - m^4*r*s^2 + m^2*r^3*s^2 - m*s^3 + m^3*s^3 - m*r^2*s^3 + 2*m^3*r^2*s^3"
    " - m^2*r*s^4 + m^4*r*s^4"
)
WHITEHEAD_P1 = f"r*({WHITEHEAD_P})"
WHITEHEAD_P2 = f"(s - 1)*(s + 1)*({WHITEHEAD_P})"
WHITEHEAD_F_TILDE = "-x*y - 2*z + x^2*z + y^2*z - x*y*z^2 + z^3"
WHITEHEAD_F = "-w^3*x*y - 2*u^2*w^2*z + w^2*x^2*z + w^2*y^2*z - w*x*y*z^2 + u^2*z^3"
WHITEHEAD_G = "-w^3*x*y + w^2*x^2*z + w^2*y^2*z - w*x*y*z^2"
WHITEHEAD_H = "z^3 - 2*w^2*z"
WHITEHEAD_SINGULAR = ["[1,0,0:1,0]", "[0,1,0:1,0]", "[1,-1,0:1,-1]", "[1,1,0:1,1]"]
WHITEHEAD_DET = "-1/4*w^2*z*(z^2 - 2*w^2)*(z - w)^2*(z + w)^2"

# Conic bundle component of M_br(1/2)
N2_F_TILDE = "x^2 + y^2 - x*y*z + z^2 - 2"
N2_F = "w^2*x^2 + w^2*y^2 - w*x*y*z + u^2*z^2 - 2*u^2*w^2"
N2_G = "w^2*x^2 + w^2*y^2 - w*x*y*z"
N2_H = "z^2 - 2*w^2"


def poly_matches(poly, text, varset, up_to_unit=True):
    """Compare a computed polynomial with reference text."""
    if up_to_unit:
        return same_up_to_unit(poly, parse_poly(text, varset))
    return poly == parse_poly(text, varset, d=field_of_poly(poly).d)


def message(
    *args,
    message_verbosity=2,
    print_verbosity=config.print_verbosity,
    log_verbosity=config.log_verbosity,
    **kwargs
):
    """The print function with verbosity levels and logging facility.

    Verbosity  levels:

                    0: Errors

                    1: Warnings

                    2: Information

    Messages are logged to ``$CHARVAR_LOG_DIR`` when it is set.

    Returns
    -------

                    1                   :   int
    """

    if message_verbosity <= print_verbosity:
        print(*args, **kwargs)
    log_dir = os.getenv("CHARVAR_LOG_DIR")
    if log_dir and message_verbosity <= log_verbosity:
        now = str(datetime.datetime.now())
        tstamp = (now[:10] + "_" + now[11:16]).replace(":", "-")
        caller = getframeinfo(stack()[1][0])
        os.makedirs(log_dir, exist_ok=True)

        with open(os.path.join(log_dir, "test_" + tstamp + ".log"), "a") as log_file:
            if message_verbosity == 0:
                for line in traceback.format_stack():
                    log_file.write(line.strip())
            log_file.write("\n")
            log_file.write("{}:{}\t{}".format(caller.filename, caller.lineno, " ".join(str(a) for a in args)))
            log_file.write("\n")
    return 1
