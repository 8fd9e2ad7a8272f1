from ._zetalab import *  # noqa: F401,F403
from ._zetalab import __doc__  # noqa: F401
