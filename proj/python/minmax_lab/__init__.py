"""Python surface of the min-max / VI / QVI laboratory.

Everything here is a thin re-export of the C++ core; see the project README
for the document formats and the `minmax-lab` CLI.
"""

try:  # wheel layout: the extension is installed inside the package
    from ._minmax_lab import *  # noqa: F401,F403
    from ._minmax_lab import gallery  # noqa: F401
except ImportError:  # in-tree build: the extension sits on sys.path
    from _minmax_lab import *  # noqa: F401,F403
    from _minmax_lab import gallery  # noqa: F401
