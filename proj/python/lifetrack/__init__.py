try:
    from ._lifetrack import *  # noqa: F401,F403
    from ._lifetrack import __doc__  # noqa: F401
except ImportError:  # extension on sys.path directly (in-tree builds)
    from _lifetrack import *  # noqa: F401,F403
