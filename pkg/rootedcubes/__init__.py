"""Cubical sets of set families.
"""
__version__ = "0.1.0"

__title__ = "rootedcubes"
__description__ = "Cubical homology of simply rooted families of sets, with exhaustive checks."
__url__ = "https://github.com/rootedcubes/rootedcubes"
__uri__ = __url__
__doc__ = __description__ + " <" + __uri__ + ">"

__author__ = "The rootedcubes developers"

__email__ = "rootedcubes@users.noreply.github.com"

__license__ = "MIT"
__copyright__ = "Copyright (c) 2026 The rootedcubes developers"
