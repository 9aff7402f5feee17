"""Numerical toolkit for Bloch seminorms of finite Blaschke products.

Modules:

* ``products``   - Blaschke products, Mobius automorphisms, random families
* ``seminorm``   - pointwise Bloch objective and the multistart estimator
* ``slitdisk``   - maximal conformal radius of the radially slit disk
* ``surface``    - two-sheeted glued surface: parameter solve and radius
* ``pointbound`` - constructive boundary-anchored lower bound with certificate
* ``covering``   - critical points, monodromy and sheet structure
* ``constants``  - reference digits used by the verification CLI
* ``cli``        - command-line front end (``blochkit <subcommand>``)
"""

from ._kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
