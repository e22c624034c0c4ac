"""Pursuit-evasion games in the plane and on metric graphs.

Three playable games:

* ``lions3``  -- three unit-speed lions catch a man in a bounded region
  with finitely many polygonal lakes;
* ``dodeca``  -- a man outruns two lions forever on the metric
  dodecahedron (every edge of length 4);
* ``fastman`` -- a man with speed 1 + eps escapes the convex hull of any
  finite number of unit-speed lions in the open plane.

The package is organized as: ``geom`` (planar primitives), ``polyline`` /
``region`` / ``geodesic`` (shortest paths and wall guards), ``engine``
(clock, motion, traces), one module per game, and ``cli`` / ``render``
for the command-line surface.
"""

__version__ = "0.1.0"
