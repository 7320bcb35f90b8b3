"""Two-dimensional Hilbert geometry: the cross-ratio metric on bounded convex
domains, geodesic probes, and classification of maps between domains as
projective isometries, non-projective isometries or non-isometries."""
from .convex_domain import (INFINITE, Chord, ConvexDomain, Ellipse, Location, Polygon,
                            ShapeClass, SuperEllipse, chord_endpoints, classify_shape, contains,
                            domain_from_json, extreme_points, regular_polygon, unit_disk)
from .errors import HilbertError
from .geom_core import (HomPoint, ProjLine, ProjMap, apply, collinearity_defect, cross_ratio,
                        fit_projective)
from .hilbert_metric import (GeodesicReport, distance, distances, metric_ball,
                             segment_additivity, unique_geodesic_probe)
from .webs_isometry import (ClassificationReport, ClassifyConfig, Pencil, SampledMap, Verdict,
                            Web, classify_map, five_pole_check, pencil_lines,
                            quadrilateral_patch_check, web_image_check)

__version__ = "0.1.0"
