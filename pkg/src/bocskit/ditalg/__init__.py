"""Layered ditalgebras at desk scale: modules, norms, reductions and descent."""

from .layer import (DitError, DitModule, EnormReport, Gen, Layer, dit_hom, end_data, endolength,
                    enorm, is_indecomposable, iso_test, norm, random_module)
