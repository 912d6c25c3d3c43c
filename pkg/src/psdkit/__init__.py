"""psdkit: deterministic toolkit for layered design documents.

Submodules:
    document    layered document model and editing operations
    raster      RGBA rasters and PNG round-tripping
    blend       per-channel blend math and source-over compositing
    effects     layer effect and adjustment pixel algorithms
    compositor  whole-document rendering, prefix renders, group backdrops
    packbits    PackBits run-length codec
    psd_io      binary PSD subset reader/writer
    canonical   lossless canonical document format
    tools       design tool registry and executor
    dataset     training-tuple construction pipeline
    rl          reward / advantage / clipped-surrogate math
    workflow    iterative design loop and planners
    fixtures    bundled synthetic fixture corpus
    cli         batch command-line interface
"""

from . import errors

FORMAT_VERSION = 1
REGISTRY_VERSION = 1

__all__ = ["errors", "FORMAT_VERSION", "REGISTRY_VERSION"]
