"""Adapter stubs for real saliency producers.

These document the shape a real adapter takes; none of them is required
by the tests, and none pulls in an ML framework. A concrete adapter only
has to return (raw_map, image_size) per image-text pair, then feed
ExportRecord + export_records as the mock producer does.

The attention layer to hook is model-specific and not standardized here;
every stub takes it as an explicit `layer` argument.
"""

from __future__ import annotations

from .errors import ExporterError


class AdapterUnavailable(ExporterError):
    """Raised by stubs: the corresponding framework integration is not bundled."""


def clip_gradcam(image, text, *, variant: str = "RN50x16", layer: str | None = None):
    """GradCAM over a CLIP image encoder for an image-text pair.

    A real implementation would load the named CLIP variant, run the
    similarity score backward, and pool gradients over `layer`'s
    activations into a raw H'xW' grid.
    """
    raise AdapterUnavailable("CLIP adapter is a documented stub; install and wire a CLIP runtime to use it")


def blip_itm_gradcam(image, text, *, layer: str | None = None):
    """GradCAM over a BLIP image-text-matching head."""
    raise AdapterUnavailable("BLIP adapter is a documented stub; install and wire a BLIP runtime to use it")


def albef_gradcam(image, text, *, layer: str | None = None):
    """GradCAM over an ALBEF cross-attention layer."""
    raise AdapterUnavailable("ALBEF adapter is a documented stub; install and wire an ALBEF runtime to use it")
