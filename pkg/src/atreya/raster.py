"""SVG to PNG rasterization via the system librsvg + cairo libraries.

Molecule depictions arrive from the service as SVG; chat transports want
PNG. librsvg and cairo ship as shared libraries on every mainstream Linux
distribution, so a small ctypes binding avoids pulling in a compiled
Python dependency. Each render uses its own handle and surface, making the
function safe under arbitrary concurrency.
"""

from __future__ import annotations

import ctypes
import ctypes.util
import threading
import xml.etree.ElementTree as ET

MIN_SIZE = 64
MAX_SIZE = 2048
DEFAULT_SIZE = 500

_CAIRO_FORMAT_ARGB32 = 0
_CAIRO_STATUS_SUCCESS = 0


class RasterizeError(Exception):
    """The SVG could not be rendered to PNG."""


class _GError(ctypes.Structure):
    _fields_ = [
        ("domain", ctypes.c_uint32),
        ("code", ctypes.c_int),
        ("message", ctypes.c_char_p),
    ]


class _RsvgRectangle(ctypes.Structure):
    _fields_ = [
        ("x", ctypes.c_double),
        ("y", ctypes.c_double),
        ("width", ctypes.c_double),
        ("height", ctypes.c_double),
    ]


_WriteFunc = ctypes.CFUNCTYPE(ctypes.c_int, ctypes.c_void_p, ctypes.POINTER(ctypes.c_ubyte), ctypes.c_uint)

_libs_lock = threading.Lock()
_libs: tuple | None = None


def _load_libs():
    global _libs
    with _libs_lock:
        if _libs is not None:
            return _libs
        names = {"rsvg-2": None, "cairo": None, "gobject-2.0": None}
        handles = {}
        for name in names:
            found = ctypes.util.find_library(name)
            if not found:
                raise RasterizeError(f"system library lib{name} not found; install librsvg2/cairo")
            handles[name] = ctypes.CDLL(found)
        rsvg, cairo, gobject = handles["rsvg-2"], handles["cairo"], handles["gobject-2.0"]

        rsvg.rsvg_handle_new_from_data.restype = ctypes.c_void_p
        rsvg.rsvg_handle_new_from_data.argtypes = [
            ctypes.c_char_p,
            ctypes.c_size_t,
            ctypes.POINTER(ctypes.POINTER(_GError)),
        ]
        rsvg.rsvg_handle_get_intrinsic_size_in_pixels.restype = ctypes.c_bool
        rsvg.rsvg_handle_get_intrinsic_size_in_pixels.argtypes = [
            ctypes.c_void_p,
            ctypes.POINTER(ctypes.c_double),
            ctypes.POINTER(ctypes.c_double),
        ]
        rsvg.rsvg_handle_render_document.restype = ctypes.c_bool
        rsvg.rsvg_handle_render_document.argtypes = [
            ctypes.c_void_p,
            ctypes.c_void_p,
            ctypes.POINTER(_RsvgRectangle),
            ctypes.POINTER(ctypes.POINTER(_GError)),
        ]
        cairo.cairo_image_surface_create.restype = ctypes.c_void_p
        cairo.cairo_image_surface_create.argtypes = [ctypes.c_int, ctypes.c_int, ctypes.c_int]
        cairo.cairo_create.restype = ctypes.c_void_p
        cairo.cairo_create.argtypes = [ctypes.c_void_p]
        cairo.cairo_destroy.argtypes = [ctypes.c_void_p]
        cairo.cairo_surface_destroy.argtypes = [ctypes.c_void_p]
        cairo.cairo_surface_write_to_png_stream.restype = ctypes.c_int
        cairo.cairo_surface_write_to_png_stream.argtypes = [ctypes.c_void_p, _WriteFunc, ctypes.c_void_p]
        gobject.g_object_unref.argtypes = [ctypes.c_void_p]

        _libs = (rsvg, cairo, gobject)
        return _libs


def _error_text(err) -> str:
    if err and err.contents and err.contents.message:
        return err.contents.message.decode("utf-8", "replace")
    return "unknown rendering error"


def render_png(svg: bytes, size: int = DEFAULT_SIZE) -> bytes:
    """Rasterize SVG bytes to a PNG whose longer dimension equals `size`.

    Aspect ratio is preserved; SVGs with no usable intrinsic size render
    into a square. Raises RasterizeError on malformed input.
    """
    if not MIN_SIZE <= size <= MAX_SIZE:
        raise ValueError(f"size must lie in [{MIN_SIZE}, {MAX_SIZE}]")
    try:
        ET.fromstring(svg)
    except ET.ParseError as exc:
        raise RasterizeError(f"not well-formed XML: {exc}") from exc

    rsvg, cairo, gobject = _load_libs()

    err = ctypes.POINTER(_GError)()
    handle = rsvg.rsvg_handle_new_from_data(svg, len(svg), ctypes.byref(err))
    if not handle:
        raise RasterizeError(_error_text(err))

    try:
        width = ctypes.c_double()
        height = ctypes.c_double()
        ok = rsvg.rsvg_handle_get_intrinsic_size_in_pixels(
            handle, ctypes.byref(width), ctypes.byref(height)
        )
        if ok and width.value > 0 and height.value > 0:
            if width.value >= height.value:
                out_w = size
                out_h = max(1, round(height.value * size / width.value))
            else:
                out_h = size
                out_w = max(1, round(width.value * size / height.value))
        else:
            out_w = out_h = size

        surface = cairo.cairo_image_surface_create(_CAIRO_FORMAT_ARGB32, out_w, out_h)
        context = cairo.cairo_create(surface)
        try:
            viewport = _RsvgRectangle(0.0, 0.0, float(out_w), float(out_h))
            render_err = ctypes.POINTER(_GError)()
            rendered = rsvg.rsvg_handle_render_document(
                handle, context, ctypes.byref(viewport), ctypes.byref(render_err)
            )
            if not rendered:
                raise RasterizeError(_error_text(render_err))

            chunks: list[bytes] = []

            def _collect(_closure, data, length):
                chunks.append(ctypes.string_at(data, length))
                return _CAIRO_STATUS_SUCCESS

            callback = _WriteFunc(_collect)
            status = cairo.cairo_surface_write_to_png_stream(surface, callback, None)
            if status != _CAIRO_STATUS_SUCCESS:
                raise RasterizeError(f"cairo PNG writer failed with status {status}")
            return b"".join(chunks)
        finally:
            cairo.cairo_destroy(context)
            cairo.cairo_surface_destroy(surface)
    finally:
        gobject.g_object_unref(handle)
