"""PNG decoding shared by the KEGG cache and the renderer."""

import io

from PIL import Image, UnidentifiedImageError

from utils.exceptions import ImageDecodeError


def decode_png(data: bytes, source: str | None = None) -> Image.Image:
    """Fully decode PNG bytes into an RGB image."""
    try:
        image = Image.open(io.BytesIO(data))
        if image.format != "PNG":
            raise ImageDecodeError(f"expected PNG, found {image.format}", source)
        image.load()
    except ImageDecodeError:
        raise
    except (OSError, SyntaxError, ValueError, UnidentifiedImageError) as e:
        raise ImageDecodeError(f"cannot decode PNG: {e}", source) from e
    return image.convert("RGB")


def encode_png(image: Image.Image) -> bytes:
    """Encode with fixed settings; Pillow writes no timestamp chunks."""
    buffer = io.BytesIO()
    image.save(buffer, format="PNG", optimize=False, compress_level=6)
    return buffer.getvalue()
